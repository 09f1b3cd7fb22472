"""Small finite groups with a presentation and a faithful permutation representation."""

from __future__ import annotations

from dataclasses import dataclass

from oracles import from_cycles


@dataclass(frozen=True)
class KnownGroup:
    name: str
    text: str
    perms: tuple
    order: int


def _mul7(k):
    return tuple((k * x) % 7 for x in range(7))


def _direct(p, q):
    """Permutation of the disjoint union; ``q`` acts on the shifted points."""
    n = len(p)
    return tuple(p) + tuple(n + x for x in q)


_S3a, _S3b = from_cycles(3, (0, 1)), from_cycles(3, (0, 1, 2))
_S4a, _S4b = from_cycles(4, (0, 1)), from_cycles(4, (1, 2, 3))
_id4 = tuple(range(4))

GROUPS = [
    KnownGroup("C6", "< a | a^6 >", (from_cycles(6, (0, 1, 2, 3, 4, 5)),), 6),
    KnownGroup("S3", "< a, b | a^2, b^3, (a*b)^2 >", (_S3a, _S3b), 6),
    KnownGroup("D4", "< a, b | a^4, b^2, (a*b)^2 >",
               (from_cycles(4, (0, 1, 2, 3)), from_cycles(4, (1, 3))), 8),
    KnownGroup("Q8", "< a, b | a^4, a^2 = b^2, b^-1*a*b = a^-1 >",
               (from_cycles(8, (0, 1, 3, 6), (2, 5, 7, 4)), from_cycles(8, (0, 2, 3, 7), (1, 4, 6, 5))), 8),
    KnownGroup("D5", "< a, b | a^5, b^2, (a*b)^2 >",
               (from_cycles(5, (0, 1, 2, 3, 4)), from_cycles(5, (1, 4), (2, 3))), 10),
    KnownGroup("A4", "< a, b | a^2, b^3, (a*b)^3 >",
               (from_cycles(4, (0, 1), (2, 3)), from_cycles(4, (0, 1, 2))), 12),
    KnownGroup("C4xC4", "< a, b | a^4, b^4, [a,b] >",
               (from_cycles(8, (0, 1, 2, 3)), from_cycles(8, (4, 5, 6, 7))), 16),
    KnownGroup("C2^3", "< a, b, c | a^2, b^2, c^2, [a,b], [a,c], [b,c] >",
               (from_cycles(6, (0, 1)), from_cycles(6, (2, 3)), from_cycles(6, (4, 5))), 8),
    KnownGroup("C3xS3", "< a, b, c | a^2, b^3, (a*b)^2, c^3, [a,c], [b,c] >",
               (_direct(_S3a, (0, 1, 2)), _direct(_S3b, (0, 1, 2)), _direct((0, 1, 2), (1, 2, 0))), 18),
    KnownGroup("F21", "< a, b | a^7, b^3, b^-1*a*b = a^2 >",
               (from_cycles(7, (0, 1, 2, 3, 4, 5, 6)), _mul7(2)), 21),
    KnownGroup("S4", "< a, b | a^2, b^3, (a*b)^4 >", (_S4a, _S4b), 24),
    KnownGroup("S4xC2", "< a, b, c | a^2, b^3, (a*b)^4, c^2, [a,c], [b,c] >",
               (_direct(_S4a, (0, 1)), _direct(_S4b, (0, 1)), _direct(_id4, (1, 0))), 48),
    KnownGroup("C5xC3", "< a, b | a^5, b^3, a*b = b*a >",
               (from_cycles(8, (0, 1, 2, 3, 4)), from_cycles(8, (5, 6, 7))), 15),
    KnownGroup("D6", "< a, b | a^6, b^2, (a*b)^2 >",
               (from_cycles(6, (0, 1, 2, 3, 4, 5)), from_cycles(6, (1, 5), (2, 4))), 12),
]
