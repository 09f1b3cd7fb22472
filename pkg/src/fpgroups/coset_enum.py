"""Todd-Coxeter coset enumeration.

Coset numbers are 0-based in Python: coset 0 is the subgroup itself.  The
text format written by :func:`format_table` is 1-based with 0 for an
undefined entry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _tc_kernel as kernel
from .words import Presentation, Word, cyclic_reduce, free_reduce, invert

DEFAULT_MAX_COSETS = 1_000_000


class Strategy(str, enum.Enum):
    HLT = "hlt"
    FELSCH = "felsch"


@dataclass(frozen=True)
class EnumerationParams:
    strategy: Strategy = Strategy.HLT
    max_cosets: int = DEFAULT_MAX_COSETS

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.max_cosets < 1:
            raise ValueError("max_cosets must be at least 1")


@dataclass(frozen=True)
class EnumStats:
    total_defined: int
    max_active: int
    active: int
    # (cosets defined so far, active cosets) samples for plotting
    trace: tuple[tuple[int, int], ...] = field(default=(), repr=False)


def column(x: int) -> int:
    """Table column of a letter: ``2g`` for generator ``g``, ``2g + 1`` for its inverse."""
    return 2 * (abs(x) - 1) + (x < 0)


def column_letter(col: int) -> int:
    g = col >> 1
    return -(g + 1) if col & 1 else g + 1


class IncompleteTableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CosetTable:
    """Complete action of the generators on cosets.

    ``table[c, column(x)]`` is the image of coset ``c`` under letter ``x``.
    """

    table: np.ndarray
    ngens: int
    stats: EnumStats | None = None

    def __post_init__(self):
        t = np.ascontiguousarray(self.table, dtype=np.int32)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        if t.ndim != 2 or t.shape[1] != 2 * self.ngens:
            raise ValueError(f"table shape {t.shape} does not match {self.ngens} generators")

    @property
    def index(self) -> int:
        return self.table.shape[0]

    def __eq__(self, other):
        if not isinstance(other, CosetTable):
            return NotImplemented
        return self.ngens == other.ngens and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.ngens, self.table.tobytes()))

    @property
    def is_complete(self) -> bool:
        return bool((self.table >= 0).all())

    def act(self, c: int, x: int) -> int:
        return int(self.table[c, column(x)])

    def trace(self, c: int, w: Sequence[int]) -> int | None:
        """Image of coset ``c`` under ``w``, or None once an entry is undefined."""
        t = self.table
        for x in w:
            c = int(t[c, column(x)])
            if c < 0:
                return None
        return c

    def permutations(self) -> list[tuple[int, ...]]:
        return permutation_rep(self)


@dataclass(frozen=True)
class EnumResult:
    """Outcome of an enumeration: a table, or overflow with the statistics at abandonment."""

    table: CosetTable | None
    stats: EnumStats

    @property
    def complete(self) -> bool:
        return self.table is not None

    @property
    def overflow(self) -> bool:
        return self.table is None

    @property
    def index(self) -> int | None:
        return None if self.table is None else self.table.index


def _flatten(words: Sequence[Word]) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(len(words) + 1, dtype=np.int64)
    flat: list[int] = []
    for k, w in enumerate(words):
        flat.extend(column(x) for x in w)
        off[k + 1] = len(flat)
    return np.asarray(flat, dtype=np.int32), off


def _conjugates_by_column(relators: Sequence[Word], ncol: int):
    """All cyclic conjugates of relators and their inverses, grouped by first column."""
    seen = set()
    conj: list[Word] = []
    for r in relators:
        for w in (r, invert(r)):
            for i in range(len(w)):
                c = w[i:] + w[:i]
                if c not in seen:
                    seen.add(c)
                    conj.append(c)
    conj.sort(key=lambda w: column(w[0]))
    words, off = _flatten(conj)
    ptr = np.zeros(ncol + 1, dtype=np.int64)
    for w in conj:
        ptr[column(w[0]) + 1] += 1
    ptr = np.cumsum(ptr)
    idx = np.arange(len(conj), dtype=np.int64)
    return words, off, ptr, idx


def _check_words(p: Presentation, words: Sequence[Word], what: str):
    for w in words:
        if any(x == 0 or abs(x) > p.ngens for x in w):
            raise ValueError(f"{what} word {w} uses a generator outside the presentation")


def enumerate_cosets(
    p: Presentation,
    subgroup: Sequence[Word] = (),
    params: EnumerationParams | None = None,
    *,
    max_cosets: int | None = None,
    strategy: Strategy | str | None = None,
) -> EnumResult:
    """Enumerate the cosets of the subgroup generated by ``subgroup`` in the group of ``p``.

    Deterministic for fixed inputs.  Running out of room is reported as an
    overflow result, not raised.
    """
    params = params or EnumerationParams()
    if max_cosets is not None or strategy is not None:
        params = EnumerationParams(
            strategy=strategy if strategy is not None else params.strategy,
            max_cosets=max_cosets if max_cosets is not None else params.max_cosets,
        )
    _check_words(p, subgroup, "subgroup")
    sub = [free_reduce(w) for w in subgroup]
    sub = [w for w in sub if w]
    ncol = 2 * p.ngens
    if p.ngens == 0:
        table = np.zeros((1, 0), dtype=np.int32)
        return EnumResult(CosetTable(table, 0, EnumStats(1, 1, 1, ((1, 1),))), EnumStats(1, 1, 1, ((1, 1),)))

    rels = [cyclic_reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    rwords, roff = _flatten(rels)
    swords, soff = _flatten(sub)
    cwords, coff, cptr, cidx = _conjugates_by_column(rels, ncol)
    maxlen = max([1] + [len(w) for w in rels] + [len(w) for w in sub])
    hard_cap = params.max_cosets + params.max_cosets // 4 + maxlen + 2
    felsch = 1 if params.strategy is Strategy.FELSCH else 0
    table, st, trace = kernel.enumerate_cosets(
        ncol, rwords, roff, swords, soff, cwords, coff, cptr, cidx,
        felsch, params.max_cosets, hard_cap,
    )
    samples = tuple((int(a), int(b)) for a, b in trace[: st[kernel.TRACE_N]])
    stats = EnumStats(
        total_defined=int(st[kernel.TOTAL]),
        max_active=int(st[kernel.MAX_ACTIVE]),
        active=int(st[kernel.ACTIVE]),
        trace=samples,
    )
    if st[kernel.OVERFLOW]:
        return EnumResult(None, stats)
    table = kernel.standardize_table(table)
    code = kernel.table_violation(table, rwords, roff, swords, soff)
    if code:
        raise RuntimeError(f"enumeration produced an invalid coset table (check {code})")
    return EnumResult(CosetTable(table, p.ngens, stats), stats)


def standardize(t: CosetTable) -> CosetTable:
    if not t.is_complete:
        raise IncompleteTableError("cannot standardize an incomplete table")
    return CosetTable(kernel.standardize_table(np.array(t.table)), t.ngens, t.stats)


def is_valid(t: CosetTable, p: Presentation, subgroup: Sequence[Word] = ()) -> bool:
    rwords, roff = _flatten([r for r in p.relators])
    swords, soff = _flatten([free_reduce(w) for w in subgroup])
    return kernel.table_violation(np.array(t.table), rwords, roff, swords, soff) == 0


def trace(t: CosetTable, c: int, w: Sequence[int]) -> int | None:
    return t.trace(c, w)


def permutation_rep(t: CosetTable) -> list[tuple[int, ...]]:
    """One permutation of ``range(index)`` per generator, in image-list form."""
    if not t.is_complete:
        raise IncompleteTableError("permutation representation needs a complete table")
    return [tuple(int(c) for c in t.table[:, 2 * g]) for g in range(t.ngens)]


def group_order(p: Presentation, params: EnumerationParams | None = None, **kw) -> int | None:
    """Order of the group, via enumeration over the trivial subgroup; None on overflow."""
    return enumerate_cosets(p, (), params, **kw).index


# --- text format ---------------------------------------------------------

def format_table(t: CosetTable) -> str:
    lines = [f"cosets={t.index} generators={t.ngens}"]
    for row in t.table:
        lines.append(" ".join(str(int(v) + 1) for v in row))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CosetTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty coset table file")
    header = dict(kv.split("=", 1) for kv in lines[0].split())
    n, d = int(header["cosets"]), int(header["generators"])
    rows = [[int(v) - 1 for v in ln.split()] for ln in lines[1:]]
    if len(rows) != n or any(len(r) != 2 * d for r in rows):
        raise ValueError("coset table body does not match its header")
    return CosetTable(np.array(rows, dtype=np.int32).reshape(n, 2 * d), d)
