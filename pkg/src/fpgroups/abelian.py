"""Abelian quotients: relation matrices, Smith normal form, modular invariants."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .words import Presentation, exponent_vector


class EntryGrowthError(ArithmeticError):
    """An intermediate entry exceeded the configured digit budget."""


@dataclass(frozen=True)
class RelationMatrix:
    """Exponent-sum matrix: one row per relator, one column per generator."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged relation matrix")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "RelationMatrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(rows), ncols)


def relation_matrix(p: Presentation) -> RelationMatrix:
    return RelationMatrix(tuple(tuple(exponent_vector(r, p.ngens)) for r in p.relators), p.ngens)


# --- sparse diagonalization ----------------------------------------------

class _Sparse:
    """Row dicts plus a column -> rows index, reduced modulo ``modulus`` when given."""

    def __init__(self, rows: Iterable[Sequence[int]], modulus: int | None = None, digit_budget: int | None = None):
        self.mod = modulus
        self.budget = digit_budget
        self.max_abs = 0
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for i, r in enumerate(rows):
            d = {}
            for j, v in enumerate(r):
                if modulus is not None:
                    v %= modulus
                if v:
                    d[j] = v
            if d:
                self.rows[i] = d
                for j in d:
                    self.cols.setdefault(j, set()).add(i)
                self._watch(d.values())

    def _watch(self, values):
        if self.budget is None:
            return
        for v in values:
            if abs(v) > self.max_abs:
                self.max_abs = abs(v)
        if len(str(self.max_abs)) > self.budget:
            raise EntryGrowthError(f"entry with {len(str(self.max_abs))} digits exceeds budget {self.budget}")

    def add_row_multiple(self, target: int, source: int, q: int):
        """row[target] -= q * row[source]"""
        if q == 0:
            return
        t = self.rows[target]
        mod = self.mod
        for j, v in self.rows[source].items():
            nv = t.get(j, 0) - q * v
            if mod is not None:
                nv %= mod
            if nv:
                if j not in t:
                    self.cols.setdefault(j, set()).add(target)
                t[j] = nv
            elif j in t:
                del t[j]
                self.cols[j].discard(target)
        if self.budget is not None:
            self._watch(t.values())
        if not t:
            del self.rows[target]

    def add_col_multiple(self, target: int, source: int, q: int):
        """col[target] -= q * col[source]"""
        if q == 0:
            return
        mod = self.mod
        for i in list(self.cols.get(source, ())):
            r = self.rows[i]
            nv = r.get(target, 0) - q * r[source]
            if mod is not None:
                nv %= mod
            if nv:
                if target not in r:
                    self.cols.setdefault(target, set()).add(i)
                r[target] = nv
            elif target in r:
                del r[target]
                self.cols[target].discard(i)
            if self.budget is not None:
                self._watch((nv,))

    def drop(self, i: int, j: int):
        """Remove pivot row ``i`` whose only entry is in column ``j``."""
        del self.rows[i]
        self.cols[j].discard(i)


def _diagonalize(rows: Iterable[Sequence[int]], digit_budget: int | None = None) -> tuple[list[int], int]:
    """Diagonal entries (positive, unordered) of an integer matrix under unimodular moves, and the max entry seen."""
    m = _Sparse(rows, digit_budget=digit_budget)
    diag: list[int] = []
    while m.rows:
        # minimal |entry|, ties by sparsest row then sparsest column then position
        best = None
        for i, r in m.rows.items():
            lr = len(r)
            for j, v in r.items():
                key = (abs(v), lr, len(m.cols[j]), i, j)
                if best is None or key < best:
                    best = key
            if best[0] == 1 and best[1] == 1:
                break
        _, _, _, i, j = best
        piv = m.rows[i][j]
        # clear column j with row operations
        dirty = False
        for k in sorted(m.cols[j] - {i}):
            q = _nearest_quotient(m.rows[k][j], piv)
            m.add_row_multiple(k, i, q)
            if k in m.rows and j in m.rows[k]:
                dirty = True
        # clear row i with column operations; column j now meets only row i unless dirty
        if not dirty:
            for jj in sorted(set(m.rows[i]) - {j}):
                q = _nearest_quotient(m.rows[i][jj], piv)
                m.add_col_multiple(jj, j, q)
                if jj in m.rows[i]:
                    dirty = True
        if dirty:
            continue
        diag.append(abs(piv))
        m.drop(i, j)
    return diag, m.max_abs


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    # r has the sign of b; stepping q once more leaves |r - b| < |b| / 2
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def divisor_chain(diagonal: Iterable[int]) -> list[int]:
    """Normalize positive diagonal entries to ``d1 | d2 | ...`` (same multiset product)."""
    diagonal = list(diagonal)
    ones = [d for d in diagonal if d == 1]
    rest = sorted(d for d in diagonal if d != 1)
    for a in range(len(rest)):
        for b in range(a + 1, len(rest)):
            x, y = rest[a], rest[b]
            g = gcd(x, y)
            rest[a], rest[b] = g, x // g * y
    return ones + rest


@dataclass(frozen=True)
class SmithForm:
    """Nonzero Smith diagonal ``d1 | d2 | ... | d_rank``."""

    diagonal: tuple[int, ...]
    ncols: int
    max_entry: int = 0

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(m: RelationMatrix | Sequence[Sequence[int]], *, digit_budget: int | None = None) -> SmithForm:
    """Invariant factors of an integer matrix.

    ``digit_budget`` bounds the decimal digits of any intermediate entry;
    exceeding it raises :class:`EntryGrowthError`.
    """
    if not isinstance(m, RelationMatrix):
        m = RelationMatrix.from_rows(m)
    diag, max_abs = _diagonalize(m.rows, digit_budget)
    return SmithForm(tuple(divisor_chain(diag)), m.ncols, max_abs)


@dataclass(frozen=True)
class AbelianInvariants:
    """Finitely generated abelian group: torsion divisor chain plus free rank."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError("torsion coefficients must be at least 2")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"{t} is not a divisor chain")
        object.__setattr__(self, "torsion", t)

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def primary_parts(self) -> dict[int, list[int]]:
        """Prime -> sorted prime-power orders of the cyclic factors."""
        parts: dict[int, list[int]] = {}
        for d in self.torsion:
            for q, e in _factorize(d).items():
                parts.setdefault(q, []).append(q**e)
        return {q: sorted(v) for q, v in sorted(parts.items())}

    def __str__(self) -> str:
        bits = [f"C{d}" for d in self.torsion]
        if self.free_rank:
            bits.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(bits) if bits else "1"

    def compact(self) -> str:
        """Exponent notation, e.g. ``C4^2 x Z^3``."""
        counts = Counter(self.torsion)
        bits = [f"C{d}" if k == 1 else f"C{d}^{k}" for d, k in sorted(counts.items())]
        if self.free_rank:
            bits.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(bits) if bits else "1"

    def primary_str(self) -> str:
        bits = []
        for q, orders in self.primary_parts().items():
            for d, k in sorted(Counter(orders).items()):
                bits.append(f"C{d}" if k == 1 else f"C{d}^{k}")
        if self.free_rank:
            bits.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(bits) if bits else "1"


def invariants_from_smith(s: SmithForm) -> AbelianInvariants:
    return AbelianInvariants(tuple(d for d in s.diagonal if d > 1), s.ncols - s.rank)


def abelian_invariants(p: Presentation | RelationMatrix, *, digit_budget: int | None = None) -> AbelianInvariants:
    m = relation_matrix(p) if isinstance(p, Presentation) else p
    return invariants_from_smith(smith_normal_form(m, digit_budget=digit_budget))


def _factorize(n: int) -> dict[int, int]:
    from sympy import factorint

    return {int(q): int(e) for q, e in factorint(n).items()}


def _prime_power(m: int) -> tuple[int, int] | None:
    from sympy import isprime, perfect_power

    if m < 2:
        return None
    if isprime(m):
        return m, 1
    pp = perfect_power(m)
    if pp:
        base, e = pp
        # perfect_power may return a composite base, e.g. 64 -> (8, 2)
        f = _factorize(base)
        if len(f) == 1:
            (q, k), = f.items()
            return q, k * e
    return None


# --- modular diagonalization ---------------------------------------------

@dataclass(frozen=True)
class ModularInvariants:
    """Invariants of the relation matrix over the integers mod a prime power."""

    modulus: int
    prime: int
    cyclic: tuple[int, ...]
    unconstrained: int

    def __str__(self) -> str:
        counts = Counter(self.cyclic)
        bits = [f"C{d}" if k == 1 else f"C{d}^{k}" for d, k in sorted(counts.items())]
        if self.unconstrained:
            bits.append("Cinf" if self.unconstrained == 1 else f"Cinf^{self.unconstrained}")
        body = " x ".join(bits) if bits else "1"
        return f"{body} mod {self.modulus}"


def _valuation(v: int, q: int) -> int:
    k = 0
    while v % q == 0:
        v //= q
        k += 1
    return k


def invariants_mod(m: RelationMatrix | Presentation, modulus: int) -> ModularInvariants:
    """Diagonalize over Z/modulus for a prime-power ``modulus``.

    Cyclic factors are the diagonal entries ``q^v`` with ``0 < v < k``;
    columns whose diagonal vanishes mod ``q^k`` count as unconstrained.
    """
    if isinstance(m, Presentation):
        m = relation_matrix(m)
    pp = _prime_power(int(modulus))
    if pp is None:
        raise ValueError(f"modulus {modulus} is not a prime power")
    q, k = pp
    mod = int(modulus)
    sp = _Sparse(m.rows, modulus=mod)
    orders: list[int] = []
    pivots = 0
    while sp.rows:
        best = None
        for i, r in sp.rows.items():
            for j, v in r.items():
                key = (_valuation(v, q), len(r), i, j)
                if best is None or key < best:
                    best = key
            if best[0] == 0 and best[1] == 1:
                break
        val, _, i, j = best
        piv = sp.rows[i][j]
        unit = piv // q**val
        uinv = pow(unit, -1, mod)
        # every entry is divisible by q^val, so elimination is exact
        for kk in sorted(sp.cols[j] - {i}):
            f = (sp.rows[kk][j] // q**val) * uinv % mod
            sp.add_row_multiple(kk, i, f)
        for jj in sorted(set(sp.rows[i]) - {j}):
            f = (sp.rows[i][jj] // q**val) * uinv % mod
            sp.add_col_multiple(jj, j, f)
        sp.drop(i, j)
        pivots += 1
        if val:
            orders.append(q**val)
    return ModularInvariants(mod, q, tuple(sorted(orders)), m.ncols - pivots)


# --- torsion bound --------------------------------------------------------

_RANK_PRIME = (1 << 31) - 1


def _pivot_columns(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Pivot columns of the row echelon form mod a large prime, columns taken in order.

    Applied to a transpose this yields the lexicographically first
    independent set of rows.
    """
    P = _RANK_PRIME
    if not rows or ncols == 0:
        return []
    A = np.array([[v % P for v in r] for r in rows], dtype=np.int64)
    nrows = A.shape[0]
    pivots = []
    r = 0
    for j in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, j])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, j]), -1, P) % P
        below = r + 1 + np.flatnonzero(A[r + 1:, j])
        if below.size:
            A[below] = (A[below] - np.outer(A[below, j], A[r]) % P) % P
        pivots.append(j)
        r += 1
    return pivots


def _det_mod(rows: Sequence[Sequence[int]], q: int) -> int:
    A = np.array([[v % q for v in r] for r in rows], dtype=np.int64)
    n = A.shape[0]
    det = 1
    for j in range(n):
        nz = np.flatnonzero(A[j:, j])
        if nz.size == 0:
            return 0
        k = j + int(nz[0])
        if k != j:
            A[[j, k]] = A[[k, j]]
            det = -det
        piv = int(A[j, j])
        det = det * piv % q
        A[j] = A[j] * pow(piv, -1, q) % q
        below = j + 1 + np.flatnonzero(A[j + 1:, j])
        if below.size:
            A[below] = (A[below] - np.outer(A[below, j], A[j]) % q) % q
    return det % q


def _abs_det(rows: Sequence[Sequence[int]]) -> int:
    """|det| by multi-modular elimination and CRT, stopping past the Hadamard bound."""
    from math import isqrt

    from sympy import prevprime

    bound = 1
    for r in rows:
        bound *= isqrt(sum(v * v for v in r)) + 1
    modulus, residue = 1, 0
    q = _RANK_PRIME
    while modulus <= 2 * bound:
        q = prevprime(q)
        d = _det_mod(rows, q)
        # combine residue mod modulus with d mod q
        t = (d - residue) * pow(modulus, -1, q) % q
        residue += modulus * t
        modulus *= q
    if residue > modulus // 2:
        residue -= modulus
    return abs(residue)


@dataclass(frozen=True)
class TorsionBound:
    """``bound`` is a multiple of the torsion order, or None when the matrix has rank 0."""

    bound: int | None
    free_rank: int
    determinants: tuple[int, ...] = field(default=())


def torsion_order_bound(m: RelationMatrix | Presentation, selections: int = 2) -> TorsionBound:
    """Gcd of |det| over full-rank square submatrices picked by greedy pivoting.

    Selection ``s`` scans rows in forward order for ``s = 0``, reverse order
    for ``s = 1``, and a fixed rotation of the rows after that; columns are
    the pivot columns of the chosen rows.  Each minor of size rank is a
    multiple of the product of the invariant factors.
    """
    if isinstance(m, Presentation):
        m = relation_matrix(m)
    n = m.nrows
    orders = []
    for s in range(max(2, selections)):
        if s == 0:
            orders.append(list(range(n)))
        elif s == 1:
            orders.append(list(range(n - 1, -1, -1)))
        else:
            shift = (s * n) // (selections + 1)
            orders.append(list(range(shift, n)) + list(range(shift)))
    dets = []
    rank = 0
    for order in orders:
        picked = _pivot_columns([[m.rows[i][j] for i in order] for j in range(m.ncols)], n)
        rows = sorted(order[k] for k in picked)
        rank = len(rows)
        if rank == 0:
            break
        cols = _pivot_columns([m.rows[i] for i in rows], m.ncols)
        minor = [[m.rows[i][j] for j in cols] for i in rows]
        dets.append(_abs_det(minor))
    if rank == 0:
        return TorsionBound(None, m.ncols, ())
    g = 0
    for d in dets:
        g = gcd(g, d)
    return TorsionBound(g, m.ncols - rank, tuple(dets))


# --- text format ---------------------------------------------------------

def format_matrix(m: RelationMatrix) -> str:
    lines = [f"{m.nrows} {m.ncols}"]
    lines += [" ".join(str(v) for v in r) for r in m.rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> RelationMatrix:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix file needs a 'rows cols' header")
    nr, nc = int(tokens[0]), int(tokens[1])
    body = [int(v) for v in tokens[2:]]
    if len(body) != nr * nc:
        raise ValueError(f"expected {nr * nc} entries, found {len(body)}")
    return RelationMatrix(tuple(tuple(body[i * nc:(i + 1) * nc]) for i in range(nr)), nc)
