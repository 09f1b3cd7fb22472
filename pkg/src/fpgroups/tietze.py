"""Presentation simplification by Tietze transformations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .words import (
    Presentation,
    Word,
    commutator,
    cyclic_canonical,
    cyclic_reduce,
    format_word,
    invert,
    substitute,
)


@dataclass(frozen=True)
class SimplifyParams:
    """Controls for :func:`simplify`.

    Eliminations may grow the total relator length up to
    ``max_length_factor`` times the input length; past that only
    non-growing eliminations are taken.  ``protected`` holds generator
    indices (or names) that must survive.
    """

    max_length_factor: Fraction | float = 5
    protected: frozenset = frozenset()
    max_passes: int = 20
    elimination_length_bound: int | None = None

    def __post_init__(self):
        if self.max_length_factor < 1:
            raise ValueError("max_length_factor must be at least 1")
        object.__setattr__(self, "protected", frozenset(self.protected))


@dataclass(frozen=True)
class SimplifyTrace:
    """Eliminations in order; words are over the input generators."""

    input_generators: tuple[str, ...]
    eliminated: tuple[tuple[int, Word], ...]
    survivors: tuple[int, ...]

    def names(self) -> list[str]:
        return [self.input_generators[g] for g, _ in self.eliminated]

    def __str__(self) -> str:
        return format_trace(self)


def format_trace(tr: SimplifyTrace) -> str:
    return "".join(
        f"eliminated {tr.input_generators[g]} = {format_word(w, tr.input_generators)}\n"
        for g, w in tr.eliminated
    )


class _State:
    """Mutable relator store with a generator -> {relator id: occurrences} index."""

    def __init__(self, relators: Iterable[Word]):
        self.rels: dict[int, list[int]] = {}
        self.occ: dict[int, dict[int, int]] = {}
        self.total = 0
        self.next_id = 0
        for r in relators:
            self.add(list(r))

    def add(self, r: list[int]):
        if not r:
            return
        rid = self.next_id
        self.next_id += 1
        self.rels[rid] = r
        self.total += len(r)
        for x in r:
            g = abs(x) - 1
            d = self.occ.setdefault(g, {})
            d[rid] = d.get(rid, 0) + 1

    def remove(self, rid: int) -> list[int]:
        r = self.rels.pop(rid)
        self.total -= len(r)
        for x in r:
            g = abs(x) - 1
            d = self.occ[g]
            d.pop(rid, None)
        return r

    def relators(self) -> list[Word]:
        return [tuple(r) for r in self.rels.values()]


def _definition(r: Sequence[int], g: int) -> Word:
    """From relator ``r`` containing ``g`` exactly once, the word ``w`` with ``g = w``."""
    k = next(i for i, x in enumerate(r) if abs(x) - 1 == g)
    rest = tuple(r[k + 1:]) + tuple(r[:k])
    # g^e * rest = 1
    return invert(rest) if r[k] > 0 else rest


def _substitute_all(st: _State, g: int, w: Word):
    for rid in list(st.occ.get(g, {})):
        r = st.remove(rid)
        st.add(list(cyclic_reduce(substitute(r, {g: w}))))
    st.occ.pop(g, None)


def eliminate(p: Presentation, g: int | str, r: int) -> Presentation:
    """Remove generator ``g`` using relator ``r``, in which it occurs exactly once."""
    if isinstance(g, str):
        g = p.index(g)
    rel = p.relators[r]
    if sum(1 for x in rel if abs(x) - 1 == g) != 1:
        raise ValueError(f"generator {p.generators[g]} does not occur exactly once in relator {r}")
    w = _definition(rel, g)
    others = [cyclic_reduce(substitute(q, {g: w})) for k, q in enumerate(p.relators) if k != r]
    return _drop_generators(p.generators, others, {g})


def _drop_generators(names: Sequence[str], relators: Iterable[Word], dead: set[int]) -> Presentation:
    keep = [i for i in range(len(names)) if i not in dead]
    new_index = {old: new for new, old in enumerate(keep)}
    rels = []
    for r in relators:
        r = cyclic_reduce(r)
        if r:
            rels.append(tuple((new_index[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in r))
    return Presentation(tuple(names[i] for i in keep), tuple(rels))


def _best_elimination(st: _State, alive: Sequence[int], protected: frozenset, limit: int | None,
                      grow_ok: bool, length_bound: int | None):
    """Cheapest (estimated new total, generator, relator id) or None.

    Estimate: the defining relator disappears and each other occurrence of
    ``g`` grows by ``len(r) - 2``.
    """
    best = None
    rels = st.rels
    for g in alive:
        if g in protected:
            continue
        occ = st.occ.get(g)
        if not occ:
            continue
        m = sum(occ.values()) - 1
        for rid, c in occ.items():
            if c != 1:
                continue
            L = len(rels[rid])
            if length_bound is not None and L - 1 > length_bound:
                continue
            new_total = st.total - L + m * (L - 2)
            key = (new_total, g, L, rid)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    new_total = best[0]
    if new_total > st.total and (not grow_ok or (limit is not None and new_total > limit)):
        return None
    return best


def _dedupe(relators: Iterable[Word]) -> list[Word]:
    seen = set()
    out = []
    for r in relators:
        r = cyclic_reduce(r)
        if not r:
            continue
        key = cyclic_canonical(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def _rotations(w: Word):
    n = len(w)
    for i in range(n):
        yield i, w[i:] + w[:i]


def _substring_round(relators: list[Word]) -> tuple[list[Word], bool]:
    """One round of replacing a long piece of a relator by the short complement from another relator."""
    rels = list(relators)
    index: dict[Word, list[tuple[int, Word]]] = {}
    sizes = set()
    for a, A in enumerate(rels):
        m = len(A) // 2 + 1
        if m > len(A):
            continue
        sizes.add(m)
        for cand in (A, invert(A)):
            for _, rot in _rotations(cand):
                index.setdefault(rot[:m], []).append((a, rot))
    stale = set()
    changed = False
    order = sorted(range(len(rels)), key=lambda i: (-len(rels[i]), -i))
    for b in order:
        B = rels[b]
        if b in stale or not B:
            continue
        best = None
        for m in sorted(sizes):
            if m > len(B):
                break
            for i, rot in _rotations(B):
                for a, arot in index.get(rot[:m], ()):
                    if a == b or a in stale or len(rels[a]) > len(B):
                        continue
                    # B = s t, A = s v  =>  s = v^-1, so B ~ v^-1 t
                    new = cyclic_reduce(invert(arot[m:]) + rot[m:])
                    if len(new) < len(B) and (best is None or len(new) < len(best)):
                        best = new
        if best is not None:
            rels[b] = best
            stale.add(b)
            changed = True
    return [r for r in rels if r], changed


def _commutator_pair(r: Word) -> tuple[int, int] | None:
    """Generator pair ``(i, j)``, ``i < j``, when ``r`` is cyclically a commutator of two generators."""
    if len(r) == 4 and r[0] == -r[2] and r[1] == -r[3] and abs(r[0]) != abs(r[1]):
        i, j = abs(r[0]) - 1, abs(r[1]) - 1
        return (i, j) if i < j else (j, i)
    return None


def _abelian_rewrite(relators: list[Word]) -> tuple[list[Word], bool]:
    """Collect relators whose generators pairwise commute by other relators.

    Such a relator equals its sorted power product; it is dropped when
    every exponent sum vanishes.
    """
    pairs = {pr for pr in map(_commutator_pair, relators) if pr}
    if not pairs:
        return relators, False
    out = []
    changed = False
    for r in relators:
        if _commutator_pair(r):
            out.append(r)
            continue
        support = sorted({abs(x) - 1 for x in r})
        if len(support) < 2 or any(pr not in pairs for pr in combinations(support, 2)):
            out.append(r)
            continue
        exps = dict.fromkeys(support, 0)
        for x in r:
            exps[abs(x) - 1] += 1 if x > 0 else -1
        new = tuple(x for g in support for x in ((g + 1) if exps[g] > 0 else -(g + 1),) * abs(exps[g]))
        if len(new) < len(r):
            changed = True
            if new:
                out.append(new)
        else:
            out.append(r)
    return out, changed


def substring_pass(p: Presentation) -> Presentation:
    """Shorten relators using pieces of other relators; never increases total length."""
    rels = _dedupe(p.relators)
    changed = True
    while changed:
        rels, changed = _substring_round(rels)
        rels = _dedupe(rels)
    return Presentation(p.generators, tuple(rels))


def _protected_indices(p: Presentation, protected: Iterable) -> frozenset:
    out = set()
    for g in protected:
        if isinstance(g, str):
            g = p.index(g)
        if not 0 <= g < p.ngens:
            raise ValueError(f"protected generator {g} is not in the presentation")
        out.add(g)
    return frozenset(out)


def simplify(p: Presentation, params: SimplifyParams | None = None, **kw) -> tuple[Presentation, SimplifyTrace]:
    """Alternate elimination sweeps with substring passes until nothing changes.

    Deterministic.  Always returns a presentation of the same group together
    with the eliminations performed.
    """
    params = params or SimplifyParams(**kw)
    protected = _protected_indices(p, params.protected)
    limit = int(params.max_length_factor * p.length) if p.length else None
    alive = list(range(p.ngens))
    rels = _dedupe(p.relators)
    trace: list[tuple[int, Word]] = []

    for _ in range(params.max_passes):
        before = (len(alive), sum(len(r) for r in rels), len(rels))
        st = _State(rels)
        while True:
            best = _best_elimination(st, alive, protected, limit, True, params.elimination_length_bound)
            if best is None:
                break
            _, g, _, rid = best
            rel = st.remove(rid)
            w = _definition(rel, g)
            _substitute_all(st, g, w)
            alive.remove(g)
            trace.append((g, w))
        rels = _dedupe(st.relators())
        changed = True
        while changed:
            rels, changed = _substring_round(rels)
            rels, collected = _abelian_rewrite(_dedupe(rels))
            changed = changed or collected
        after = (len(alive), sum(len(r) for r in rels), len(rels))
        if after == before:
            break

    out = _drop_generators(p.generators, rels, set(range(p.ngens)) - set(alive))
    return out, SimplifyTrace(p.generators, tuple(trace), tuple(alive))


def replay(p: Presentation, tr: SimplifyTrace) -> Presentation:
    """Apply only the recorded eliminations to ``p``."""
    rels = [tuple(r) for r in p.relators]
    for g, w in tr.eliminated:
        rels = [cyclic_reduce(substitute(r, {g: w})) for r in rels]
    return _drop_generators(p.generators, rels, {g for g, _ in tr.eliminated})


def resolve(tr: SimplifyTrace, g: int | str) -> Word:
    """Definition of eliminated generator ``g`` in the output generators."""
    if isinstance(g, str):
        g = tr.input_generators.index(g)
    defs: dict[int, Word] = {}
    found = False
    for h, w in reversed(tr.eliminated):
        defs[h] = substitute(w, defs)
        if h == g:
            found = True
            break
    if not found:
        raise KeyError(f"generator {tr.input_generators[g]} was not eliminated")
    out_index = {old: new for new, old in enumerate(tr.survivors)}
    return tuple((out_index[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in defs[g])


def recognize_free_abelian(p: Presentation) -> int | None:
    """Rank ``k`` when the relators are exactly the pairwise commutators of the ``k`` generators.

    Syntactic: relators are compared up to cyclic rotation and inversion.
    Returns None when the check does not apply, never a wrong rank.
    """
    k = p.ngens
    want = {cyclic_canonical(commutator((i + 1,), (j + 1,))) for i, j in combinations(range(k), 2)}
    have = [cyclic_canonical(r) for r in p.relators]
    if len(have) == len(want) and set(have) == want:
        return k
    return None
