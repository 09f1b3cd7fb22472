"""Workflow drivers: derived series, quotient scans, preimage presentations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .abelian import AbelianInvariants, abelian_invariants
from .coset_enum import CosetTable, EnumerationParams, EnumStats, Strategy, enumerate_cosets
from .schreier import SubgroupPresentation, subgroup_presentation
from .tietze import SimplifyParams, SimplifyTrace, recognize_free_abelian, simplify
from .words import Presentation, Word, commutator, format_word, multiply, power


@dataclass(frozen=True)
class Limits:
    max_cosets: int = 1_000_000
    strategy: Strategy = Strategy.HLT
    max_levels: int = 8
    simplify: SimplifyParams = field(default_factory=SimplifyParams)

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))

    @property
    def enumeration(self) -> EnumerationParams:
        return EnumerationParams(self.strategy, self.max_cosets)


class EnumerationOverflow(RuntimeError):
    """An enumeration hit the active-coset bound."""

    def __init__(self, what: str, stats: EnumStats):
        self.stats = stats
        super().__init__(f"{what}: overflow at {stats.max_active} active cosets ({stats.total_defined} defined)")


class InfiniteAbelianization(ValueError):
    pass


def commutators_of_generators(d: int) -> list[Word]:
    return [commutator((i + 1,), (j + 1,)) for i, j in combinations(range(d), 2)]


def derived_subgroup_table(p: Presentation, limits: Limits | None = None) -> CosetTable:
    """Coset table of ``G'`` in ``G``.

    This is the regular table of ``G/G'``, enumerated from ``p`` with every
    generator commutator added, over the trivial subgroup.  Its index is
    checked against the Smith form order.
    """
    limits = limits or Limits()
    inv = abelian_invariants(p)
    if not inv.is_finite:
        raise InfiniteAbelianization(f"abelianization {inv} is infinite")
    ab = p.with_relators(commutators_of_generators(p.ngens))
    res = enumerate_cosets(ab, (), limits.enumeration)
    if res.overflow:
        raise EnumerationOverflow("abelianized enumeration", res.stats)
    if res.index != inv.order:
        raise RuntimeError(f"derived table has index {res.index}, abelianization order is {inv.order}")
    return res.table


# --- derived series ------------------------------------------------------

class Termination(str, enum.Enum):
    FREE_ABELIAN = "FreeAbelian"
    TRIVIAL_GROUP = "TrivialGroup"
    INFINITE_ABELIANIZATION = "InfiniteAbelianization"
    PERFECT_GROUP = "PerfectGroup"
    LIMITS_EXCEEDED = "LimitsExceeded"


@dataclass(frozen=True)
class Level:
    """One term ``G^(i)`` of the series.

    ``index`` is ``|G^(i) : G^(i+1)|`` when the next table was built;
    ``trace`` records the simplification that produced ``presentation``.
    """

    presentation: Presentation
    invariants: AbelianInvariants | None
    index: int | None = None
    schreier_generators: int | None = None
    trace: SimplifyTrace | None = field(default=None, repr=False)
    enum_stats: EnumStats | None = field(default=None, repr=False)


@dataclass(frozen=True)
class DerivedSeriesReport:
    levels: tuple[Level, ...]
    termination: Termination
    rank: int | None = None      # set for FreeAbelian
    detail: str = ""

    @property
    def soluble(self) -> bool:
        return self.termination in (Termination.FREE_ABELIAN, Termination.TRIVIAL_GROUP)

    @property
    def factors(self) -> list[AbelianInvariants]:
        """Derived factors ``G^(i)/G^(i+1)``, up to the last level known."""
        out = [lv.invariants for lv in self.levels if lv.index is not None]
        if self.termination is Termination.FREE_ABELIAN:
            out.append(self.levels[-1].invariants)
        return out

    @property
    def derived_length(self) -> int | None:
        return len(self.factors) if self.soluble else None

    def __str__(self) -> str:
        return format_derived_report(self)


def format_derived_report(rep: DerivedSeriesReport) -> str:
    lines = []
    for i, lv in enumerate(rep.levels):
        p = lv.presentation
        inv = "?" if lv.invariants is None else lv.invariants.compact()
        line = f"level {i}: {p.ngens} generators, {len(p.relators)} relators, abelianization {inv}"
        if lv.index is not None:
            line += f", next index {lv.index}"
        lines.append(line)
    term = rep.termination.value
    if rep.rank is not None:
        term += f"({rep.rank})"
    lines.append(f"termination: {term} at level {len(rep.levels) - 1}")
    if rep.detail:
        lines.append(f"detail: {rep.detail}")
    if rep.soluble:
        factors = ", ".join(f.compact() for f in rep.factors) or "none"
        lines.append(f"soluble, derived length {rep.derived_length}")
        lines.append(f"derived factors: {factors}")
    return "\n".join(lines) + "\n"


def _is_trivial(p: Presentation, limits: Limits) -> bool | None:
    if p.ngens == 0:
        return True
    res = enumerate_cosets(p, (), limits.enumeration)
    return None if res.overflow else res.index == 1


def derived_series(p: Presentation, limits: Limits | None = None) -> DerivedSeriesReport:
    """Follow ``G, G', G'', ...`` until the structure is recognized or limits stop it."""
    limits = limits or Limits()
    levels: list[Level] = []
    current, trace = p, None

    def done(term, rank=None, detail=""):
        return DerivedSeriesReport(tuple(levels), Termination(term), rank, detail)

    while True:
        if current.ngens == 0:
            levels.append(Level(current, AbelianInvariants((), 0), trace=trace))
            return done(Termination.TRIVIAL_GROUP)
        inv = abelian_invariants(current)
        k = recognize_free_abelian(current)
        if k is not None:
            levels.append(Level(current, inv, trace=trace))
            return done(Termination.FREE_ABELIAN, k)
        if not inv.is_finite:
            levels.append(Level(current, inv, trace=trace))
            return done(Termination.INFINITE_ABELIANIZATION)
        if inv.is_trivial:
            levels.append(Level(current, inv, trace=trace))
            trivial = _is_trivial(current, limits)
            if trivial:
                return done(Termination.TRIVIAL_GROUP)
            detail = "" if trivial is False else "order unknown within limits"
            return done(Termination.PERFECT_GROUP, detail=detail)
        if len(levels) >= limits.max_levels:
            levels.append(Level(current, inv, trace=trace))
            return done(Termination.LIMITS_EXCEEDED, detail=f"stopped after {limits.max_levels} levels")
        try:
            table = derived_subgroup_table(current, limits)
        except EnumerationOverflow as e:
            levels.append(Level(current, inv, trace=trace))
            return done(Termination.LIMITS_EXCEEDED, detail=str(e))
        sp = subgroup_presentation(current, table)
        levels.append(Level(current, inv, table.index, sp.presentation.ngens, trace, table.stats))
        current, trace = simplify(sp.presentation, limits.simplify)


# --- quotient scan -------------------------------------------------------

class Outcome(str, enum.Enum):
    FINITE = "FiniteQuotient"
    TRIVIAL = "Trivial"
    OVERFLOW = "Overflow"


@dataclass(frozen=True)
class ScanEntry:
    """``added`` is every relator put on top of ``p``; the last is ``word^exponent``."""

    added: tuple[Word, ...]
    outcome: Outcome
    order: int | None
    word: Word = ()
    exponent: int = 1
    stats: EnumStats | None = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class ScanReport:
    generators: tuple[str, ...]
    entries: tuple[ScanEntry, ...]
    max_cosets: int = 0

    def __str__(self) -> str:
        return format_scan_report(self)


def format_scan_report(rep: ScanReport) -> str:
    lines = []
    for e in rep.entries:
        words = ", ".join([format_power(*as_power(w), rep.generators) for w in e.added[:-1]]
                          + [format_power(e.word, e.exponent, rep.generators)])
        if e.outcome is Outcome.OVERFLOW:
            res = f"Overflow at {rep.max_cosets} cosets"
        elif e.outcome is Outcome.TRIVIAL:
            res = "Trivial (order 1)"
        else:
            res = f"FiniteQuotient({e.order})"
        lines.append(f"{words}: {res}")
    return "\n".join(lines) + "\n"


def as_power(w: Word) -> tuple[Word, int]:
    """Shortest ``u`` with ``w = u^k``, and ``k``."""
    n = len(w)
    for m in range(1, n):
        if n % m == 0 and w[:m] * (n // m) == tuple(w):
            return tuple(w[:m]), n // m
    return tuple(w), 1


def format_power(w: Word, e: int, generators: Sequence[str]) -> str:
    base = format_word(w, generators)
    if e == 1:
        return base
    if len(w) > 1 and not base.startswith("["):
        base = f"({base})"
    return f"{base}^{e}"


def default_candidates(d: int) -> list[Word]:
    """Products ``g_i g_j`` (``i <= j``) then commutators ``[g_i, g_j]`` (``i < j``)."""
    products = [(i + 1, j + 1) for i in range(d) for j in range(i, d)]
    return products + commutators_of_generators(d)


def quotient_scan(
    p: Presentation,
    candidates: Sequence[Word] | None = None,
    exponents: Iterable[int] = range(2, 7),
    limits: Limits | None = None,
    *,
    fixed: Sequence[Word] = (),
) -> ScanReport:
    """Enumerate ``p + fixed + w^e`` over the trivial subgroup for each word and exponent.

    Results are ordered word-major, exponent-minor.
    """
    limits = limits or Limits()
    if candidates is None:
        candidates = default_candidates(p.ngens)
    exponents = list(exponents)
    entries = []
    for w in candidates:
        for e in exponents:
            added = tuple(fixed) + (power(w, e),)
            res = enumerate_cosets(p.with_relators(added), (), limits.enumeration)
            if res.overflow:
                entries.append(ScanEntry(added, Outcome.OVERFLOW, None, w, e, res.stats))
            elif res.index == 1:
                entries.append(ScanEntry(added, Outcome.TRIVIAL, 1, w, e, res.stats))
            else:
                entries.append(ScanEntry(added, Outcome.FINITE, res.index, w, e, res.stats))
    return ScanReport(p.generators, tuple(entries), limits.max_cosets)


# --- kernels and preimages -----------------------------------------------

def preimage_presentation(
    p: Presentation,
    extra_relators: Sequence[Word] = (),
    subgroup_words: Sequence[Word] = (),
    limits: Limits | None = None,
) -> SubgroupPresentation:
    """Presentation of the preimage in ``G`` of ``<subgroup_words>`` in the quotient ``G / <<extra>>``.

    The table comes from the quotient but rewriting uses the relators of
    ``p`` alone, so with no subgroup words this presents the kernel.
    """
    limits = limits or Limits()
    q = p.with_relators(extra_relators)
    res = enumerate_cosets(q, subgroup_words, limits.enumeration)
    if res.overflow:
        raise EnumerationOverflow("quotient enumeration", res.stats)
    return subgroup_presentation(p, res.table)


def conjugation_action(
    sp: SubgroupPresentation,
    named: dict[str, Word],
    by: Sequence[int] | None = None,
    params: SimplifyParams | None = None,
) -> tuple[Presentation, dict[str, Word]]:
    """Express the conjugates ``w^g`` of named subgroup elements in terms of those elements.

    Each named word and each conjugate ``g^-1 w g`` (``g`` a parent
    generator, default all) is adjoined to the Schreier presentation as a new
    generator equal to its rewrite.  The named generators are protected and
    everything else is eliminated where possible.  Returns the simplified
    presentation and, for each conjugate ``<name><generator>``, its word in
    the output generators when it was eliminated.
    """
    from .tietze import resolve

    base = sp.presentation
    if by is None:
        by = range(len(sp.parent_generators))
    extra: dict[str, Word] = dict(named)
    for name, w in named.items():
        for g in by:
            extra[f"{name}{sp.parent_generators[g]}"] = multiply((-(g + 1),), w, (g + 1,))
    names = list(base.generators)
    rels = list(base.relators)
    for name, w in extra.items():
        names.append(name)
        rels.append(multiply((-len(names),), sp.rewrite(w)))
    full = Presentation.build(names, rels)
    params = params or SimplifyParams()
    params = SimplifyParams(params.max_length_factor, frozenset(named), params.max_passes,
                            params.elimination_length_bound)
    out, tr = simplify(full, params)
    action = {}
    eliminated = {full.generators[g] for g, _ in tr.eliminated}
    for name in extra:
        if name not in named and name in eliminated:
            action[name] = resolve(tr, name)
    return out, action
