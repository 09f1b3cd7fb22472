"""Reidemeister-Schreier rewriting over a complete coset table."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .coset_enum import CosetTable, IncompleteTableError, column
from .words import Presentation, Word, cyclic_reduce, format_word, free_reduce, invert, multiply, parse_word


@dataclass(frozen=True)
class Transversal:
    """Schreier transversal: ``reps[c]`` carries coset 0 to coset ``c``.

    ``parent[c]`` is ``(previous coset, letter)`` for the tree edge that
    first reached ``c``; ``None`` for coset 0.
    """

    reps: tuple[Word, ...]
    parent: tuple[tuple[int, int] | None, ...]

    def __len__(self):
        return len(self.reps)

    def __getitem__(self, c: int) -> Word:
        return self.reps[c]

    def is_tree_edge(self, c: int, g: int, target: int) -> bool:
        """Whether the positive edge ``c --g--> target`` belongs to the spanning tree."""
        return self.parent[target] == (c, g + 1) or self.parent[c] == (target, -(g + 1))


def transversal(t: CosetTable) -> Transversal:
    """Breadth-first shortest representatives; ties go to the earlier column."""
    if not t.is_complete:
        raise IncompleteTableError("transversal needs a complete table")
    n = t.index
    reps: list[Word | None] = [None] * n
    parent: list[tuple[int, int] | None] = [None] * n
    reps[0] = ()
    queue = deque([0])
    tab = t.table
    while queue:
        c = queue.popleft()
        for col in range(2 * t.ngens):
            d = int(tab[c, col])
            if reps[d] is None:
                x = (col >> 1) + 1
                x = -x if col & 1 else x
                reps[d] = reps[c] + (x,)
                parent[d] = (c, x)
                queue.append(d)
    return Transversal(tuple(reps), tuple(parent))


@dataclass(frozen=True)
class SchreierGenerator:
    coset: int
    generator: int          # 0-based parent generator index
    word: Word              # rep(c) * g * rep(c^g)^-1, freely reduced


def schreier_generators(t: CosetTable, tr: Transversal) -> list[SchreierGenerator]:
    """Non-tree edges ``c --g-->`` in coset-major, generator-minor order."""
    gens = []
    for c in range(t.index):
        for g in range(t.ngens):
            d = int(t.table[c, 2 * g])
            if tr.is_tree_edge(c, g, d):
                continue
            w = multiply(tr[c], (g + 1,), invert(tr[d]))
            gens.append(SchreierGenerator(c, g, w))
    return gens


class NotInSubgroupError(ValueError):
    pass


class Rewriter:
    """Reidemeister rewriting against a fixed table and transversal.

    Schreier generator ``k`` is the letter ``k + 1`` in rewritten words.
    """

    def __init__(self, t: CosetTable, tr: Transversal | None = None):
        if not t.is_complete:
            raise IncompleteTableError("rewriting needs a complete table")
        self.table = t
        self.transversal = tr if tr is not None else transversal(t)
        self.generators = schreier_generators(t, self.transversal)
        # edge_label[c][g] = Schreier letter of the positive edge c --g-->, 0 for tree edges
        self.edge_label = [[0] * t.ngens for _ in range(t.index)]
        for k, s in enumerate(self.generators):
            self.edge_label[s.coset][s.generator] = k + 1
        self._tab = t.table.tolist()

    def rewrite_from(self, c: int, w: Sequence[int]) -> tuple[Word, int]:
        """Rewrite ``w`` starting at coset ``c``; returns the Schreier word and the end coset."""
        tab = self._tab
        label = self.edge_label
        out: list[int] = []
        for x in w:
            if x > 0:
                g = x - 1
                s = label[c][g]
                c = tab[c][2 * g]
            else:
                g = -x - 1
                c = tab[c][2 * g + 1]
                s = -label[c][g]
            if s:
                if out and out[-1] == -s:
                    out.pop()
                else:
                    out.append(s)
        return tuple(out), c

    def rewrite(self, w: Sequence[int]) -> Word:
        word, end = self.rewrite_from(0, w)
        if end != 0:
            raise NotInSubgroupError(f"word {tuple(w)} does not fix the subgroup coset")
        return word

    def schreier_word_to_parent(self, w: Sequence[int]) -> Word:
        return multiply(*[self.generators[abs(x) - 1].word if x > 0 else invert(self.generators[abs(x) - 1].word) for x in w])


def rewrite(t: CosetTable, tr: Transversal, w: Sequence[int]) -> Word:
    return Rewriter(t, tr).rewrite(w)


@dataclass(frozen=True)
class SubgroupPresentation:
    """Presentation on Schreier generators plus their words in the parent group.

    ``embedding[k]`` is the parent-group word of generator ``k``.
    ``raw_relator_count`` is the number of Reidemeister relators before
    freely trivial ones were dropped.
    """

    presentation: Presentation
    embedding: tuple[Word, ...]
    parent_generators: tuple[str, ...]
    index: int
    raw_relator_count: int = 0
    rewriter: Rewriter | None = field(default=None, compare=False, repr=False)

    def embedding_map(self) -> dict[str, Word]:
        return dict(zip(self.presentation.generators, self.embedding))

    def rewrite(self, w: Sequence[int]) -> Word:
        if self.rewriter is None:
            raise ValueError("no table attached to this subgroup presentation")
        return self.rewriter.rewrite(w)


def subgroup_presentation(p: Presentation, t: CosetTable, tr: Transversal | None = None) -> SubgroupPresentation:
    """Reidemeister-Schreier presentation of the subgroup whose coset table is ``t``.

    Relators are the rewrites of every relator from every coset, in
    coset-major, relator-minor order; freely trivial ones are dropped.
    """
    if t.ngens != p.ngens:
        raise ValueError("table and presentation disagree on the number of generators")
    rw = Rewriter(t, tr)
    names = tuple(f"s{k + 1}" for k in range(len(rw.generators)))
    rels = []
    raw = 0
    for c in range(t.index):
        for r in p.relators:
            raw += 1
            w, end = rw.rewrite_from(c, r)
            if end != c:
                raise ValueError(f"relator {r} does not close at coset {c}; table does not belong to this presentation")
            w = cyclic_reduce(w)
            if w:
                rels.append(w)
    return SubgroupPresentation(
        Presentation(names, tuple(rels)),
        tuple(s.word for s in rw.generators),
        p.generators,
        t.index,
        raw,
        rw,
    )


def express_elements(p: Presentation, t: CosetTable, words: Sequence[Word], tr: Transversal | None = None) -> list[Word]:
    """Batch :func:`rewrite`; each word must lie in the subgroup."""
    rw = Rewriter(t, tr)
    return [rw.rewrite(w) for w in words]


def format_subgroup_presentation(sp: SubgroupPresentation) -> str:
    lines = [str(sp.presentation)]
    for name, w in zip(sp.presentation.generators, sp.embedding):
        lines.append(f"{name} = {format_word(w, sp.parent_generators)}")
    return "\n".join(lines) + "\n"


def parse_subgroup_presentation(text: str, parent_generators: Sequence[str]) -> tuple[Presentation, dict[str, Word]]:
    from .words import parse_presentation

    lines = [ln for ln in text.splitlines() if ln.strip()]
    pres = parse_presentation(lines[0])
    emb = {}
    for ln in lines[1:]:
        name, _, rhs = ln.partition("=")
        emb[name.strip()] = parse_word(rhs.strip(), parent_generators)
    return pres, emb
