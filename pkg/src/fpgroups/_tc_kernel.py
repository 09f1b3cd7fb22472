"""Jitted Todd-Coxeter kernels.

Cosets are 0-based rows of an int32 table; column ``2g`` is generator ``g``
and column ``2g + 1`` its inverse, so ``col ^ 1`` is the inverse column.
-1 marks an undefined entry.  A coset ``c`` is live iff ``parent[c] == c``.

The scalar state lives in a small int64 array so helpers can mutate it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# indices into the state vector
NEXT = 0          # rows in use
ACTIVE = 1        # live cosets
TOTAL = 2         # cosets ever defined
MAX_ACTIVE = 3
OVERFLOW = 4
MAX_COSETS = 5
FELSCH = 6
DED_TOP = 7
DED_LOST = 8      # deduction stack overflowed; full rescan pending
TRACE_N = 9
TRACE_EVERY = 10
NSTATE = 11

DED_SIZE = 1 << 22
TRACE_SIZE = 2048


@njit(cache=True)
def _rep(parent, c):
    r = c
    while parent[r] != r:
        r = parent[r]
    while parent[c] != r:
        nxt = parent[c]
        parent[c] = r
        c = nxt
    return r


@njit(cache=True)
def _push(ded, st, c, x):
    if st[FELSCH] == 0:
        return
    top = st[DED_TOP]
    if top >= DED_SIZE:
        st[DED_LOST] = 1
        st[DED_TOP] = 0
        return
    ded[top, 0] = c
    ded[top, 1] = x
    st[DED_TOP] = top + 1


@njit(cache=True)
def _record(trace, st):
    n = st[TRACE_N]
    if n == TRACE_SIZE:
        for i in range(TRACE_SIZE // 2):
            trace[i, 0] = trace[2 * i + 1, 0]
            trace[i, 1] = trace[2 * i + 1, 1]
        n = TRACE_SIZE // 2
        st[TRACE_EVERY] *= 2
    trace[n, 0] = st[TOTAL]
    trace[n, 1] = st[ACTIVE]
    st[TRACE_N] = n + 1


@njit(cache=True)
def _define(table, parent, st, ded, trace, c, x):
    if st[ACTIVE] >= st[MAX_COSETS]:
        st[OVERFLOW] = 1
        return False
    n = st[NEXT]
    st[NEXT] = n + 1
    for k in range(table.shape[1]):
        table[n, k] = -1
    parent[n] = n
    table[c, x] = n
    table[n, x ^ 1] = c
    st[ACTIVE] += 1
    st[TOTAL] += 1
    if st[ACTIVE] > st[MAX_ACTIVE]:
        st[MAX_ACTIVE] = st[ACTIVE]
    if st[TOTAL] % st[TRACE_EVERY] == 0:
        _record(trace, st)
    _push(ded, st, c, x)
    return True


@njit(cache=True)
def _merge(parent, queue, st, qtail, a, b):
    a = _rep(parent, a)
    b = _rep(parent, b)
    if a == b:
        return qtail
    if a > b:
        a, b = b, a
    parent[b] = a
    queue[qtail] = b
    st[ACTIVE] -= 1
    return qtail + 1


@njit(cache=True)
def _coincidence(table, parent, queue, st, ded, a, b):
    ncol = table.shape[1]
    qtail = _merge(parent, queue, st, 0, a, b)
    qhead = 0
    while qhead < qtail:
        g = queue[qhead]
        qhead += 1
        for x in range(ncol):
            d = table[g, x]
            if d < 0:
                continue
            xi = x ^ 1
            table[d, xi] = -1
            mu = _rep(parent, g)
            nu = _rep(parent, d)
            if table[mu, x] >= 0:
                qtail = _merge(parent, queue, st, qtail, nu, table[mu, x])
            elif table[nu, xi] >= 0:
                qtail = _merge(parent, queue, st, qtail, mu, table[nu, xi])
            else:
                table[mu, x] = nu
                table[nu, xi] = mu
                _push(ded, st, mu, x)


@njit(cache=True)
def _scan(table, parent, queue, st, ded, trace, w, s, e, alpha, fill):
    """Scan ``w[s:e]`` at ``alpha``; define cosets at gaps iff ``fill``."""
    f = alpha
    i = s
    b = alpha
    j = e - 1
    while True:
        while i <= j and table[f, w[i]] >= 0:
            f = table[f, w[i]]
            i += 1
        if i > j:
            if f != alpha:
                _coincidence(table, parent, queue, st, ded, f, alpha)
            return
        while j >= i and table[b, w[j] ^ 1] >= 0:
            b = table[b, w[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(table, parent, queue, st, ded, f, b)
            return
        if i == j:
            table[f, w[i]] = b
            table[b, w[i] ^ 1] = f
            _push(ded, st, f, w[i])
            return
        if not fill:
            return
        if not _define(table, parent, st, ded, trace, f, w[i]):
            return


@njit(cache=True)
def _process_deductions(table, parent, queue, st, ded, trace,
                        cwords, coff, cptr, cidx, rwords, roff):
    while True:
        if st[DED_LOST] == 1:
            # stack overflowed: rescan every live coset under every relator
            st[DED_LOST] = 0
            for c in range(st[NEXT]):
                for r in range(roff.shape[0] - 1):
                    if parent[c] != c:
                        break
                    _scan(table, parent, queue, st, ded, trace, rwords, roff[r], roff[r + 1], c, False)
            continue
        top = st[DED_TOP]
        if top == 0:
            return
        st[DED_TOP] = top - 1
        alpha = ded[top - 1, 0]
        x = ded[top - 1, 1]
        if parent[alpha] != alpha:
            continue
        for k in range(cptr[x], cptr[x + 1]):
            if parent[alpha] != alpha:
                break
            r = cidx[k]
            _scan(table, parent, queue, st, ded, trace, cwords, coff[r], coff[r + 1], alpha, False)
        if parent[alpha] != alpha:
            continue
        beta = table[alpha, x]
        if beta < 0:
            continue
        xi = x ^ 1
        for k in range(cptr[xi], cptr[xi + 1]):
            if parent[beta] != beta:
                break
            r = cidx[k]
            _scan(table, parent, queue, st, ded, trace, cwords, coff[r], coff[r + 1], beta, False)


@njit(cache=True)
def _compact(table, parent, remap, st):
    """Renumber live cosets in order; every live entry must point at a live coset."""
    n = st[NEXT]
    k = 0
    for c in range(n):
        if parent[c] == c:
            remap[c] = k
            k += 1
        else:
            remap[c] = -1
    ncol = table.shape[1]
    for c in range(n):
        if parent[c] != c:
            continue
        nc = remap[c]
        for x in range(ncol):
            t = table[c, x]
            if t >= 0:
                t = remap[_rep(parent, t)]
            table[nc, x] = t
    for c in range(k):
        parent[c] = c
    st[NEXT] = k


@njit(cache=True)
def _grow(table, parent, queue, remap, need, hard_cap):
    cap = min(2 * table.shape[0], hard_cap)
    if cap < need:
        cap = need
    t2 = np.empty((cap, table.shape[1]), dtype=np.int32)
    t2[: table.shape[0]] = table
    p2 = np.empty(cap, dtype=np.int32)
    p2[: parent.shape[0]] = parent
    return t2, p2, np.empty(cap, dtype=np.int32), np.empty(cap, dtype=np.int32)


@njit(cache=True)
def enumerate_cosets(ncol, rwords, roff, swords, soff, cwords, coff, cptr, cidx,
                     felsch, max_cosets, hard_cap):
    """Run HLT (``felsch == 0``) or Felsch enumeration.

    Returns ``(table, state, trace)``; ``table`` holds the compacted live
    cosets when the run completed.  ``hard_cap`` bounds allocated rows.
    """
    st = np.zeros(NSTATE, dtype=np.int64)
    st[MAX_COSETS] = max_cosets
    st[FELSCH] = felsch
    st[TRACE_EVERY] = 1
    cap = 1024
    if cap > hard_cap:
        cap = hard_cap
    table = np.empty((cap, ncol), dtype=np.int32)
    parent = np.empty(cap, dtype=np.int32)
    queue = np.empty(cap, dtype=np.int32)
    remap = np.empty(cap, dtype=np.int32)
    ded = np.empty((DED_SIZE, 2), dtype=np.int32)
    trace = np.zeros((TRACE_SIZE, 2), dtype=np.int64)

    maxlen = 1
    for r in range(roff.shape[0] - 1):
        if roff[r + 1] - roff[r] > maxlen:
            maxlen = roff[r + 1] - roff[r]
    for r in range(soff.shape[0] - 1):
        if soff[r + 1] - soff[r] > maxlen:
            maxlen = soff[r + 1] - soff[r]

    for k in range(ncol):
        table[0, k] = -1
    parent[0] = 0
    st[NEXT] = 1
    st[ACTIVE] = 1
    st[TOTAL] = 1
    st[MAX_ACTIVE] = 1
    _record(trace, st)

    alpha = 0
    nsub = soff.shape[0] - 1
    nrel = roff.shape[0] - 1
    for r in range(nsub):
        # room check: a scan defines at most maxlen cosets
        if st[NEXT] + maxlen + 1 > table.shape[0]:
            if table.shape[0] < hard_cap:
                need = st[NEXT] + maxlen + 1
                table, parent, queue, remap = _grow(table, parent, queue, remap, need, hard_cap)
            else:
                _compact(table, parent, remap, st)
        _scan(table, parent, queue, st, ded, trace, swords, soff[r], soff[r + 1], 0, True)
        if st[OVERFLOW]:
            return table[:0], st, trace
        if felsch:
            _process_deductions(table, parent, queue, st, ded, trace, cwords, coff, cptr, cidx, rwords, roff)

    while alpha < st[NEXT]:
        if parent[alpha] != alpha:
            alpha += 1
            continue
        if felsch:
            for x in range(ncol):
                if parent[alpha] != alpha:
                    break
                if table[alpha, x] >= 0:
                    continue
                if st[NEXT] + 2 > table.shape[0]:
                    if table.shape[0] < hard_cap:
                        table, parent, queue, remap = _grow(table, parent, queue, remap, st[NEXT] + 2, hard_cap)
                    else:
                        _compact(table, parent, remap, st)
                        alpha = remap[alpha]
                if not _define(table, parent, st, ded, trace, alpha, x):
                    return table[:0], st, trace
                _process_deductions(table, parent, queue, st, ded, trace, cwords, coff, cptr, cidx, rwords, roff)
        else:
            for r in range(nrel):
                if parent[alpha] != alpha:
                    break
                if st[NEXT] + maxlen + 1 > table.shape[0]:
                    if table.shape[0] < hard_cap:
                        table, parent, queue, remap = _grow(table, parent, queue, remap, st[NEXT] + maxlen + 1, hard_cap)
                    else:
                        _compact(table, parent, remap, st)
                        alpha = remap[alpha]
                _scan(table, parent, queue, st, ded, trace, rwords, roff[r], roff[r + 1], alpha, True)
                if st[OVERFLOW]:
                    return table[:0], st, trace
            if parent[alpha] == alpha:
                for x in range(ncol):
                    if table[alpha, x] >= 0:
                        continue
                    if st[NEXT] + 2 > table.shape[0]:
                        if table.shape[0] < hard_cap:
                            table, parent, queue, remap = _grow(table, parent, queue, remap, st[NEXT] + 2, hard_cap)
                        else:
                            _compact(table, parent, remap, st)
                            alpha = remap[alpha]
                    if not _define(table, parent, st, ded, trace, alpha, x):
                        return table[:0], st, trace
        alpha += 1

    _compact(table, parent, remap, st)
    _record(trace, st)
    return table[: st[NEXT]].copy(), st, trace


@njit(cache=True)
def standardize_table(table):
    """Renumber cosets in breadth-first order of first appearance."""
    n, ncol = table.shape
    new = np.full(n, -1, dtype=np.int32)
    old = np.empty(n, dtype=np.int32)
    new[0] = 0
    old[0] = 0
    nxt = 1
    beta = 0
    while beta < nxt and nxt < n:
        row = old[beta]
        for x in range(ncol):
            t = table[row, x]
            if t >= 0 and new[t] < 0:
                new[t] = nxt
                old[nxt] = t
                nxt += 1
        beta += 1
    out = np.empty((nxt, ncol), dtype=np.int32)
    for c in range(nxt):
        for x in range(ncol):
            t = table[old[c], x]
            out[c, x] = new[t] if t >= 0 else -1
    return out


@njit(cache=True)
def table_violation(table, rwords, roff, swords, soff):
    """First violated invariant as a code, or 0 when the table is a valid complete table."""
    n, ncol = table.shape
    for c in range(n):
        for x in range(ncol):
            t = table[c, x]
            if t < 0 or t >= n:
                return 1
            if table[t, x ^ 1] != c:
                return 2
    for r in range(roff.shape[0] - 1):
        for c in range(n):
            f = c
            for i in range(roff[r], roff[r + 1]):
                f = table[f, rwords[i]]
            if f != c:
                return 3
    for r in range(soff.shape[0] - 1):
        f = 0
        for i in range(soff[r], soff[r + 1]):
            f = table[f, swords[i]]
        if f != 0:
            return 4
    return 0
