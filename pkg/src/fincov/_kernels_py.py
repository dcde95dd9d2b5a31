"""Numpy lane of the enumeration kernels.

Same contract as the compiled lane (``_kernels_c``): all functions take the
dense table representation of a finite category (``comp`` is morphism x
morphism with -1 for non-composable pairs, hom sets come as a CSR pair
``hom_ptr``/``hom_dat`` indexed by src*nobj+tgt) and return plain ints or
numpy arrays.  Witnesses are always the lexicographically least in the
documented loop order.
"""

import numpy as np

BACKEND = "python"


def _hom(hom_ptr, hom_dat, nobj, a, b):
    k = a * nobj + b
    return hom_dat[hom_ptr[k]:hom_ptr[k + 1]]


def first_composability_violation(comp, src, tgt):
    """Least (g, f) where comp is defined off the composable pairs, missing on
    one, or has wrong endpoints.  Returns (g, f, code) or None."""
    n = comp.shape[0]
    defined = comp >= 0
    should = src[:, None] == tgt[None, :]
    bad = defined != should
    if bad.any():
        g, f = np.argwhere(bad)[0]
        return int(g), int(f), ("missing" if should[g, f] else "spurious")
    gs, fs = np.nonzero(defined)
    vals = comp[gs, fs]
    wrong = (src[vals] != src[fs]) | (tgt[vals] != tgt[gs])
    if wrong.any():
        i = int(np.nonzero(wrong)[0][0])
        return int(gs[i]), int(fs[i]), "endpoints"
    return None


def first_identity_violation(comp, src, tgt, ident):
    """Least f breaking id_tgt(f) . f = f = f . id_src(f); (f, side) or None."""
    n = comp.shape[0]
    f = np.arange(n)
    left = comp[ident[tgt], f]
    if (left != f).any():
        return int(np.nonzero(left != f)[0][0]), "left"
    right = comp[f, ident[src]]
    if (right != f).any():
        return int(np.nonzero(right != f)[0][0]), "right"
    return None


def first_assoc_violation(comp):
    """Least (f, g, h) with h.(g.f) != (h.g).f, ordering (f, g, h)."""
    n = comp.shape[0]
    for f in range(n):
        col = comp[:, f]
        gs = np.nonzero(col >= 0)[0]
        if len(gs) == 0:
            continue
        gf = col[gs]
        hg = comp[:, gs]                      # n x len(gs)
        ok = hg >= 0
        lhs = comp[:, gf]                     # h . (g f); defined iff ok
        rhs = comp[np.where(ok, hg, 0), f]
        bad = ok & (lhs != rhs)
        if bad.any():
            gpos, h = np.argwhere(bad.T)[0]
            return f, int(gs[gpos]), int(h)
    return None


def mono_epi_flags(comp, src, tgt, hom_ptr, hom_dat, nobj):
    """Per-morphism left/right cancellation flags, decided by enumeration."""
    n = comp.shape[0]
    mono = np.zeros(n, dtype=np.uint8)
    epi = np.zeros(n, dtype=np.uint8)
    into = [np.nonzero(tgt == o)[0] for o in range(nobj)]
    outof = [np.nonzero(src == o)[0] for o in range(nobj)]
    for f in range(n):
        u = into[src[f]]
        keys = src[u].astype(np.int64) * n + comp[f, u]
        mono[f] = len(np.unique(keys)) == len(u)
        v = outof[tgt[f]]
        keys = tgt[v].astype(np.int64) * n + comp[v, f]
        epi[f] = len(np.unique(keys)) == len(v)
    return mono, epi


def lift_report(comp, src, tgt, hom_ptr, hom_dat, nobj, e, m):
    """Unique-lift scan for the pair (e, m).

    Returns (ok, u, v, count): ok=1 when every commuting square (u, v) has
    exactly one diagonal; otherwise (u, v) is the least failing square and
    count its number of lifts.
    """
    A, B = src[e], tgt[e]
    X, Y = src[m], tgt[m]
    us = _hom(hom_ptr, hom_dat, nobj, A, X)
    vs = _hom(hom_ptr, hom_dat, nobj, B, Y)
    hs = _hom(hom_ptr, hom_dat, nobj, B, X)
    for u in us:
        mu = comp[m, u]
        for v in vs:
            if comp[v, e] != mu:
                continue
            cnt = 0
            for h in hs:
                if comp[h, e] == u and comp[m, h] == v:
                    cnt += 1
            if cnt != 1:
                return 0, int(u), int(v), int(cnt)
    return 1, -1, -1, 1


def commuting_spans(comp, src, tgt, hom_ptr, hom_dat, nobj, f, g):
    """All (p, q) with f.p = g.q, ordered by (apex object, p, q)."""
    a, b = src[f], src[g]
    ps_all, qs_all = [], []
    for w in range(nobj):
        ps = _hom(hom_ptr, hom_dat, nobj, w, a)
        qs = _hom(hom_ptr, hom_dat, nobj, w, b)
        if len(ps) == 0 or len(qs) == 0:
            continue
        fp = comp[f, ps]
        gq = comp[g, qs]
        eq = fp[:, None] == gq[None, :]
        pi, qi = np.nonzero(eq)
        ps_all.append(ps[pi])
        qs_all.append(qs[qi])
    if not ps_all:
        return (np.empty(0, dtype=comp.dtype),) * 2
    return np.concatenate(ps_all), np.concatenate(qs_all)


def span_verify(comp, src, tgt, hom_ptr, hom_dat, nobj, p, q, cone_p, cone_q):
    """Check the span (p, q) is terminal among the given cones.

    Returns (ok, mediators): mediators[i] is the unique h with p.h=cone_p[i]
    and q.h=cone_q[i]; on failure ok=0 and mediators[i] = -1 (no lift) or -2
    (multiple) at the least failing cone, the rest unset.
    """
    w = src[p]
    med = np.full(len(cone_p), -1, dtype=np.int64)
    for i in range(len(cone_p)):
        cp, cq = cone_p[i], cone_q[i]
        hs = _hom(hom_ptr, hom_dat, nobj, src[cp], w)
        hit = hs[(comp[p, hs] == cp) & (comp[q, hs] == cq)]
        if len(hit) == 1:
            med[i] = hit[0]
        else:
            med[i] = -1 if len(hit) == 0 else -2
            return 0, med
    return 1, med


def coequalizer_verify(comp, src, tgt, hom_ptr, hom_dat, nobj, f, g, e):
    """Check e coequalizes (f, g) and is universal among all coequalizing
    tests; returns (ok, mediators aligned with the tests, tests)."""
    b = tgt[f]
    outs = np.nonzero(src == b)[0]
    tests = outs[comp[outs, f] == comp[outs, g]]
    w = tgt[e]
    med = np.full(len(tests), -1, dtype=np.int64)
    if comp[e, f] != comp[e, g]:
        return 0, med, tests
    for i, d in enumerate(tests):
        hs = _hom(hom_ptr, hom_dat, nobj, w, tgt[d])
        hit = hs[comp[hs, e] == d]
        if len(hit) == 1:
            med[i] = hit[0]
        else:
            med[i] = -1 if len(hit) == 0 else -2
            return 0, med, tests
    return 1, med, tests
