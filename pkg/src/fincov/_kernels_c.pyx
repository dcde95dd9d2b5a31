# Compiled lane of the enumeration kernels; see _kernels_py for the contract.

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "c"

ctypedef cnp.int64_t I64


def first_composability_violation(cnp.ndarray[I64, ndim=2] comp,
                                  cnp.ndarray[I64, ndim=1] src,
                                  cnp.ndarray[I64, ndim=1] tgt):
    cdef Py_ssize_t n = comp.shape[0]
    cdef Py_ssize_t g, f
    cdef I64 gf
    for g in range(n):
        for f in range(n):
            gf = comp[g, f]
            if tgt[f] == src[g]:
                if gf < 0:
                    return int(g), int(f), "missing"
                if src[gf] != src[f] or tgt[gf] != tgt[g]:
                    return int(g), int(f), "endpoints"
            elif gf >= 0:
                return int(g), int(f), "spurious"
    return None


def first_identity_violation(cnp.ndarray[I64, ndim=2] comp,
                             cnp.ndarray[I64, ndim=1] src,
                             cnp.ndarray[I64, ndim=1] tgt,
                             cnp.ndarray[I64, ndim=1] ident):
    cdef Py_ssize_t n = comp.shape[0]
    cdef Py_ssize_t f
    for f in range(n):
        if comp[ident[tgt[f]], f] != f:
            return int(f), "left"
    for f in range(n):
        if comp[f, ident[src[f]]] != f:
            return int(f), "right"
    return None


def first_assoc_violation(cnp.ndarray[I64, ndim=2] comp):
    cdef Py_ssize_t n = comp.shape[0]
    cdef Py_ssize_t f, g, h
    cdef I64 gf, hg
    for f in range(n):
        for g in range(n):
            gf = comp[g, f]
            if gf < 0:
                continue
            for h in range(n):
                hg = comp[h, g]
                if hg < 0:
                    continue
                if comp[h, gf] != comp[hg, f]:
                    return int(f), int(g), int(h)
    return None


def mono_epi_flags(cnp.ndarray[I64, ndim=2] comp,
                   cnp.ndarray[I64, ndim=1] src,
                   cnp.ndarray[I64, ndim=1] tgt,
                   cnp.ndarray[I64, ndim=1] hom_ptr,
                   cnp.ndarray[I64, ndim=1] hom_dat,
                   Py_ssize_t nobj):
    # hom-bucketed duplicate scan: a composite seen twice within one test
    # object's bucket breaks cancellation
    cdef Py_ssize_t n = comp.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mono = np.ones(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] epi = np.ones(n, dtype=np.uint8)
    cdef cnp.ndarray[I64, ndim=1] seen = np.full(n, -1, dtype=np.int64)
    cdef Py_ssize_t f, z, lo, hi, i
    cdef I64 token, c
    token = 0
    for f in range(n):
        for z in range(nobj):
            lo = hom_ptr[z * nobj + src[f]]
            hi = hom_ptr[z * nobj + src[f] + 1]
            if hi - lo < 2:
                continue
            token += 1
            for i in range(lo, hi):
                c = comp[f, hom_dat[i]]
                if seen[c] == token:
                    mono[f] = 0
                    break
                seen[c] = token
            if not mono[f]:
                break
    for f in range(n):
        for z in range(nobj):
            lo = hom_ptr[tgt[f] * nobj + z]
            hi = hom_ptr[tgt[f] * nobj + z + 1]
            if hi - lo < 2:
                continue
            token += 1
            for i in range(lo, hi):
                c = comp[hom_dat[i], f]
                if seen[c] == token:
                    epi[f] = 0
                    break
                seen[c] = token
            if not epi[f]:
                break
    return mono, epi


cdef inline (Py_ssize_t, Py_ssize_t) _hom_range(cnp.ndarray[I64, ndim=1] hom_ptr,
                                                Py_ssize_t nobj,
                                                I64 a, I64 b):
    cdef Py_ssize_t k = a * nobj + b
    return hom_ptr[k], hom_ptr[k + 1]


def lift_report(cnp.ndarray[I64, ndim=2] comp,
                cnp.ndarray[I64, ndim=1] src,
                cnp.ndarray[I64, ndim=1] tgt,
                cnp.ndarray[I64, ndim=1] hom_ptr,
                cnp.ndarray[I64, ndim=1] hom_dat,
                Py_ssize_t nobj, Py_ssize_t e, Py_ssize_t m):
    cdef I64 A = src[e], B = tgt[e], X = src[m], Y = tgt[m]
    cdef Py_ssize_t ulo, uhi, vlo, vhi, hlo, hhi, iu, iv, ih, cnt
    cdef I64 u, v, h, mu
    ulo, uhi = _hom_range(hom_ptr, nobj, A, X)
    vlo, vhi = _hom_range(hom_ptr, nobj, B, Y)
    hlo, hhi = _hom_range(hom_ptr, nobj, B, X)
    for iu in range(ulo, uhi):
        u = hom_dat[iu]
        mu = comp[m, u]
        for iv in range(vlo, vhi):
            v = hom_dat[iv]
            if comp[v, e] != mu:
                continue
            cnt = 0
            for ih in range(hlo, hhi):
                h = hom_dat[ih]
                if comp[h, e] == u and comp[m, h] == v:
                    cnt += 1
            if cnt != 1:
                return 0, int(u), int(v), int(cnt)
    return 1, -1, -1, 1


def commuting_spans(cnp.ndarray[I64, ndim=2] comp,
                    cnp.ndarray[I64, ndim=1] src,
                    cnp.ndarray[I64, ndim=1] tgt,
                    cnp.ndarray[I64, ndim=1] hom_ptr,
                    cnp.ndarray[I64, ndim=1] hom_dat,
                    Py_ssize_t nobj, Py_ssize_t f, Py_ssize_t g):
    cdef I64 a = src[f], b = src[g]
    cdef list ps = [], qs = []
    cdef Py_ssize_t w, plo, phi, qlo, qhi, ip, iq
    cdef I64 p, q, fp
    for w in range(nobj):
        plo, phi = _hom_range(hom_ptr, nobj, w, a)
        qlo, qhi = _hom_range(hom_ptr, nobj, w, b)
        if phi == plo or qhi == qlo:
            continue
        for ip in range(plo, phi):
            p = hom_dat[ip]
            fp = comp[f, p]
            for iq in range(qlo, qhi):
                q = hom_dat[iq]
                if comp[g, q] == fp:
                    ps.append(p)
                    qs.append(q)
    return (np.array(ps, dtype=np.int64), np.array(qs, dtype=np.int64))


def span_verify(cnp.ndarray[I64, ndim=2] comp,
                cnp.ndarray[I64, ndim=1] src,
                cnp.ndarray[I64, ndim=1] tgt,
                cnp.ndarray[I64, ndim=1] hom_ptr,
                cnp.ndarray[I64, ndim=1] hom_dat,
                Py_ssize_t nobj, Py_ssize_t p, Py_ssize_t q,
                cnp.ndarray[I64, ndim=1] cone_p,
                cnp.ndarray[I64, ndim=1] cone_q):
    cdef I64 w = src[p]
    cdef Py_ssize_t ncone = cone_p.shape[0]
    cdef cnp.ndarray[I64, ndim=1] med = np.full(ncone, -1, dtype=np.int64)
    cdef Py_ssize_t i, hlo, hhi, ih, cnt
    cdef I64 cp, cq, h, found
    for i in range(ncone):
        cp = cone_p[i]
        cq = cone_q[i]
        hlo, hhi = _hom_range(hom_ptr, nobj, src[cp], w)
        cnt = 0
        found = -1
        for ih in range(hlo, hhi):
            h = hom_dat[ih]
            if comp[p, h] == cp and comp[q, h] == cq:
                cnt += 1
                found = h
        if cnt == 1:
            med[i] = found
        else:
            med[i] = -1 if cnt == 0 else -2
            return 0, med
    return 1, med


def coequalizer_verify(cnp.ndarray[I64, ndim=2] comp,
                       cnp.ndarray[I64, ndim=1] src,
                       cnp.ndarray[I64, ndim=1] tgt,
                       cnp.ndarray[I64, ndim=1] hom_ptr,
                       cnp.ndarray[I64, ndim=1] hom_dat,
                       Py_ssize_t nobj, Py_ssize_t f, Py_ssize_t g,
                       Py_ssize_t e):
    cdef I64 b = tgt[f], w = tgt[e]
    cdef Py_ssize_t n = comp.shape[0]
    cdef list test_list = []
    cdef Py_ssize_t d
    for d in range(n):
        if src[d] == b and comp[d, f] == comp[d, g]:
            test_list.append(d)
    cdef cnp.ndarray[I64, ndim=1] tests = np.array(test_list, dtype=np.int64)
    cdef cnp.ndarray[I64, ndim=1] med = np.full(len(test_list), -1,
                                                dtype=np.int64)
    if comp[e, f] != comp[e, g]:
        return 0, med, tests
    cdef Py_ssize_t i, hlo, hhi, ih, cnt
    cdef I64 dd, h, found
    for i in range(tests.shape[0]):
        dd = tests[i]
        hlo, hhi = _hom_range(hom_ptr, nobj, w, tgt[dd])
        cnt = 0
        found = -1
        for ih in range(hlo, hhi):
            h = hom_dat[ih]
            if comp[h, e] == dd:
                cnt += 1
                found = h
        if cnt == 1:
            med[i] = found
        else:
            med[i] = -1 if cnt == 0 else -2
            return 0, med, tests
    return 1, med, tests
