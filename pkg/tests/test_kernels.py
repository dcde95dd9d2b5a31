import numpy as np
import pytest

from fincov import _kernels_py as kp
from fincov import kernels as kc
from fincov.instances import (chain_poset, cyclic_group, diamond_lattice,
                              group_category, random_category, set_skeleton)


def args_of(C):
    return C._kernel_args()


FIXTURES = [chain_poset(2), diamond_lattice(), set_skeleton(2).category,
            group_category(cyclic_group(4))] + \
           [random_category(s) for s in range(6)]


@pytest.mark.parametrize("C", FIXTURES, ids=lambda c: c.name)
def test_lanes_agree_on_validation(C):
    a = args_of(C)
    assert kp.first_composability_violation(*a[:3]) == \
        kc.first_composability_violation(*a[:3])
    assert kp.first_identity_violation(*a[:3], C._ident) == \
        kc.first_identity_violation(*a[:3], C._ident)
    assert kp.first_assoc_violation(a[0]) == kc.first_assoc_violation(a[0])


@pytest.mark.parametrize("C", FIXTURES, ids=lambda c: c.name)
def test_lanes_agree_on_flags(C):
    a = args_of(C)
    m1, e1 = kp.mono_epi_flags(*a)
    m2, e2 = kc.mono_epi_flags(*a)
    assert np.array_equal(m1, m2) and np.array_equal(e1, e2)


@pytest.mark.parametrize("C", FIXTURES[:4], ids=lambda c: c.name)
def test_lanes_agree_on_lifts_and_spans(C):
    a = args_of(C)
    n = len(C.morphisms())
    for e in range(0, n, max(1, n // 6)):
        for m in range(0, n, max(1, n // 6)):
            assert tuple(kp.lift_report(*a, e, m)) == \
                tuple(kc.lift_report(*a, e, m))
    for f in range(0, n, max(1, n // 5)):
        for g in range(n):
            if C._tgt[f] != C._tgt[g]:
                continue
            p1, q1 = kp.commuting_spans(*a, f, g)
            p2, q2 = kc.commuting_spans(*a, f, g)
            assert np.array_equal(np.sort(p1 * n + q1), np.sort(p2 * n + q2))


def test_assoc_violation_detected_by_both():
    # one-object table with identity a0 and a1.a1 = a2, a2.a2 = a1:
    # a1.(a1.a2) = a2 while (a1.a1).a2 = a1
    comp_bad = np.array([[0, 1, 2], [1, 2, 1], [2, 1, 1]], dtype=np.int64)
    assert kp.first_assoc_violation(comp_bad) == \
        kc.first_assoc_violation(comp_bad)
    assert kp.first_assoc_violation(comp_bad) is not None


def test_lanes_agree_on_random_broken_tables():
    import random
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 5)
        comp = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            comp[0, i] = comp[i, 0] = i
        for i in range(1, n):
            for j in range(1, n):
                comp[i, j] = rng.randrange(n)
        assert kp.first_assoc_violation(comp) == \
            kc.first_assoc_violation(comp)
