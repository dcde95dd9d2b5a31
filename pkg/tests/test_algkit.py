
import pytest

from fincov.algkit import (AlgHom, CapExceeded, FinAlgebra, Theory,
                           build_finalg_category, check_monic_pullback_corollary,
                           classify_uniformity, congruences,
                           derived_malcev_term, enumerate_homs,
                           enumerate_normal_subalgebras, eval_term,
                           find_isomorphism, group_theory, identity_hom,
                           is_right_unital, minimal_subalgebra, monoid_theory,
                           quotient_algebra, validate_theory_witnesses)
from fincov.instances import (cyclic_group, groups_upto, klein_four_group,
                              monoids_upto)

T = group_theory()
Z4 = cyclic_group(4)
Z2 = cyclic_group(2)


def test_eval_constant():
    assert eval_term(Z4, ("e",), {}) == 0


def test_eval_binary():
    assert eval_term(Z4, ("mul", ("x",), ("y",)), {"x": 1, "y": 3}) == 0


def test_eval_nested_protomodular_term():
    # theta(y, x . y^-1) with theta(y, z) = z . y, at x = 2, y = 1
    term = ("mul", ("mul", ("x",), ("inv", ("y",))), ("y",))
    assert eval_term(Z4, term, {"x": 2, "y": 1}) == 2


def test_eval_errors():
    with pytest.raises(ValueError):
        eval_term(Z4, ("mul", ("x",)), {"x": 0})
    with pytest.raises(ValueError):
        eval_term(Z4, ("x",), {})


def group_witnesses():
    theta = ("mul", ("z1",), ("y",))          # theta(y, z1) = z1 . y
    theta1 = ("mul", ("x",), ("inv", ("y",)))  # theta_1(x, y) = x . y^-1
    return {"pointed": ("e",),
            "protomodular": (theta, [theta1], [("e",)])}


def test_group_protomodular_witnesses_hold():
    corpus = groups_upto(8)
    verdicts = validate_theory_witnesses(T, group_witnesses(), corpus)
    assert verdicts["pointed"][0]
    assert verdicts["protomodular"][0]


def test_derived_malcev_term():
    theta = ("mul", ("z1",), ("y",))
    theta1 = ("mul", ("x",), ("inv", ("y",)))
    p = derived_malcev_term(theta, [theta1])
    verdicts = validate_theory_witnesses(T, {"malcev": p}, groups_upto(6))
    assert verdicts["malcev"][0]


def test_empty_signature_candidates_fail():
    bare = Theory("sets", (), ())
    A = FinAlgebra(bare, "two", 2, {})
    assert A.validate() is None
    verdicts = validate_theory_witnesses(
        bare, {"malcev": ("x",)}, [A])
    assert not verdicts["malcev"][0]
    with pytest.raises(ValueError):
        validate_theory_witnesses(bare, {}, [])


def test_minimal_subalgebra_group():
    assert minimal_subalgebra(Z4) == frozenset({0})


def test_minimal_subalgebra_empty_signature():
    bare = Theory("sets", (), ())
    A = FinAlgebra(bare, "two", 2, {})
    assert minimal_subalgebra(A) == frozenset()


def test_minimal_subalgebra_monoid_with_two_constants():
    Tm = Theory("pm", (("mul", 2), ("e", 0), ("z", 0)), (
        (("x",), ("mul", ("e",), ("x",)), ("x",)),
        (("x",), ("mul", ("x",), ("e",)), ("x",)),
    ))
    # {0 = e, 1 = z} with absorbing z inside a 3-element monoid
    mul = ((0, 1, 2), (1, 1, 1), (2, 1, 2))
    A = FinAlgebra(Tm, "M", 3, {"mul": mul, "e": 0, "z": 1})
    assert A.validate() is None
    assert minimal_subalgebra(A) == frozenset({0, 1})


def test_enumerate_homs_z4_z2():
    hs = enumerate_homs(Z4, Z2)
    assert [h.images for h in hs] == [(0, 0, 0, 0), (0, 1, 0, 1)]


def test_enumerate_homs_contains_identity():
    hs = enumerate_homs(Z4, Z4)
    assert identity_hom(Z4) in hs


def test_enumerate_homs_from_trivial():
    Z1 = cyclic_group(1)
    assert len(enumerate_homs(Z1, Z4)) == 1


def test_normal_subalgebras_z4():
    assert [sorted(s) for s in enumerate_normal_subalgebras(Z4)] == \
        [[0], [0, 1, 2, 3], [0, 2]]


def test_normal_subalgebras_klein():
    V4 = klein_four_group()
    assert len(enumerate_normal_subalgebras(V4)) == 5


def test_normal_subalgebras_one_element():
    Z1 = cyclic_group(1)
    assert enumerate_normal_subalgebras(Z1) == [frozenset({0})]


def test_normal_subalgebras_agree_with_hom_search():
    # independent oracle: preimages of minimal subalgebras along all homs
    # into the complete size <= 4 roster
    roster = [A for A in groups_upto(4)]
    for A in roster:
        via_homs = set()
        for B in roster:
            if B.size > A.size:
                continue
            for h in enumerate_homs(A, B):
                via_homs.add(h.preimage(minimal_subalgebra(B)))
        assert set(enumerate_normal_subalgebras(A)) == via_homs, A.name


def test_congruences_count_z4():
    assert len(congruences(Z4)) == 3


def test_quotient_algebra_valid():
    for theta in congruences(Z4):
        Q, q = quotient_algebra(Z4, theta)
        assert Q.validate() is None
        assert q.is_valid()


def test_uniformity_mod2_hom():
    f = enumerate_homs(Z4, Z2)[1]
    rep = classify_uniformity(f)
    assert rep.weakly_t_uniform and rep.t_uniform and rep.strongly_t_uniform
    assert rep.t_cancelative and rep.weakly_t_cancelative
    # the defining instance: 1 + preimage of 0 is the preimage of 1 + {0}
    K = sorted(f.preimage(minimal_subalgebra(Z2)))
    assert K == [0, 2]
    assert sorted((1 + k) % 4 for k in K) == [1, 3]


def test_uniformity_injective_hom():
    incl = enumerate_homs(Z2, Z4)[1]
    rep = classify_uniformity(incl)
    assert rep.t_uniform and rep.weakly_t_uniform


def test_uniformity_monoid_counterexample():
    Tm = monoid_theory()
    # three-element multiplicative monoid {1, a, 0} with a.a = 0
    mul = ((0, 1, 2), (1, 2, 2), (2, 2, 2))
    M = FinAlgebra(Tm, "A3", 3, {"mul": mul, "e": 0})
    assert M.validate() is None
    one = FinAlgebra(Tm, "One", 1, {"mul": ((0,),), "e": 0})
    f = AlgHom(M, one, (0, 0, 0))
    assert f.is_valid()
    rep = classify_uniformity(f)
    # collapsing 1 and a needs a = 1.k with k in the whole of M: k = a works
    # for the pair (a, 1) but the pair (1, a) needs 1 = a.k: impossible
    assert rep.t_uniform is False
    assert rep.witnesses["t_uniform"]


def test_implication_chain_groups():
    t = T.default_t
    assert is_right_unital(t, groups_upto(6)) is not None
    for A in groups_upto(6):
        for B in groups_upto(6):
            for h in enumerate_homs(A, B):
                rep = classify_uniformity(h, t)
                if rep.strongly_t_uniform:
                    assert rep.t_uniform
                if rep.t_uniform:
                    assert rep.weakly_t_uniform


def test_pointed_theory_weakly_cancelative():
    for A in groups_upto(6):
        for B in groups_upto(6):
            for h in enumerate_homs(A, B):
                assert classify_uniformity(h).weakly_t_cancelative


def test_monic_pullback_corollary_mod2():
    f = enumerate_homs(Z4, Z2)[1]
    res = check_monic_pullback_corollary(f)
    assert res["ok"] is True
    assert res["injective"] is False and res["restriction_injective"] is False


def test_monic_pullback_corollary_injective():
    incl = enumerate_homs(Z2, Z4)[1]
    res = check_monic_pullback_corollary(incl)
    assert res["ok"] is True and res["injective"] is True


def test_monic_pullback_hypothesis_failure():
    Tm = monoid_theory()
    mul = ((0, 1, 2), (1, 2, 2), (2, 2, 2))
    M = FinAlgebra(Tm, "A3", 3, {"mul": mul, "e": 0})
    one = FinAlgebra(Tm, "One", 1, {"mul": ((0,),), "e": 0})
    f = AlgHom(M, one, (0, 0, 0))
    res = check_monic_pullback_corollary(f)
    if res["ok"] is None:
        assert res["hypothesis_failures"]


def test_ambient_pullback_of_z4s_over_z2():
    amb = build_finalg_category(group_theory(), 8, groups_upto(8))
    Z4a = next(A for A in amb.objects() if A.name == "Z4")
    Z2a = next(A for A in amb.objects() if A.name == "Z2")
    f = enumerate_homs(Z4a, Z2a)[1]
    sq = amb.find_pullback(f, f)
    assert sq.apex.size == 8
    # fiber product over the one-element algebra is the product
    Z1a = next(A for A in amb.objects() if A.name == "Z1")
    ta = amb.hom(Z4a, Z1a)[0]
    tb = amb.hom(Z2a, Z1a)[0]
    prod = amb.find_pullback(ta, tb)
    assert prod.apex.size == 8


def test_ambient_cap_error():
    amb = build_finalg_category(group_theory(), 4,
                                [cyclic_group(4), cyclic_group(2),
                                 cyclic_group(1)])
    Z4a = next(A for A in amb.objects() if A.name == "Z4")
    Z2a = next(A for A in amb.objects() if A.name == "Z2")
    f = enumerate_homs(Z4a, Z2a)[1]
    with pytest.raises(CapExceeded):
        amb.find_pullback(f, f)


def test_ambient_pullback_mediators():
    amb = build_finalg_category(group_theory(), 8, groups_upto(4))
    Z4a = next(A for A in amb.objects() if A.name == "Z4")
    Z2a = next(A for A in amb.objects() if A.name == "Z2")
    f = enumerate_homs(Z4a, Z2a)[1]
    sq = amb.find_pullback(f, f)
    med = sq.mediator(identity_hom(Z4a), identity_hom(Z4a))
    assert med.src is Z4a and med.tgt is sq.apex
    assert amb.compose(sq.proj1, med) == identity_hom(Z4a)


def test_find_isomorphism_detects_nonisomorphic():
    assert find_isomorphism(cyclic_group(4), klein_four_group()) is None
    iso = find_isomorphism(cyclic_group(4), cyclic_group(4))
    assert iso is not None and iso.is_bijective()


def test_monoid_corpus_validates():
    for M in monoids_upto(3):
        assert M.validate() is None


def test_theory_json_roundtrip():
    again = Theory.from_json(T.to_json(), name="groups")
    assert again.symbols == T.symbols
    assert again.equations == T.equations
