import pytest

from fincov.coverage import (ClosedFamilyCoverage, DiagramType,
                             DiagramTypeFailure, ExplicitCoverage,
                             OpenCoverCoverage, RuleCoverage,
                             build_chain_type, build_powerset_type,
                             check_coverage, check_image_compatibility,
                             check_subordination, decide_tau_compact,
                             enumerate_coverings, pullback_covering,
                             stabilization_small, validate_diagram_type)
from fincov.instances import (chain_poset, cyclic_group, diamond_lattice,
                              finite_top_category, set_skeleton,
                              subgroup_lattice_poset)
from fincov.morphclass import builtin_class, check_factorization_system
from fincov.variance import standard_variances


def test_validate_chain_type_directed():
    I = chain_poset(3)
    cov, _ = standard_variances(I)
    dt = validate_diagram_type(I, ["o0", "o1"], cov.cov, cov.contr)
    assert isinstance(dt, DiagramType) and dt.directed


def test_powerset_small_sets_not_directed():
    res = build_powerset_type(["a", "b"], 2)
    assert isinstance(res, DiagramTypeFailure)
    assert res.reason == "non-directed"


def test_powerset_full_smalls_directed():
    dt = build_powerset_type(["a", "b", "c"], 4)
    assert isinstance(dt, DiagramType)
    assert len(dt.smalls) == 8


def test_powerset_singleton_index():
    dt = build_powerset_type(["a"], 2)
    assert isinstance(dt, DiagramType)
    assert dt.smalls == frozenset(dt.I.objects())


def test_chain_type_variants():
    noeth = build_chain_type(3, 1, "cov")
    assert noeth.directed and len(noeth.smalls) == 2
    vac = build_chain_type(3, 3, "cov")
    assert len(vac.smalls) == 4
    art = build_chain_type(2, 0, "contr")
    assert art.variance.contr == frozenset(art.I.morphisms())


def test_enumerate_coverings_counts_pairs():
    # 2-chain subobject lattice: coverings over chain[1] are ordered pairs
    # s <= t of subobjects
    C = chain_poset(1)  # the slice over the top of a 2-chain lattice
    covs, capped = enumerate_coverings(C, "o1", [build_chain_type(1, 1, "cov")],
                                       builtin_class(C, "monos"))
    assert not capped
    assert len(covs) == 3  # (0,0), (0,1), (1,1)


def test_enumerate_coverings_isos_only():
    C = diamond_lattice()
    covs, _ = enumerate_coverings(C, "o1", [build_chain_type(1, 1, "cov")],
                                  builtin_class(C, "isos"))
    # only the constant covering at the identity leg
    assert len(covs) == 1


def test_enumerate_coverings_empty_J():
    C = diamond_lattice()
    covs, _ = enumerate_coverings(C, "o1", [], builtin_class(C, "monos"))
    assert covs == []


def test_check_coverage_stable_M_passes():
    C = diamond_lattice()
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], "monos")
    rep = check_coverage(C, tau, cap=64)
    assert rep.is_coverage is True


def test_check_coverage_nonstable_fails():
    sk = set_skeleton(2)
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], "sections")
    rep = check_coverage(sk.category, tau, cap=64)
    assert rep.is_coverage is False
    assert rep.witness


def test_check_coverage_one_morphism_category():
    C = chain_poset(0)
    tau = RuleCoverage([build_chain_type(1, 1, "cov")], "monos")
    rep = check_coverage(C, tau, cap=16)
    assert rep.is_coverage is True


def test_explicit_coverage_missing_pullback_covering():
    C = diamond_lattice()
    tau_full = RuleCoverage([build_chain_type(1, 0, "cov")], "monos")
    covs_top, _ = tau_full.coverings_of(C, "o1")
    explicit = ExplicitCoverage({"o1": covs_top})  # nothing at oa/ob/o0
    rep = check_coverage(C, explicit, cap=64)
    assert rep.is_coverage is False


def test_subordination_scan():
    C = diamond_lattice()
    tau = RuleCoverage([build_chain_type(1, 1, "cov")], "monos")
    covs, _ = tau.coverings_of(C, "o1")
    M = builtin_class(C, "monos")
    for cov in covs:
        assert check_subordination(cov, M)[0]
    ids = builtin_class(C, "identities")
    bad = [cov for cov in covs
           if not check_subordination(cov, ids)[0]]
    assert bad and check_subordination(bad[0], ids)[1] is not None


def test_image_compat_rule_coverage_with_ofs():
    sk = set_skeleton(2)
    C = sk.category
    E, M = sk.surjections(), sk.injections()
    FS = check_factorization_system(C, E, M)
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], M)
    for f in sorted(C.morphisms())[::7]:
        rep = check_image_compatibility(C, f, tau, E, M, FS=FS, cap=64)
        assert rep.compatible is True


def test_image_compat_identity():
    C = diamond_lattice()
    E = builtin_class(C, "isos")
    M = builtin_class(C, "monos")
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], M)
    rep = check_image_compatibility(C, "o1<o1", tau, E, M, cap=64)
    assert rep.compatible is True


def test_image_compat_explicit_too_small():
    C = diamond_lattice()
    E = builtin_class(C, "isos")
    M = builtin_class(C, "monos")
    tau_full = RuleCoverage([build_chain_type(1, 0, "cov")], M)
    covs_a, _ = tau_full.coverings_of(C, "oa")
    explicit = ExplicitCoverage({"oa": covs_a, "o1": []})
    rep = check_image_compatibility(C, "oa<o1", explicit, E, M, cap=64)
    assert rep.compatible is False and rep.witness


def test_z8_lattice_not_compact_with_proper_prefix():
    C = subgroup_lattice_poset(cyclic_group(8))
    tau = RuleCoverage([build_chain_type(2, 0, "cov")], "monos")
    v = decide_tau_compact(C, "u01234567", tau)
    assert v.compact is False
    assert v.failing is not None
    # the witness re-validates: re-running stabilization finds no small
    assert stabilization_small(v.failing) is None
    assert v.enumerated == 20


def test_z8_lattice_full_smalls_compact():
    C = subgroup_lattice_poset(cyclic_group(8))
    tau = RuleCoverage([build_chain_type(2, 2, "cov")], "monos")
    v = decide_tau_compact(C, "u01234567", tau)
    assert v.compact is True


def test_vacuity_full_smalls_everywhere():
    C = diamond_lattice()
    tau = RuleCoverage([build_chain_type(2, 2, "cov")], "monos")
    for c in C.objects():
        assert decide_tau_compact(C, c, tau).compact is True


def test_smalls_monotonicity():
    C = subgroup_lattice_poset(cyclic_group(4))
    for k in range(2):
        small = RuleCoverage([build_chain_type(2, k, "cov")], "monos")
        large = RuleCoverage([build_chain_type(2, k + 1, "cov")], "monos")
        for c in C.objects():
            vs = decide_tau_compact(C, c, small)
            vl = decide_tau_compact(C, c, large)
            if vs.compact:
                assert vl.compact


def test_compactness_iso_invariance():
    # a preorder with two isomorphic objects: verdicts agree
    from fincov.instances import poset_category
    from fincov.fincat import FinCategory, validate_category
    raw = {
        "objects": ["x", "y", "b"],
        "morphisms": [{"id": "ix", "src": "x", "tgt": "x"},
                      {"id": "iy", "src": "y", "tgt": "y"},
                      {"id": "ib", "src": "b", "tgt": "b"},
                      {"id": "xy", "src": "x", "tgt": "y"},
                      {"id": "yx", "src": "y", "tgt": "x"},
                      {"id": "bx", "src": "b", "tgt": "x"},
                      {"id": "by", "src": "b", "tgt": "y"}],
        "identities": {"x": "ix", "y": "iy", "b": "ib"},
        "composition": [["ix", "ix", "ix"], ["iy", "iy", "iy"],
                        ["ib", "ib", "ib"], ["xy", "ix", "xy"],
                        ["iy", "xy", "xy"], ["yx", "iy", "yx"],
                        ["ix", "yx", "yx"], ["bx", "ib", "bx"],
                        ["ix", "bx", "bx"], ["by", "ib", "by"],
                        ["iy", "by", "by"], ["yx", "xy", "ix"],
                        ["xy", "yx", "iy"], ["xy", "bx", "by"],
                        ["yx", "by", "bx"]],
    }
    C = validate_category(raw)
    assert isinstance(C, FinCategory)
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], "monos")
    vx = decide_tau_compact(C, "x", tau)
    vy = decide_tau_compact(C, "y", tau)
    assert vx.compact == vy.compact


def test_pullback_of_covering_is_covering():
    C = diamond_lattice()
    tau = RuleCoverage([build_chain_type(1, 0, "cov")], "monos")
    covs, _ = tau.coverings_of(C, "o1")
    for f in C.morphisms_into("o1"):
        for cov in covs:
            pulled, _ = pullback_covering(C, f, cov)
            assert tau.contains(C, pulled)


@pytest.fixture(scope="module")
def top3():
    return finite_top_category(3)


def test_one_point_space_compact(top3):
    occ = OpenCoverCoverage(top3, kappa=2)
    v = decide_tau_compact(top3.category, "X1.0", occ)
    assert v.compact is True


def test_two_point_discrete_not_compact(top3):
    occ = OpenCoverCoverage(top3, kappa=2)
    discrete = next(o for o, (n, opens) in top3.spaces.items()
                    if n == 2 and len(opens) == 4)
    v = decide_tau_compact(top3.category, discrete, occ)
    assert v.compact is False
    assert "non-directed-smalls" in v.flags
    # the failing covering is the singleton cover
    fam_size = v.failing.diagram_type.shape_params["size"]
    assert fam_size == 2


def test_empty_space_covered_by_empty_family(top3):
    occ = OpenCoverCoverage(top3, kappa=2)
    covs, _ = occ.coverings_of(top3.category, "X0.0")
    assert len(covs) == 1
    assert covs[0].flags == ("empty-family",)
    v = decide_tau_compact(top3.category, "X0.0", occ)
    assert v.compact is True and "empty-family" in v.flags


def test_closed_family_coverage_agrees_with_open(top3):
    occ = OpenCoverCoverage(top3, kappa=2)
    cfc = ClosedFamilyCoverage(top3, kappa=2)
    for oid, (n, _) in sorted(top3.spaces.items()):
        if n > 2:
            continue
        vo = decide_tau_compact(top3.category, oid, occ)
        vc = decide_tau_compact(top3.category, oid, cfc)
        assert vo.compact == vc.compact, oid


def test_open_cover_membership_semantic(top3):
    occ = OpenCoverCoverage(top3, kappa=2)
    covs, _ = occ.coverings_of(top3.category, "X1.0")
    for cov in covs:
        assert occ.contains(top3.category, cov)
    # pullbacks of open-cover coverings stay in the coverage
    C = top3.category
    for f in C.morphisms_into("X1.0")[:6]:
        for cov in covs:
            pulled, _ = pullback_covering(C, f, cov)
            assert occ.contains(C, pulled)
