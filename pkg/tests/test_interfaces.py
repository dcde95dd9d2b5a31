"""Cross-cutting interface tests: JSON loaders, CLI parameter paths,
parallel reduction determinism, and materialized slices."""

import json

import pytest

from fincov.cli import main
from fincov.coverage import (OpenCoverCoverage, RuleCoverage,
                             build_chain_type, decide_tau_compact)
from fincov.fincat import CatFunctor, FinCategory, validate_category
from fincov.instances import (cyclic_group, diamond_lattice,
                              finite_top_category, group_category,
                              set_skeleton, subgroup_lattice_poset)
from fincov.morphclass import builtin_class
from fincov.protomod import transport_classes
from fincov.variance import mixed_functor_from_json, variance_from_json


def run_cli(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_malformed_json_gives_schema_report():
    rep = validate_category({"objects": ["a"]})
    assert not rep and rep.law == "schema"


def test_cli_inline_diagram_types(capsys):
    code, out = run_cli(["check", "compact", "--input", "corpus:sub_Z8",
                         "--classes", "M=monos", "--diagram-types",
                         '[{"chain":{"n":2,"smalls":0,"dir":"cov"}}]',
                         "--object", "u01234567", "--format", "json"],
                        capsys)
    assert code == 1


def test_cli_diagram_types_file(tmp_path, capsys):
    path = tmp_path / "types.json"
    path.write_text(json.dumps([{"chain": {"n": 1, "smalls": 1}}]))
    code, _ = run_cli(["check", "compact", "--input", "corpus:diamond",
                       "--classes", "M=monos", "--diagram-types", str(path),
                       "--format", "json"], capsys)
    assert code == 0


def test_cli_rejects_non_directed_powerset(capsys):
    code = main(["check", "compact", "--input", "corpus:diamond",
                 "--classes", "M=monos", "--diagram-types",
                 '[{"powerset":{"index":["a","b"],"kappa":2}}]'])
    assert code == 4


def test_cli_coverage_from_input_file(tmp_path, capsys):
    dia = diamond_lattice()
    data = {"category": dia.to_json(),
            "coverage": {"rule": {"J": [{"chain": {"n": 1, "smalls": 1}}],
                                  "M": "monos"}}}
    path = tmp_path / "in.json"
    path.write_text(json.dumps(data))
    code, out = run_cli(["check", "coverage", "--input", str(path),
                         "--classes", "M=monos", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["report"]["is_coverage"] is True


def test_cli_max_size_rebuilds_ambient(capsys):
    code, out = run_cli(["check", "protomodularity",
                         "--input", "corpus:groups_ambient",
                         "--classes", "E=retractions,M=all",
                         "--max-size", "4", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert "within size cap 4" in rep["report"]["scope"]


def test_jobs_parallel_reduction_deterministic():
    C = subgroup_lattice_poset(cyclic_group(8))
    tau = RuleCoverage([build_chain_type(2, 0, "cov")], "monos")
    v1 = decide_tau_compact(C, "u01234567", tau, jobs=1)
    v4 = decide_tau_compact(C, "u01234567", tau, jobs=4)
    assert v1.compact == v4.compact
    assert v1.failing.key() == v4.failing.key()
    assert v1.witnesses == v4.witnesses


def test_slice_materialization_counts():
    sk = set_skeleton(2)
    sl = sk.category
    from fincov.fincat import slice_category
    view = slice_category(sl, "S2")
    mat = view.to_fincategory()
    assert isinstance(mat, FinCategory)
    assert len(mat.objects()) == len(view.objects())
    assert len(mat.morphisms()) == len(view.morphisms())


def test_variance_json_roundtrip():
    from fincov.instances import klein_variance
    kv = klein_variance()
    again = variance_from_json(kv.category, kv.to_json())
    assert again == kv


def test_mixed_functor_loader_rejects_invalid():
    from fincov.instances import klein_variance
    kv = klein_variance()
    G = group_category(cyclic_group(2))
    with pytest.raises(ValueError):
        mixed_functor_from_json(kv, G, {
            "objects": {"*": "*"},
            "morphisms": {"g0": "g0", "g1": "g1", "g2": "g1", "g3": "g1"}})


def test_transport_rejects_broken_functor():
    C = diamond_lattice()
    obj_map = {o: o for o in C.objects()}
    mor_map = {m: m for m in C.morphisms()}
    mor_map["o0<o1"] = "o0<oa"  # wrong endpoints
    F = CatFunctor(C, C, obj_map, mor_map)
    rep = transport_classes([F], [(builtin_class(C, "all"),
                                   builtin_class(C, "all"))])
    assert rep.precondition_failure is not None
    assert rep.precondition_failure[0] == "functoriality"


def test_open_cover_cache_consistency():
    top = finite_top_category(2)
    occ = OpenCoverCoverage(top, kappa=2)
    a, _ = occ.coverings_of(top.category, "X1.0")
    b, _ = occ.coverings_of(top.category, "X1.0")
    assert a == b
    capped, flag = occ.coverings_of(top.category, "X2.0", cap=1)
    assert flag is True and len(capped) == 1
