import json
import sys


from fincov.cli import main
from fincov.report import SCHEMA_VERSION


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_schema_version(capsys):
    code, out = run_cli(["schema-version"], capsys)
    assert code == 0 and out.strip() == SCHEMA_VERSION


def test_protomodularity_counterexample_exit_code(capsys):
    code, out = run_cli(["check", "protomodularity",
                         "--input", "corpus:set_skeleton_2",
                         "--classes", "E=retractions,M=all",
                         "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["schema"] == SCHEMA_VERSION
    assert rep["report"]["counterexample"]


def test_compact_pass_exit_code(capsys):
    code, out = run_cli(["check", "compact", "--input", "corpus:finite_top",
                         "--coverage", "open-covers", "--kappa", "2",
                         "--object", "X1.0", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["objects"]["X1.0"]["compact"] is True


def test_closure_extensions_hypothesis_exit_code(capsys):
    code, out = run_cli(["check", "closure-extensions",
                         "--input", "corpus:set_skeleton_2",
                         "--classes", "E=retractions,M=all",
                         "--chain-n", "1", "--chain-smalls", "1",
                         "--morphism", "f2>1:00", "--along", "f1>1:0",
                         "--format", "json"], capsys)
    assert code == 2


def test_input_error_exit_code(capsys):
    code = main(["check", "compact", "--input", "corpus:not_a_fixture"])
    assert code == 4


def test_unknown_check_exit_code(capsys):
    code = main(["check", "definitely-not-a-check",
                 "--input", "corpus:poset_2chain"])
    assert code == 4


def test_validate_from_file(tmp_path, capsys):
    from fincov.instances import diamond_lattice
    path = tmp_path / "dia.json"
    path.write_text(json.dumps(diamond_lattice().to_json()))
    code, out = run_cli(["check", "validate", "--input", str(path),
                         "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["ok"] is True


def test_classify_flag_form(capsys):
    code, out = run_cli(["check", "--check", "classify",
                         "--input", "corpus:poset_2chain",
                         "--morphism", "o0<o1", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["morphisms"][0]["mono"] is True


def test_coverage_check_nonstable_class(capsys):
    code, out = run_cli(["check", "coverage",
                         "--input", "corpus:set_skeleton_2",
                         "--classes", "M=sections", "--chain-n", "1",
                         "--chain-smalls", "0", "--format", "json"], capsys)
    assert code == 1


def test_uniformity_check_from_file(tmp_path, capsys):
    from fincov.algkit import group_theory
    from fincov.instances import cyclic_group
    data = {
        "theory": group_theory().to_json(),
        "algebras": [cyclic_group(4).to_json(), cyclic_group(2).to_json()],
        "t": ["mul", ["x"], ["y"]],
    }
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(data))
    code, out = run_cli(["check", "uniformity", "--input", str(path),
                         "--hom", "Z4>Z2:0101", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["report"]["strongly_t_uniform"] is True


def test_monic_pullback_check(tmp_path, capsys):
    from fincov.algkit import group_theory
    from fincov.instances import cyclic_group
    data = {
        "theory": group_theory().to_json(),
        "algebras": [cyclic_group(4).to_json(), cyclic_group(2).to_json()],
    }
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(data))
    code, out = run_cli(["check", "monic-pullback", "--input", str(path),
                         "--hom", "Z4>Z2:0101", "--format", "json"], capsys)
    assert code == 0


def test_export_corpus(tmp_path, capsys):
    code = main(["export-corpus", str(tmp_path / "fixtures")])
    assert code == 0
    manifest = json.loads((tmp_path / "fixtures" / "manifest.json").read_text())
    assert "diamond" in manifest["fixtures"]
    body = json.loads((tmp_path / "fixtures" / "diamond.json").read_text())
    assert "category" in body and "classes" in body


def test_json_reports_byte_identical(capsys):
    args = ["check", "compact", "--input", "corpus:sub_Z4",
            "--classes", "M=monos", "--chain-n", "1", "--chain-smalls", "0",
            "--format", "json"]
    _, out1 = run_cli(args, capsys)
    _, out2 = run_cli(args, capsys)
    assert out1 == out2


def test_hopfian_cli(capsys):
    code, out = run_cli(["check", "hopfian", "--input", "corpus:diamond",
                         "--classes", "M=monos", "--morphism", "o1<o1",
                         "--along", "oa<o1", "--truncation", "3",
                         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["chain"]["stable_index"] == 0
