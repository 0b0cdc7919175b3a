"""Command-line interface: JSON documents, config handling, exit codes."""
import json

import pytest

from dahakz import cli


def run_json(argv, tmp_path):
    out = tmp_path / "doc.json"
    code = cli.main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text()) if code == 0 else None


def test_roots_document(tmp_path):
    code, doc = run_json(["roots", "--type", "A2"], tmp_path)
    assert code == 0
    assert doc["schema"] == "dahakz/1"
    assert doc["subcommand"] == "roots"
    assert doc["result"]["coxeter_number"] == 3


def test_domains_a1_census(tmp_path):
    code, doc = run_json(["domains", "--type", "A1", "--k", "1"], tmp_path)
    assert code == 0
    doms = doc["result"]["domains"]
    assert len(doms) == 3
    assert sum(1 for d in doms if d["bounded"]) == 1


def test_simple_char_bounded_domain(tmp_path):
    code, doc = run_json(
        ["simple-char", "--type", "A1", "--k", "1", "--domain", "bounded"],
        tmp_path)
    assert code == 0
    weights = doc["result"]["weights"]
    assert weights == [["1/4"]]


def test_byte_determinism(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    argv = ["char", "--type", "A1", "--window", "8", "--out"]
    assert cli.main(argv + [str(out1)]) == 0
    assert cli.main(argv + [str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# orbit run\ntype = A1\nwindow = 4\n")
    code, doc = run_json(["orbit", "--config", str(cfgfile)], tmp_path)
    assert code == 0
    n4 = doc["result"]["count"]
    code, doc = run_json(["orbit", "--config", str(cfgfile),
                          "--window", "6"], tmp_path)
    assert code == 0
    assert doc["result"]["count"] > n4
    assert doc["config"]["window"] == "6"


def test_unknown_config_key_is_exit_2(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("type = A1\nnot_a_key = 5\n")
    assert cli.main(["orbit", "--config", str(cfgfile)]) == 2


def test_bad_type_is_exit_2():
    assert cli.main(["roots", "--type", "E8"]) == 2


def test_scope_violation_is_exit_3():
    # lam0 = 0 has a non-trivial stabilizer: outside the regular scope
    assert cli.main(["domains", "--type", "A1", "--lam0", "0",
                     "--h0", "1/2"]) == 3


def test_tolerance_failure_is_exit_4():
    assert cli.main(["monodromy", "--type", "A1", "--mu0=-3/4",
                     "--prec", "64", "--order", "4", "--rtol", "1e-5",
                     "--tol", "1e-40"]) == 4


def test_daha_mul_expression(tmp_path):
    code, doc = run_json(
        ["daha-mul", "--type", "A1",
         "--a", "s0*xi0", "--b", "xi0"], tmp_path)
    assert code == 0
    assert doc["result"]["product"]


def test_quick_selftests(tmp_path):
    for name in ("roots", "orbit", "alcoves", "domains", "char",
                 "daha-mul", "aha-mul", "intertwiner"):
        out = tmp_path / f"{name}.json"
        assert cli.main([name, "--selftest", "--out", str(out)]) == 0, name
