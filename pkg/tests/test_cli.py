"""Command line interface, run in process through main(argv)."""

from __future__ import annotations

import pytest

from treepin import save_instance, save_scheme, synth_explicit_unit
from treepin.cli import main

from conftest import parity_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def lines_of(out):
    return {
        line.split(" = ")[0]: line.split(" = ", 1)[1]
        for line in out.strip().splitlines()
        if " = " in line
    }


@pytest.fixture
def parity_file(tmp_path):
    path = tmp_path / "parity.txt"
    path.write_text(save_instance(*parity_path()))
    return str(path)


def test_analyze_parity_exact_output(capsys, parity_file):
    code, out, err = run(capsys, "analyze", "--in", parity_file)
    assert code == 0 and err == ""
    got = lines_of(out)
    assert got["q"] == "2"
    assert got["vertices"] == "4"
    assert got["edges"] == "3"
    assert got["base_dim"] == "3"
    assert got["nw"] == "1"
    assert got["s"] == "1"
    assert got["cs_bits"] == "1"
    assert got["cw_bits"] == "1"
    assert got["rl_bits"] == "1"
    assert got["rco_bits"] == "2"
    assert got["irreducible"] == "true"
    assert got["edge_0_mcf_dim"] == "0"
    assert got["argmin_edges"] == "0 1 2"


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = str(tmp_path / "a.txt"), str(tmp_path / "b.txt")
    code1, _, _ = run(capsys, "gen", "--seed", "5", "--vertices", "5",
                      "--max-mult", "2", "--q", "3", "--nw", "2", "--out", a)
    code2, _, _ = run(capsys, "gen", "--seed", "5", "--vertices", "5",
                      "--max-mult", "2", "--q", "3", "--nw", "2", "--out", b)
    assert code1 == code2 == 0
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()


@pytest.mark.parametrize("seed", range(10))
def test_full_pipeline(capsys, tmp_path, seed):
    inst = str(tmp_path / "inst.txt")
    red = str(tmp_path / "red.txt")
    sch = str(tmp_path / "scheme.txt")
    code, out, _ = run(capsys, "gen", "--seed", str(seed), "--vertices", "5",
                       "--max-mult", "3", "--q", "2", "--nw", "1", "--out", inst)
    assert code == 0

    code, out, _ = run(capsys, "analyze", "--in", inst)
    assert code == 0

    code, out, _ = run(capsys, "reduce", "--in", inst, "--out", red, "--trace")
    assert code == 0
    assert lines_of(out)["irreducible"] == "true"

    code, out, _ = run(capsys, "synth", "--in", red, "--method", "random",
                       "--seed", str(100 + seed), "--out", sch)
    assert code == 0

    code, out, _ = run(capsys, "verify", "--in", red, "--scheme", sch)
    assert code == 0
    assert lines_of(out)["all_pass"] == "true"

    code, out, _ = run(capsys, "simulate", "--in", red, "--scheme", sch,
                       "--seed", "7", "--trials", "40")
    assert code == 0
    got = lines_of(out)
    assert got["perfect"] == "true"
    assert got["decode_failures"] == "0"
    assert got["key_mismatches"] == "0"


def test_oracle_check_with_scheme(capsys, tmp_path, parity_file):
    sch = str(tmp_path / "scheme.txt")
    code, _, _ = run(capsys, "synth", "--in", parity_file,
                     "--method", "explicit-unit", "--out", sch)
    assert code == 0
    code, out, _ = run(capsys, "oracle-check", "--in", parity_file,
                       "--scheme", sch)
    assert code == 0
    got = lines_of(out)
    assert got["oracle_ok"] == "true"
    assert got["wiretap_entropy_ok"] == "true"
    assert got["scheme_leakage_block_bits"] == "2"
    assert got["key_wiretap_mutual_bits"] == "0"


def test_verify_exit_code_on_suboptimal_scheme(capsys, tmp_path, parity_file):
    """A structurally valid but misaligned scheme verifies with exit 2."""
    ext_scheme = synth_explicit_unit(*parity_path())
    text = save_scheme(ext_scheme)
    # swap the two communication columns for raw coordinate transmissions
    # owned by nodes that can see them: still rank 2, still a valid scheme,
    # but no longer aligned with the wiretap
    lines = text.splitlines()
    fstart = next(i for i, l in enumerate(lines) if l.startswith("fmat"))
    lines[fstart + 1] = "1,0 0,0"
    lines[fstart + 2] = "1,0 0,1"
    lines[fstart + 3] = "0,0 1,0"
    bad = str(tmp_path / "bad.txt")
    (tmp_path / "bad.txt").write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", "--in", parity_file, "--scheme", bad)
    assert code == 2
    got = lines_of(out)
    assert got["aligned"] == "false"
    assert got["all_pass"] == "false"


def test_exit_1_on_missing_and_malformed_input(capsys, tmp_path):
    code, out, err = run(capsys, "analyze", "--in", str(tmp_path / "nope.txt"))
    assert code == 1
    assert err.startswith("error:")
    broken = tmp_path / "broken.txt"
    broken.write_text("treepin q=2\nvertices nope\n")
    code, _, err = run(capsys, "analyze", "--in", str(broken))
    assert code == 1
    assert "error:" in err


def test_exit_1_on_unsatisfiable_synth(capsys, tmp_path):
    """Explicit synthesis on a reducible instance is a validation failure."""
    from conftest import wide_path_reducible

    inst = tmp_path / "wide.txt"
    inst.write_text(save_instance(*wide_path_reducible()))
    sch = str(tmp_path / "s.txt")
    code, _, err = run(capsys, "synth", "--in", str(inst),
                       "--method", "random", "--out", sch)
    assert code == 1
    assert "error:" in err


def test_exit_3_on_budget(capsys, parity_file, tmp_path):
    big = tmp_path / "big.txt"
    run(capsys, "gen", "--seed", "1", "--vertices", "8", "--max-mult", "4",
        "--q", "3", "--nw", "2", "--out", str(big))
    code, _, err = run(capsys, "oracle-check", "--in", str(big),
                       "--budget", "4")
    assert code == 3
    assert "oracle budget exceeded" in err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "treepin" in out


def test_reduce_trace_fields(capsys, tmp_path):
    from conftest import wide_path_reducible

    inst = tmp_path / "wide.txt"
    inst.write_text(save_instance(*wide_path_reducible()))
    red = str(tmp_path / "red.txt")
    code, out, _ = run(capsys, "reduce", "--in", str(inst), "--out", red,
                       "--trace")
    assert code == 0
    got = lines_of(out)
    assert got["steps"] == "1"
    assert got["step_0_edge"] == "0"
    assert got["step_0_dim"] == "1"
    assert got["step_0_new_mult"] == "1"
    assert got["base_dim"] == "3"
    assert got["nw"] == "1"
    assert got["irreducible"] == "true"
    # the written file parses and is irreducible
    code, out, _ = run(capsys, "analyze", "--in", red)
    assert code == 0
    assert lines_of(out)["irreducible"] == "true"
