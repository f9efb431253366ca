import pytest

from src import main as cli
from src.lp import InfeasibleError


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_no_command_prints_help(capsys):
    code, out = run(capsys)
    assert code == cli.EXIT_OK
    assert "Quick start" in out


def test_radius(capsys):
    code, out = run(capsys, "radius")
    assert code == cli.EXIT_OK
    assert "f^2 = 1/2 at k_F r = 1.8" in out
    assert "no root" in out


def test_rho(capsys):
    code, out = run(capsys, "rho", "--geom", "1d", "--kfr", "10", "--kfx", "5")
    assert code == cli.EXIT_OK
    assert out.startswith("a   = ")
    assert "verdict:" in out


def test_rho_requires_kfr(capsys):
    code, _ = run(capsys, "rho", "--kfx", "5")
    assert code == cli.EXIT_INVALID


def test_coincident_geometry_is_invalid_input(capsys):
    code, _ = run(capsys, "rho", "--kfr", "0.1", "--kfx", "0")
    assert code == cli.EXIT_INVALID


def test_witness_eval_on_triple(capsys):
    code, out = run(
        capsys, "witness", "eval", "--family", "stabilizer", "--params=1.41421356,1,1,-1",
        "--rho-from", "triple", "--triple=-0.8,0.1,0.1",
    )
    assert code == cli.EXIT_OK
    assert "trace:   2.214213560000" in out
    assert "not detected" in out
    assert "n/a (invalid triple)" in out


def test_witness_eval_on_geometry(capsys):
    code, out = run(capsys, "witness", "eval", "--witness", "w_gen", "--kfr", "0.1", "--kfx", "0.05")
    assert code == cli.EXIT_OK
    assert "this witness: detected" in out
    assert "panel verdict: W\\B" in out


def test_witness_validate(capsys):
    code, out = run(capsys, "witness", "validate", "--witness", "ghz_projector0")
    assert code == cli.EXIT_OK
    assert "result:             PASS" in out


def test_witness_validate_unknown_pair(capsys):
    code, _ = run(
        capsys, "witness", "validate", "--family", "spin-chain", "--params=1,1,1,1", "--target", "ghz"
    )
    assert code == cli.EXIT_INVALID


def test_witness_params_count(capsys):
    code, _ = run(capsys, "witness", "validate", "--family", "stabilizer", "--params=1,1")
    assert code == cli.EXIT_INVALID


def test_lp_vertices(capsys):
    code, out = run(capsys, "lp", "vertices", "--system", "ghz-projector")
    assert code == cli.EXIT_OK
    assert len(out.strip().splitlines()) == 14


def test_lp_failure_exit_code(capsys, monkeypatch):
    def infeasible(system):
        raise InfeasibleError("no point")

    monkeypatch.setattr(cli, "feasible_region", infeasible)
    code, _ = run(capsys, "lp", "vertices", "--system", "spin-chain")
    assert code == cli.EXIT_LP


def test_lp_table_dump(capsys, tmp_path):
    path = tmp_path / "stabilizer_w.tsv"
    code, out = run(capsys, "lp", "table", "--family", "stabilizer", "--target", "w", "--dump", str(path))
    assert code == cli.EXIT_OK
    assert len(out.strip().splitlines()) == 20
    assert "[printed as a copy" in out
    assert len(path.read_text().splitlines()) == 21


def test_bounds_verify_all_states(capsys):
    code, out = run(capsys, "bounds", "verify", "--combo", "spin-chain-12", "--family", "all")
    assert code == cli.EXIT_OK
    assert "empirical max: 5.000000000000" in out
    assert "verdict:       violated" in out


def test_scan_writes_csv(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    code, out = run(
        capsys, "scan", "--kfr-min", "0.1", "--kfx-min", "0.02", "--kfx-max", "0.06", "--kfx-step", "0.02",
        "--witness", "w_gen", "--output", str(path),
    )
    assert code == cli.EXIT_OK
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert "trace_w_gen" in lines[0].split(",")
    assert "detect_w_gen" in out


def test_scan_rejects_bad_step(capsys, tmp_path):
    code, _ = run(capsys, "scan", "--kfx-step", "0", "--output", str(tmp_path / "x.csv"))
    assert code == cli.EXIT_INVALID


def test_purity(capsys):
    code, out = run(
        capsys, "purity", "--geom", "2d", "--kfr", "3", "--theta", "1.2", "--samples", "50", "--refine", "1"
    )
    assert code == cli.EXIT_OK
    assert "max overlap:" in out


def test_scan_tiny_step_is_invalid_input(capsys, tmp_path):
    code, _ = run(capsys, "scan", "--kfr-min", "0", "--kfr-max", "1", "--kfr-step", "1e-13",
                  "--output", str(tmp_path / "x.csv"))
    assert code == cli.EXIT_INVALID


def test_two_d_scan_rejects_kf_x_range(capsys, tmp_path):
    code, _ = run(capsys, "scan", "--geom", "2d", "--kfr-min", "3", "--kfx-max", "1",
                  "--output", str(tmp_path / "x.csv"))
    assert code == cli.EXIT_INVALID


def test_purity_needs_samples(capsys):
    code, _ = run(capsys, "purity", "--kfr", "1", "--kfx", "0.3", "--samples", "0")
    assert code == cli.EXIT_INVALID
