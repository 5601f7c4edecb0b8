import json

import numpy as np
import pytest

from mpmech import formats
from mpmech.cli import main
from mpmech.sl2c import builtin_pairs


@pytest.fixture
def derived_doc(tmp_path):
    path = tmp_path / "derived.json"
    formats.dump_pair_document(builtin_pairs()["sl2c_derived"], str(path))
    return str(path)


class TestCheck:
    def test_builtin_derived_passes(self, capsys):
        assert main(["check", "sl2c_derived"]) == 0
        out = capsys.readouterr().out
        assert "valid matched pair" in out

    def test_builtin_printed_fails_with_witness(self, capsys):
        assert main(["check", "sl2c_printed"]) == 1
        out = capsys.readouterr().out
        assert "(f3, e1, e2)" in out
        assert "FAIL" in out

    def test_heavytop_passes(self):
        assert main(["check", "e3_heavytop"]) == 0

    def test_document_round_trip(self, derived_doc):
        assert main(["check", derived_doc]) == 0

    def test_truncated_json_is_input_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"g": {"dim": 3')
        assert main(["check", str(bad)]) == 2

    def test_missing_file_is_input_error(self):
        assert main(["check", "/no/such/file.json"]) == 2

    def test_tolerance_scale_env(self, monkeypatch):
        monkeypatch.setenv("MPM_TOLERANCE_SCALE", "1e12")
        assert main(["check", "sl2c_printed"]) == 0


def simulate_args(out_prefix, **overrides):
    args = {
        "--pair": "sl2c_derived",
        "--hamiltonian": "quadratic_identity",
        "--initial": "1,0,0,0,1,0",
        "--dt": "0.001",
        "--t-end": "1",
        "--invariants": "nu_norm2,mu_dot_nu",
        "--seed": "0",
        "--out": out_prefix,
    }
    args.update(overrides)
    argv = ["simulate"]
    for key, value in args.items():
        if value is not None:
            argv += [key, value]
    return argv


class TestSimulate:
    def test_writes_csv_and_summary(self, tmp_path):
        prefix = str(tmp_path / "run")
        assert main(simulate_args(prefix)) == 0
        header = open(prefix + ".csv").readline().strip()
        assert header == "t,mu_1,mu_2,mu_3,nu_1,nu_2,nu_3,H,nu_norm2,mu_dot_nu"
        summary = json.load(open(prefix + ".summary.json"))
        assert summary["steps"] == 1000
        assert summary["drift"]["H"] <= 1e-8

    def test_deterministic_outputs(self, tmp_path):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(simulate_args(a)) == 0
        assert main(simulate_args(b)) == 0
        assert open(a + ".csv", "rb").read() == open(b + ".csv", "rb").read()
        sa = json.load(open(a + ".summary.json"))
        sb = json.load(open(b + ".summary.json"))
        sa.pop("wall_time_s")
        sb.pop("wall_time_s")
        assert sa == sb

    def test_zero_t_end_rejected(self, tmp_path):
        argv = simulate_args(str(tmp_path / "r"), **{"--t-end": "0"})
        assert main(argv) == 2

    def test_unvalidated_pair_fails(self, tmp_path):
        argv = simulate_args(str(tmp_path / "r"), **{"--pair": "sl2c_printed"})
        assert main(argv) == 1

    def test_heavy_top_invariants(self, tmp_path):
        prefix = str(tmp_path / "ht")
        argv = simulate_args(prefix, **{
            "--pair": "e3_heavytop",
            "--hamiltonian": "heavy_top",
            "--initial": "1,0,0,0,1,0",
            "--t-end": "1",
        })
        assert main(argv) == 0
        summary = json.load(open(prefix + ".summary.json"))
        assert summary["drift"]["nu_norm2"] <= 1e-8
        assert summary["drift"]["mu_dot_nu"] <= 1e-8

    def test_ep_mode_runs(self, tmp_path):
        prefix = str(tmp_path / "ep")
        argv = simulate_args(prefix, **{"--mode": "ep", "--t-end": "1"})
        assert main(argv) == 0
        summary = json.load(open(prefix + ".summary.json"))
        assert summary["drift"]["H"] <= 1e-8

    def test_ep_mode_needs_block_quadratic(self, tmp_path):
        argv = simulate_args(str(tmp_path / "r"),
                             **{"--mode": "ep", "--hamiltonian": "heavy_top",
                                "--pair": "e3_heavytop"})
        assert main(argv) == 2

    def test_unknown_invariant_rejected(self, tmp_path):
        argv = simulate_args(str(tmp_path / "r"), **{"--invariants": "bogus"})
        assert main(argv) == 2

    def test_wrong_initial_length_rejected(self, tmp_path):
        argv = simulate_args(str(tmp_path / "r"), **{"--initial": "1,0,0"})
        assert main(argv) == 2

    def test_custom_quadratic_file(self, tmp_path):
        spec = {"Q": np.eye(6).tolist(), "b": [0.0] * 6}
        path = tmp_path / "h.json"
        path.write_text(json.dumps(spec))
        prefix = str(tmp_path / "custom")
        argv = simulate_args(prefix, **{"--hamiltonian": str(path), "--t-end": "0.5"})
        assert main(argv) == 0

    def test_rigid_body_builtin(self, tmp_path):
        prefix = str(tmp_path / "rb")
        argv = simulate_args(prefix, **{
            "--pair": "e3_heavytop",
            "--hamiltonian": "rigid_body_123",
            "--initial": "0,1,1,0,0,0",
            "--t-end": "1",
        })
        assert main(argv) == 0
        summary = json.load(open(prefix + ".summary.json"))
        assert summary["drift"]["H"] <= 1e-8


class TestAudit:
    def test_table_content(self, capsys):
        assert main(["audit", "sl2c", "--samples", "200"]) == 0
        out = capsys.readouterr().out
        for token in ("action |>", "action <|", "dual *<|", "dual *|>",
                      "dual a*", "dual b*", "closed-form rhs (mu)",
                      "plus-sign rhs energy rate"):
            assert token in out
        assert "(f3, e1, e2)" in out

    def test_json_report(self, tmp_path):
        path = tmp_path / "audit.json"
        assert main(["audit", "sl2c", "--samples", "100", "--json", str(path)]) == 0
        doc = json.load(open(path))
        statuses = {line["name"]: line["status"] for line in doc["lines"]}
        assert statuses["action |>"] == "MATCH"
        assert statuses["action <|"] == "MISMATCH"

    def test_unknown_target(self):
        assert main(["audit", "so-what"]) == 2


class TestDeriveAndFactor:
    def test_derive_builtin_round_trip(self, tmp_path):
        doc = tmp_path / "pair.json"
        assert main(["derive", "--builtin", "sl2c", "--out", str(doc)]) == 0
        assert main(["check", str(doc)]) == 0

    def test_derive_from_basis_file(self, tmp_path):
        from mpmech.sl2c import k_basis, su2_basis
        basis_doc = {
            "g": [formats.matrix_to_json(M) for M in su2_basis()],
            "h": [formats.matrix_to_json(M) for M in k_basis()],
            "g_names": ["e1", "e2", "e3"],
            "h_names": ["f1", "f2", "f3"],
        }
        basis_path = tmp_path / "basis.json"
        basis_path.write_text(json.dumps(basis_doc))
        out = tmp_path / "derived.json"
        assert main(["derive", "--basis", str(basis_path), "--out", str(out)]) == 0
        assert main(["check", str(out)]) == 0

    def test_factor_identity(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        path.write_text(json.dumps([[1.0, 0.0], [0.0, 1.0]]))
        assert main(["factor", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["k"] == [0.0, 0.0, 0.0]
        assert doc["su2"][0][0] == [1.0, 0.0]

    def test_factor_rejects_non_unimodular(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps([[2.0, 0.0], [0.0, 1.0]]))
        assert main(["factor", str(path)]) == 2

    def test_missing_subcommand_is_input_error(self):
        assert main([]) == 2
