import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

import oaforge.tables
from oaforge import OrthogonalArray, from_text, write_array
from oaforge.cli import main
from external_arrays import oa_80_6_2_4


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)


def test_generate_rao_hamming(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        res = invoke(runner, "generate", "rao-hamming", "--s", 2, "--n", 3)
        assert res.exit_code == 0, res.output
        assert "OA(8,7,2,2)" in res.output
        assert Path("8_7_2_2.oa.txt").exists()
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert len(entries) == 1
        assert entries[0]["verified_strength"] == 2
        assert entries[0]["index"] == 2
        assert entries[0]["linear"] == "yes"


def test_generate_bush_and_hadamard_kinds(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        assert invoke(runner, "generate", "bush", "--s", 3, "--t", 2).exit_code == 0
        assert Path("9_4_3_2.oa.txt").exists()
        assert invoke(runner, "generate", "bush-even", "--s", 4).exit_code == 0
        assert Path("64_6_4_3.oa.txt").exists()
        assert invoke(runner, "generate", "hadamard-oa3", "--order", 12).exit_code == 0
        assert Path("24_12_2_3.oa.txt").exists()
        assert invoke(runner, "generate", "hadamard-oa2", "--order", 16).exit_code == 0
        assert Path("16_15_2_2.oa.txt").exists()
        res = invoke(runner, "generate", "sylvester", "--order", 8)
        assert res.exit_code == 0
        assert Path("8_8_2_0.oa.txt").exists()
        res = invoke(runner, "generate", "paley", "--q", 11)
        assert res.exit_code == 0
        assert Path("12_12_2_0.oa.txt").exists()
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert len(entries) == 6


def test_generate_parameter_errors(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        assert invoke(runner, "generate", "rao-hamming", "--s", 2).exit_code == 2
        assert invoke(runner, "generate", "rao-hamming", "--s", 6, "--n", 2).exit_code == 2
        assert invoke(runner, "generate", "bush", "--s", 3, "--t", 9).exit_code == 2
        assert invoke(runner, "generate", "paley", "--q", 13).exit_code == 2
        assert invoke(runner, "generate", "sylvester", "--order", 12).exit_code == 2
        assert invoke(runner, "generate", "hadamard-oa2", "--order", 36).exit_code == 2


def test_extend_and_verify_flow(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "rao-hamming", "--s", 2, "--n", 2)
        res = invoke(runner, "extend", "4_3_2_2.oa.txt")
        assert res.exit_code == 0, res.output
        assert "OA(16,15,2,2)" in res.output
        res = invoke(runner, "verify", "16_15_2_2.oa.txt")
        assert res.exit_code == 0
        assert "index 4" in res.output
        res = invoke(runner, "verify", "16_15_2_2.oa.txt", "--t", 3)
        assert res.exit_code == 1
        assert "FAILED" in res.output


def test_verify_exit_codes_on_bad_input(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        Path("bad.oa.txt").write_text("not a header\n")
        assert invoke(runner, "verify", "bad.oa.txt").exit_code == 2
        assert invoke(runner, "verify", "missing.oa.txt").exit_code == 2
        Path("wrong.oa.txt").write_text("2 2 2 1\n0 1\n0 1\n")
        assert invoke(runner, "verify", "wrong.oa.txt").exit_code == 1


def test_extend_linearity_refusal_and_force(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "bush-even", "--s", 2)
        seed = from_text(Path("8_4_2_3.oa.txt").read_text())
        # a shifted strength-3 seed is no longer linear
        shifted = OrthogonalArray(
            (seed.matrix.astype(int) + np.array([1, 0, 0, 0])) % 2, 2, 3
        )
        write_array(shifted, Path("shifted.oa.txt"))
        res = invoke(runner, "extend", "shifted.oa.txt")
        assert res.exit_code == 3
        assert "--force" in res.output
        # forcing runs the construction, but squared arrays cannot keep
        # strength 3, so verification fails
        res = invoke(runner, "extend", "shifted.oa.txt", "--force")
        assert res.exit_code == 1
        # --no-verify skips both checks and writes the file
        res = invoke(runner, "extend", "shifted.oa.txt", "--force", "--no-verify")
        assert res.exit_code == 0
        assert Path("64_24_2_3.oa.txt").exists()


def test_extend_permute_col(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "rao-hamming", "--s", 2, "--n", 2)
        res = invoke(
            runner, "extend", "4_3_2_2.oa.txt", "--permute-col", 0, "--alpha", 1,
            "--out", "nl.oa.txt",
        )
        assert res.exit_code == 0, res.output
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert entries[-1]["linear"] == "no"
        assert entries[-1]["lineage"].startswith("extend(")
        res = invoke(runner, "extend", "4_3_2_2.oa.txt", "--permute-col", 0)
        assert res.exit_code == 2  # --alpha required
        res = invoke(
            runner, "extend", "4_3_2_2.oa.txt", "--permute-col", 0, "--alpha", 0
        )
        assert res.exit_code == 2


def test_columns_restriction(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "rao-hamming", "--s", 2, "--n", 3)
        res = invoke(
            runner, "columns", "8_7_2_2.oa.txt", "--keep", "0,1,2,3,4",
            "--out", "seed.oa.txt",
        )
        assert res.exit_code == 0
        assert "OA(8,5,2,2)" in res.output
        # keeping every column in order reproduces the file byte for byte
        res = invoke(
            runner, "columns", "8_7_2_2.oa.txt", "--keep", "0,1,2,3,4,5,6",
            "--out", "copy.oa.txt",
        )
        assert res.exit_code == 0
        assert Path("copy.oa.txt").read_bytes() == Path("8_7_2_2.oa.txt").read_bytes()
        # single column keeps strength min(t, 1)
        res = invoke(
            runner, "columns", "8_7_2_2.oa.txt", "--keep", "3", "--out", "one.oa.txt"
        )
        assert res.exit_code == 0
        assert from_text(Path("one.oa.txt").read_text()).strength == 1
        assert invoke(
            runner, "columns", "8_7_2_2.oa.txt", "--keep", "0,9", "--out", "x"
        ).exit_code == 2
        assert invoke(
            runner, "columns", "8_7_2_2.oa.txt", "--keep", "0,0", "--out", "x"
        ).exit_code == 2


def test_export_round_trip_and_csv(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "rao-hamming", "--s", 2, "--n", 2)
        src = Path("4_3_2_2.oa.txt")
        res = invoke(runner, "export", src, "--format", "txt", "--out", "again.txt")
        assert res.exit_code == 0
        assert Path("again.txt").read_bytes() == src.read_bytes()
        res = invoke(runner, "export", src, "--format", "csv")
        assert res.exit_code == 0
        assert res.output.startswith("c1,c2,c3\n")


def test_import_external_array(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        write_array(OrthogonalArray(oa_80_6_2_4(), 2, 4), Path("ext.oa.txt"))
        res = invoke(runner, "import", "ext.oa.txt")
        assert res.exit_code == 0
        assert "index 5" in res.output
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert entries[0]["runs"] == 80 and entries[0]["verified_strength"] == 4
        assert entries[0]["linear"] == "no"

        # symbol out of range: named row and column, exit 2
        Path("bad.oa.txt").write_text("2 2 2 1\n0 1\n0 7\n")
        res = invoke(runner, "import", "bad.oa.txt")
        assert res.exit_code == 2
        assert "row 1" in res.output and "column 1" in res.output

        # claimed strength that fails counting: exit 1
        Path("over.oa.txt").write_text("4 2 2 2\n0 0\n0 1\n1 0\n0 1\n")
        assert invoke(runner, "import", "over.oa.txt").exit_code == 1


def test_import_non_prime_power_levels(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        rows = [[(r + c) % 6 for c in range(2)] for r in range(6)]
        write_array(OrthogonalArray(np.array(rows), 6, 1), Path("s6.oa.txt"))
        res = invoke(runner, "import", "s6.oa.txt")
        assert res.exit_code == 0
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert entries[0]["linear"] == "not-applicable"


def test_generated_files_are_deterministic(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "bush", "--s", 4, "--t", 2, "--out", "a.txt")
        invoke(runner, "generate", "bush", "--s", 4, "--t", 2, "--out", "b.txt")
        assert Path("a.txt").read_bytes() == Path("b.txt").read_bytes()
        entries = json.loads(Path("catalog.json").read_text())["entries"]
        assert entries[0]["id"] == entries[1]["id"]


def test_catalog_check(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path):
        invoke(runner, "generate", "rao-hamming", "--s", 3, "--n", 2)
        invoke(runner, "generate", "bush", "--s", 2, "--t", 2)
        res = invoke(runner, "catalog", "check")
        assert res.exit_code == 0, res.output
        assert "all 2 entries check out" in res.output
        # corrupt one file: hash mismatch must fail the check
        path = Path("9_4_3_2.oa.txt")
        path.write_text(path.read_text().replace("0 0 0 0", "0 0 0 1", 1))
        res = invoke(runner, "catalog", "check")
        assert res.exit_code == 1
        assert "HASH-MISMATCH" in res.output


def test_reproduce_tables_cli(runner, tmp_path, monkeypatch):
    rows = tuple(
        r for r in oaforge.tables.TABLE_ROWS if (r.table, r.row) in
        {(1, 1), (4, 3), (5, 1)}
    )
    monkeypatch.setattr(oaforge.tables, "TABLE_ROWS", rows)
    with runner.isolated_filesystem(temp_dir=tmp_path):
        res = invoke(runner, "reproduce-tables", "--json", "report.json")
        assert res.exit_code == 0, res.output
        assert "PAPER-DISCREPANCY" in res.output
        assert "seed-unavailable" in res.output
        payload = json.loads(Path("report.json").read_text())
        assert len(payload["rows"]) == 3
        by_key = {(r["table"], r["row"]): r for r in payload["rows"]}
        assert by_key[(1, 1)]["status"] == "match"
        assert by_key[(1, 1)]["verified"] is True
        assert by_key[(4, 3)]["status"] == "PAPER-DISCREPANCY"


def test_seed_dir_env_variable(runner, tmp_path, monkeypatch):
    rows = tuple(
        r for r in oaforge.tables.TABLE_ROWS if (r.table, r.row) == (3, 1)
    )
    monkeypatch.setattr(oaforge.tables, "TABLE_ROWS", rows)
    seeds = tmp_path / "seeds"
    seeds.mkdir()
    write_array(OrthogonalArray(oa_80_6_2_4(), 2, 4), seeds / "80_6_2_4.oa.txt")
    monkeypatch.setenv("OA_FORGE_SEED_DIR", str(seeds))
    with runner.isolated_filesystem(temp_dir=tmp_path):
        res = invoke(
            runner, "reproduce-tables", "--max-cost", 1e6, "--json", "report.json"
        )
        assert res.exit_code == 0, res.output
        payload = json.loads(Path("report.json").read_text())
        row = payload["rows"][0]
        assert row["verification"] == "sampled"
        assert row["verified"] is False  # strength 4 cannot survive squaring
