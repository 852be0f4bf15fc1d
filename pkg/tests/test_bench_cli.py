import json

import pytest

from allproofs import counters
from allproofs.bench import bench_fc, bench_vc, environment, vc_batch_sizes
from allproofs.cli import main
from allproofs.curve import SCALAR_ORDER as P
from allproofs.fc import fc_proof_size
from allproofs.vc import vc_commit, vc_open_all, vc_setup

REPORT_SCHEMA = {
    "type": "object",
    "required": ["config", "rows", "counters", "env"],
    "properties": {
        "config": {"type": "object"},
        "rows": {"type": "array", "items": {"type": "object"}},
        "counters": {"type": "array", "items": {"type": "object"}},
        "env": {
            "type": "object",
            "required": ["git_revision", "curve", "widths", "python", "platform"],
        },
    },
}


class TestBenchReports:
    def test_fc_report_shape_and_sizes(self, ctx):
        report = bench_fc([16, 64], [1, 2], reps=1, seed=0)
        data = report.to_dict()
        assert set(data) == {"config", "rows", "counters", "env"}
        for row in data["rows"]:
            assert row["proof_size_bytes"] == fc_proof_size(row["n"])
            assert row["bopen_s"] > 0 and row["bverify_s"] > 0
        labels = [c["label"] for c in data["counters"]]
        assert any("fc_bopen" in label for label in labels)
        assert report.env["curve"] == "bn254"
        assert report.env["widths"] == {"s1": 32, "s2": 64, "st": 384}

    def test_fc_report_json_and_table(self):
        report = bench_fc([16], [1], reps=1, seed=0)
        parsed = json.loads(report.to_json())
        assert parsed["config"]["kind"] == "fc"
        table = report.to_table()
        assert "proof_size_bytes" in table.splitlines()[0]

    def test_vc_report_rows(self):
        report = bench_vc([64], [2, 4], reps=1, seed=0)
        rows = report.to_dict()["rows"]
        assert [r["b"] for r in rows] == [2, 4]
        for row in rows:
            assert row["proof_size_with_block"] > row["proof_size_without_block"]
            assert row["verify_one_e2e_s"] >= 0 and row["open_all_s"] > 0

    def test_vc_reference_only_at_published_sizes(self):
        report = bench_vc([64], [2], reps=1, seed=0)
        assert "reference" not in report.config

    def test_default_batch_sizes(self):
        assert vc_batch_sizes(1 << 12) == [24, 64]
        assert vc_batch_sizes(1 << 16) == [32, 256]
        assert vc_batch_sizes(4) == [2]  # capped to mu

    def test_schema_validates(self):
        jsonschema = pytest.importorskip("jsonschema")
        report = bench_fc([16], [1], reps=1, seed=0)
        jsonschema.validate(report.to_dict(), REPORT_SCHEMA)

    def test_environment_fields(self):
        env = environment()
        assert env["curve"] == "bn254"
        assert env["widths"]["st"] == 384


class TestCounters:
    def test_open_all_ops_decrease_with_larger_batch(self, ctx):
        # doubling b lowers pairings + exponentiations
        totals = {}
        values = [i + 1 for i in range(256)]
        for b in (2, 4, 8):
            pp = vc_setup(ctx, 256, b, seed=1)
            _, aux = vc_commit(pp, values)
            with counters.counting() as c:
                vc_open_all(pp, aux, values)
                snap = c.snapshot()
            totals[b] = sum(v for k, v in snap.items() if k != "field_ops")
        assert totals[8] < totals[4] < totals[2]

    def test_verify_ops_increase_with_larger_batch(self, ctx):
        # the verification-side cost of the batch-size tradeoff: a larger
        # block means more claims folded into one verification
        values = [i + 1 for i in range(256)]
        totals = {}
        for b in (2, 8):
            pp = vc_setup(ctx, 256, b, seed=1)
            commitment, aux = vc_commit(pp, values)
            opening = vc_open_all(pp, aux, values)[0]
            from allproofs.vc import vc_verify

            with counters.counting() as c:
                assert vc_verify(pp, commitment, 0, values[0], opening)
                snap = c.snapshot()
            totals[b] = sum(v for k, v in snap.items() if k != "field_ops")
        assert totals[2] < totals[8]

    def test_counting_disabled_outside_context(self, ctx):
        counters.record("pairings", 5)
        with counters.counting() as c:
            ctx.pairing(ctx.g1, ctx.g2)
            assert c.snapshot()["pairings"] == 1
        assert not counters.enabled()


@pytest.fixture
def workspace(tmp_path):
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


class TestCliWorkflows:
    def test_full_flow(self, workspace):
        params = workspace / "params.bin"
        data = workspace / "data.json"
        commitment = workspace / "commit.bin"
        aux = workspace / "aux.bin"
        proofs = workspace / "proofs.bin"
        opening = workspace / "op.bin"

        assert run("setup", "--big-n", 16, "--batch", 2, "--out", params, "--seed", 5) == 0
        assert run(
            "commit", "--params", params, "--random", "--seed", 9,
            "--data-out", data, "--out", commitment, "--aux-out", aux,
        ) == 0
        assert run(
            "open-all", "--params", params, "--aux", aux, "--data", data, "--out", proofs
        ) == 0
        assert run(
            "open", "--params", params, "--proofs", proofs, "--index", 3, "--out", opening
        ) == 0
        value = json.loads(data.read_text())[3]
        assert run(
            "verify", "--params", params, "--commitment", commitment,
            "--index", 3, "--value", value, "--opening", opening,
        ) == 0
        assert run(
            "verify", "--params", params, "--commitment", commitment,
            "--index", 3, "--value", (value + 1) % P, "--opening", opening,
        ) == 1

    def test_eval_flow(self, workspace):
        params = workspace / "params.bin"
        data = workspace / "data.json"
        commitment = workspace / "commit.bin"
        aux = workspace / "aux.bin"
        point = workspace / "point.json"
        proof = workspace / "eval.bin"

        run("setup", "--big-n", 16, "--batch", 2, "--out", params, "--seed", 5)
        run("commit", "--params", params, "--random", "--seed", 9,
            "--data-out", data, "--out", commitment, "--aux-out", aux)
        point.write_text(json.dumps([3, 1, 4, 1]))
        assert run(
            "prove-eval", "--params", params, "--aux", aux, "--point", point, "--out", proof
        ) == 0
        assert run(
            "verify-eval", "--params", params, "--commitment", commitment,
            "--point", point, "--proof", proof,
        ) == 0

    def test_setup_is_deterministic_per_seed(self, workspace):
        out1, out2 = workspace / "p1.bin", workspace / "p2.bin"
        run("setup", "--big-n", 16, "--batch", 2, "--out", out1, "--seed", 3)
        run("setup", "--big-n", 16, "--batch", 2, "--out", out2, "--seed", 3)
        assert out1.read_bytes() == out2.read_bytes()

    def test_seeded_setup_prints_warning(self, workspace, capsys):
        run("setup", "--big-n", 4, "--batch", 1, "--out", workspace / "p.bin", "--seed", 1)
        assert "WARNING" in capsys.readouterr().out

    def test_corrupted_magic_is_structured_error(self, workspace):
        params = workspace / "params.bin"
        run("setup", "--big-n", 4, "--batch", 1, "--out", params, "--seed", 1)
        blob = bytearray(params.read_bytes())
        blob[:8] = b"XXXXXXXX"
        params.write_bytes(bytes(blob))
        from allproofs.wire import WireError

        with pytest.raises(WireError, match="magic"):
            run("commit", "--params", params, "--random", "--seed", 1,
                "--data-out", workspace / "d.json",
                "--out", workspace / "c.bin", "--aux-out", workspace / "a.bin")

    def test_threaded_open_all_matches_single_thread(self, workspace):
        params = workspace / "params.bin"
        data = workspace / "data.json"
        run("setup", "--big-n", 64, "--batch", 2, "--out", params, "--seed", 4)
        run("commit", "--params", params, "--random", "--seed", 4,
            "--data-out", data, "--out", workspace / "c.bin",
            "--aux-out", workspace / "a.bin")
        run("open-all", "--params", params, "--aux", workspace / "a.bin",
            "--data", data, "--out", workspace / "p1.bin", "--threads", 1)
        run("open-all", "--params", params, "--aux", workspace / "a.bin",
            "--data", data, "--out", workspace / "p8.bin", "--threads", 8)
        assert (workspace / "p1.bin").read_bytes() == (workspace / "p8.bin").read_bytes()

    def test_bench_fc_json_output(self, workspace, capsys):
        assert run("bench-fc", "--n", "16", "--t", "1", "--reps", 1,
                   "--seed", 0, "--format", "json") == 0
        parsed = json.loads(capsys.readouterr().out)
        assert parsed["rows"][0]["proof_size_bytes"] == fc_proof_size(16)

    def test_selftest_json_schema(self, capsys):
        jsonschema = pytest.importorskip("jsonschema")
        assert run("selftest", "--seed", 0, "--format", "json") == 0
        parsed = json.loads(capsys.readouterr().out)
        jsonschema.validate(parsed, REPORT_SCHEMA)
        assert all(row["passed"] for row in parsed["rows"])

    def test_selftest_mutation_detected(self, capsys):
        # deliberately broken verifier fold must surface as failures
        assert run("selftest", "--seed", 0, "--mutate") == 1
        out = capsys.readouterr().out
        assert "FAIL" in out
        import allproofs.fc as fc_mod

        assert fc_mod._BREAK_FOLD_UPDATE is False  # hook restored
