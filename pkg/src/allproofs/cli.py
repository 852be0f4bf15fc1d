"""Command-line harness: setup/commit/open/verify workflows plus benchmarks.

Subcommands: setup, commit, open-all, open, verify, prove-eval,
verify-eval, bench-fc, bench-vc, selftest. All reports share one JSON
schema: {"config": {...}, "rows": [...], "counters": [...], "env": {...}}.

Vectors and evaluation points are JSON arrays of integers; commitments,
parameters, proofs and openings are binary files in the package's wire
formats.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fc as fc_mod
from . import parallel
from .bench import BenchReport, bench_fc, bench_vc, environment
from .curve import SCALAR_ORDER as P, default_ctx
from .transcript import scalar_stream
from .vc import (
    VcCommitment,
    VcOpening,
    load_aux,
    load_params,
    save_aux,
    save_params,
    vc_commit,
    vc_open_all,
    vc_setup,
    vc_verify,
)
from .evalproof import MleEvalProof, prove_mle_eval, verify_mle_eval
from .wire import Reader, u32, u64


def _int_list(text: str) -> list[int]:
    return [int(part, 0) for part in text.split(",") if part]


def _load_vector(path: str) -> list[int]:
    values = json.loads(Path(path).read_text())
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise SystemExit(f"{path}: expected a JSON array of integers")
    return [v % P for v in values]


def _read_params(path: str):
    return load_params(Path(path).read_bytes(), default_ctx())


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)


def _emit_report(report: BenchReport, args) -> None:
    text = report.to_json() if args.format == "json" else report.to_table()
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(f"report written to {args.out}")
    else:
        print(text)


def cmd_setup(args) -> int:
    pp = vc_setup(default_ctx(), args.big_n, args.batch, seed=args.seed)
    _write(args.out, save_params(pp))
    print(f"parameters for N={args.big_n}, mu={pp.mu}, nu={pp.nu}, b={pp.b} -> {args.out}")
    if args.seed is not None:
        print(
            "WARNING: seeded setup retains a recoverable trapdoor; "
            "use seeded parameters for tests and benchmarks only."
        )
    return 0


def cmd_commit(args) -> int:
    pp = _read_params(args.params)
    if args.random:
        stream = scalar_stream(args.seed or 0, b"cli-data")
        values = [next(stream) for _ in range(pp.n_total)]
        if not args.data_out:
            raise SystemExit("--random requires --data-out to persist the vector")
        Path(args.data_out).write_text(json.dumps(values))
    else:
        if not args.data:
            raise SystemExit("either --data or --random is required")
        values = _load_vector(args.data)
    commitment, aux = vc_commit(pp, values)
    _write(args.out, commitment.to_bytes())
    _write(args.aux_out, save_aux(pp, aux))
    print(f"commitment -> {args.out}; auxiliary state -> {args.aux_out}")
    return 0


def cmd_open_all(args) -> int:
    pp = _read_params(args.params)
    values = _load_vector(args.data)
    aux = load_aux(Path(args.aux).read_bytes(), pp)
    openings = vc_open_all(pp, aux, values)
    blobs = [o.to_bytes() for o in openings]
    out = [u64(len(blobs))]
    for blob in blobs:
        out.append(u32(len(blob)))
        out.append(blob)
    _write(args.out, b"".join(out))
    print(f"{len(blobs)} openings -> {args.out}")
    return 0


def cmd_open(args) -> int:
    pp = _read_params(args.params)
    reader = Reader(Path(args.proofs).read_bytes())
    count = reader.u64()
    if not 0 <= args.index < count:
        raise SystemExit(f"index {args.index} out of range [0, {count})")
    blob = b""
    for _ in range(args.index + 1):
        blob = reader.take(reader.u32())
    VcOpening.from_bytes(blob, pp)  # validate before writing
    _write(args.out, blob)
    print(f"opening {args.index} -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    pp = _read_params(args.params)
    commitment = VcCommitment.from_bytes(Path(args.commitment).read_bytes())
    opening = VcOpening.from_bytes(Path(args.opening).read_bytes(), pp)
    ok = vc_verify(pp, commitment, args.index, args.value % P, opening)
    print("accept" if ok else "reject")
    return 0 if ok else 1


def cmd_prove_eval(args) -> int:
    pp = _read_params(args.params)
    aux = load_aux(Path(args.aux).read_bytes(), pp)
    point = _load_vector(args.point)
    proof = prove_mle_eval(pp, aux, point)
    _write(args.out, proof.to_bytes())
    print(f"evaluation proof (value={proof.value}) -> {args.out}")
    return 0


def cmd_verify_eval(args) -> int:
    pp = _read_params(args.params)
    commitment = VcCommitment.from_bytes(Path(args.commitment).read_bytes())
    point = _load_vector(args.point)
    proof = MleEvalProof.from_bytes(Path(args.proof).read_bytes(), pp)
    ok = verify_mle_eval(pp, commitment, point, proof, value=args.value)
    print("accept" if ok else "reject")
    return 0 if ok else 1


def cmd_bench_fc(args) -> int:
    report = bench_fc(args.n, args.t, reps=args.reps, seed=args.seed or 0)
    _emit_report(report, args)
    return 0


def cmd_bench_vc(args) -> int:
    report = bench_vc(args.big_n, args.batch, reps=args.reps, seed=args.seed or 0)
    _emit_report(report, args)
    return 0


# ---------------------------------------------------------------------------
# self-test


def _selftest_checks(seed: int):
    import random

    from .algebra import (
        GroupVec,
        MultilinearPoly,
        bits,
        mle_eval,
        multi_exp,
        pairing_prod,
    )
    from .curve import G1Element
    from .fc import (
        fc_bopen,
        fc_bopen_units,
        fc_bverify,
        fc_bverify_units,
        fc_commit,
        fc_proof_size,
        fc_setup,
    )
    from .pc import pc_commit, pc_eval, pc_hyper_eval, pc_setup, pc_verify
    from .transcript import MerkleTree, Transcript, merkle_verify
    from .vc import (
        VcOpening,
        load_params,
        save_params,
        vc_open,
        vc_open_subarrays,
        vc_verify_subarray,
    )
    from .wire import WireError
    from .evalproof import eq_weights

    ctx = default_ctx()
    rng = random.Random(seed)
    g1, g2, gt = ctx.g1, ctx.g2, ctx.gt

    def algebra_identities() -> bool:
        a, b = rng.randrange(1, 999), rng.randrange(1, 999)
        if ctx.pairing(g1 ** a, g2 ** b) != gt ** (a * b):
            return False
        vec = GroupVec.from_elements([g1 ** 2, g1 ** 3])
        if multi_exp(vec, [5, 7]) != g1 ** 31:
            return False
        f = MultilinearPoly.from_vector([rng.randrange(P) for _ in range(16)])
        x = [rng.randrange(P) for _ in range(4)]
        brute = sum(
            f.table[i]
            * _eq_term(i, x)
            for i in range(16)
        ) % P
        return mle_eval(f, x) == brute

    def _eq_term(i: int, x) -> int:
        out = 1
        k = len(x)
        for a in range(k):
            bit = (i >> a) & 1
            coord = x[k - 1 - a] % P
            out = out * ((bit * coord + (1 - bit) * (1 - coord)) % P) % P
        return out

    def transcript_merkle() -> bool:
        t1, t2 = Transcript(b"check"), Transcript(b"check")
        t1.absorb(b"m", b"payload")
        t2.absorb(b"m", b"payload")
        if t1.challenge_scalar(b"c") != t2.challenge_scalar(b"c"):
            return False
        t3 = Transcript(b"check")
        t3.absorb(b"m", b"payloae")  # one bit off
        if t3.challenge_scalar(b"c") == t1.challenge_scalar(b"c"):
            return False
        leaves = [bytes([i]) * 8 for i in range(5)]
        tree = MerkleTree(leaves)
        ok = all(
            merkle_verify(tree.root, i, leaves[i], tree.path(i)) for i in range(5)
        )
        bad = merkle_verify(tree.root, 2, b"tampered", tree.path(2))
        return ok and not bad

    def fc_correctness() -> bool:
        for n in (1, 2, 4, 8, 16):
            pp = fc_setup(ctx, n, seed=seed + n)
            vec = GroupVec.fixed_base(g1, [rng.randrange(1, P) for _ in range(n)])
            commitment = fc_commit(pp, vec)
            for t in (1, 2, 5):
                bs = [[rng.randrange(P) for _ in range(n)] for _ in range(t)]
                ys = [multi_exp(vec, b) for b in bs]
                proof = fc_bopen(pp, commitment, vec, bs, ys)
                if not fc_bverify(pp, commitment, bs, ys, proof):
                    return False
                wrong = list(ys)
                wrong[0] = wrong[0] * g1
                if fc_bverify(pp, commitment, bs, wrong, proof):
                    return False
        return True

    def fc_sizes() -> bool:
        for n in (4, 16, 64):
            pp = fc_setup(ctx, n, seed=seed)
            vec = GroupVec.fixed_base(g1, [rng.randrange(1, P) for _ in range(n)])
            commitment = fc_commit(pp, vec)
            sizes = set()
            for t in (1, 3):
                bs = [[rng.randrange(P) for _ in range(n)] for _ in range(t)]
                ys = [multi_exp(vec, b) for b in bs]
                proof = fc_bopen(pp, commitment, vec, bs, ys)
                sizes.add(len(proof.to_bytes()))
            if sizes != {fc_proof_size(n)}:
                return False
        return True

    def fc_units() -> bool:
        for n in (8, 16):
            pp = fc_setup(ctx, n, seed=seed + n)
            vec = GroupVec.fixed_base(g1, [rng.randrange(1, P) for _ in range(n)])
            commitment = fc_commit(pp, vec)
            idx = rng.sample(range(n), 3)
            ys = [vec[i] for i in idx]
            fast = fc_bopen_units(pp, commitment, vec, idx, ys)
            dense = [[1 if j == i else 0 for j in range(n)] for i in idx]
            general = fc_bopen(pp, commitment, vec, dense, ys)
            if fast.to_bytes() != general.to_bytes():
                return False
            if not fc_bverify_units(pp, commitment, idx, ys, fast):
                return False
            if fc_bverify_units(pp, commitment, idx, [y * g1 for y in ys], fast):
                return False
        return True

    def fc_tamper() -> bool:
        n = 8
        pp = fc_setup(ctx, n, seed=seed)
        vec = GroupVec.fixed_base(g1, [rng.randrange(1, P) for _ in range(n)])
        commitment = fc_commit(pp, vec)
        bs = [[rng.randrange(P) for _ in range(n)]]
        ys = [multi_exp(vec, bs[0])]
        proof = fc_bopen(pp, commitment, vec, bs, ys)
        blob = bytearray(proof.to_bytes())
        for _ in range(10):
            pos = rng.randrange(len(blob) * 8)
            blob[pos // 8] ^= 1 << (pos % 8)
            try:
                bad = type(proof).from_bytes(bytes(blob), pp.ell)
            except Exception:
                blob[pos // 8] ^= 1 << (pos % 8)
                continue
            if fc_bverify(pp, commitment, bs, ys, bad):
                return False
            blob[pos // 8] ^= 1 << (pos % 8)
        return True

    def pc_roundtrip() -> bool:
        for k in range(5):
            pp = pc_setup(ctx, k, seed=seed + k)
            f = MultilinearPoly(tuple(rng.randrange(P) for _ in range(1 << k)), k)
            commitment = pc_commit(pp, f)
            point = [rng.randrange(P) for _ in range(k)]
            y, proof = pc_eval(pp, f, point)
            if y != mle_eval(f, point):
                return False
            if not pc_verify(pp, commitment, point, y, proof):
                return False
            if pc_verify(pp, commitment, point, (y + 1) % P, proof):
                return False
        return True

    def pc_hyper() -> bool:
        for k in (1, 3, 4):
            pp = pc_setup(ctx, k, seed=seed + k)
            f = MultilinearPoly(tuple(rng.randrange(P) for _ in range(1 << k)), k)
            commitment = pc_commit(pp, f)
            for i, (y, proof) in enumerate(pc_hyper_eval(pp, f)):
                point = bits(i, k)
                y2, p2 = pc_eval(pp, f, point)
                if (y, proof) != (y2, p2) or y != f.table[i]:
                    return False
                if not pc_verify(pp, commitment, point, y, proof):
                    return False
        return True

    def vc_end_to_end() -> bool:
        for n_total, b in ((4, 1), (16, 2), (64, 2)):
            pp = vc_setup(ctx, n_total, b, seed=seed + n_total)
            values = [rng.randrange(P) for _ in range(n_total)]
            commitment, aux = vc_commit(pp, values)
            openings = vc_open_all(pp, aux, values, check_fold=(n_total == 16))
            if not all(
                vc_verify(pp, commitment, i, values[i], openings[i])
                for i in range(n_total)
            ):
                return False
        pp = vc_setup(ctx, 256, 4, seed=seed)
        values = [rng.randrange(P) for _ in range(256)]
        commitment, aux = vc_commit(pp, values)
        openings = vc_open_all(pp, aux, values)
        probe = rng.sample(range(256), 12)
        return all(vc_verify(pp, commitment, i, values[i], openings[i]) for i in probe)

    def vc_binding() -> bool:
        pp = vc_setup(ctx, 16, 2, seed=seed)
        values = [rng.randrange(P) for _ in range(16)]
        commitment, aux = vc_commit(pp, values)
        openings = vc_open_all(pp, aux, values)
        if vc_verify(pp, commitment, 5, (values[5] + 1) % P, openings[5]):
            return False
        o = openings[5]
        swapped = VcOpening(
            o.index, o.block, o.fc_proof, o.root, o.path, o.f_digest,
            (o.records[1], o.records[0]), o.pc_proof,
        )
        return not vc_verify(pp, commitment, 5, values[5], swapped)

    def vc_determinism() -> bool:
        pp = vc_setup(ctx, 64, 3, seed=seed)
        values = [rng.randrange(P) for _ in range(64)]
        _, aux = vc_commit(pp, values)
        first = [o.to_bytes() for o in vc_open_all(pp, aux, values)]
        second = [o.to_bytes() for o in vc_open_all(pp, aux, values)]
        return first == second

    def vc_subarrays() -> bool:
        pp = vc_setup(ctx, 16, 2, seed=seed)
        values = [rng.randrange(P) for _ in range(16)]
        commitment, aux = vc_commit(pp, values)
        for m_count in (2, 4):
            width = 16 // m_count
            subs = vc_open_subarrays(pp, aux, m_count)
            for j in range(m_count):
                part = values[j * width : (j + 1) * width]
                if not vc_verify_subarray(pp, commitment, j, part, subs[j]):
                    return False
                wrong = list(part)
                wrong[0] = (wrong[0] + 1) % P
                if vc_verify_subarray(pp, commitment, j, wrong, subs[j]):
                    return False
        return True

    def eval_proofs() -> bool:
        pp = vc_setup(ctx, 16, 2, seed=seed)
        values = [rng.randrange(P) for _ in range(16)]
        commitment, aux = vc_commit(pp, values)
        f_m = MultilinearPoly.from_vector(values)
        i = rng.randrange(16)
        proof = prove_mle_eval(pp, aux, bits(i, 4))
        if proof.value != values[i] or not verify_mle_eval(pp, commitment, bits(i, 4), proof):
            return False
        point = [rng.randrange(P) for _ in range(4)]
        proof = prove_mle_eval(pp, aux, point)
        if proof.value != mle_eval(f_m, point):
            return False
        if not verify_mle_eval(pp, commitment, point, proof):
            return False
        if verify_mle_eval(pp, commitment, point, proof, value=(proof.value + 1) % P):
            return False
        big = [rng.randrange(P) for _ in range(64)]
        f_big = MultilinearPoly.from_vector(big)
        polys = [MultilinearPoly.from_vector(big[j * 8 : (j + 1) * 8]) for j in range(8)]
        for _ in range(10):
            x = [rng.randrange(P) for _ in range(6)]
            total = sum(
                w * mle_eval(fj, x[3:]) for w, fj in zip(eq_weights(x[:3]), polys)
            ) % P
            if total != mle_eval(f_big, x):
                return False
        return True

    def params_io() -> bool:
        pp = vc_setup(ctx, 16, 2, seed=seed)
        blob = save_params(pp)
        if save_params(load_params(blob, ctx)) != blob:
            return False
        try:
            load_params(b"BADMAGIC" + blob[8:], ctx)
            return False
        except WireError:
            return True

    return [
        ("algebra-identities", algebra_identities),
        ("transcript-merkle", transcript_merkle),
        ("fc-correctness", fc_correctness),
        ("fc-proof-size", fc_sizes),
        ("fc-units-equivalence", fc_units),
        ("fc-tamper", fc_tamper),
        ("pc-roundtrip", pc_roundtrip),
        ("pc-hyper-equivalence", pc_hyper),
        ("vc-end-to-end", vc_end_to_end),
        ("vc-binding", vc_binding),
        ("vc-determinism", vc_determinism),
        ("vc-subarrays", vc_subarrays),
        ("eval-proofs", eval_proofs),
        ("params-io", params_io),
    ]


def cmd_selftest(args) -> int:
    if args.mutate:
        fc_mod._BREAK_FOLD_UPDATE = True
        print("mutation hook enabled: the verifier fold update is deliberately broken")
    try:
        rows = []
        for name, check in _selftest_checks(args.seed or 0):
            try:
                passed = bool(check())
            except Exception as exc:  # a crash is a failure, not an abort
                passed = False
                if args.format == "table":
                    print(f"  ({name} raised {type(exc).__name__}: {exc})")
            rows.append({"check": name, "passed": passed})
        report = BenchReport(
            config={"kind": "selftest", "seed": args.seed or 0, "mutate": args.mutate},
            rows=rows,
            env=environment(),
        )
        if args.format == "json":
            print(report.to_json())
        else:
            width = max(len(r["check"]) for r in rows)
            for r in rows:
                print(f"{r['check'].ljust(width)}  {'PASS' if r['passed'] else 'FAIL'}")
        failed = [r["check"] for r in rows if not r["passed"]]
        if failed and args.format == "table":
            print(f"{len(failed)} of {len(rows)} checks failed: {', '.join(failed)}")
        return 1 if failed else 0
    finally:
        fc_mod._BREAK_FOLD_UPDATE = False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="allproofs",
        description="Vector commitments with batch openings and linear-time OpenAll",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def positive(text: str) -> int:
        value = int(text)
        if value < 1:
            raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
        return value

    def common(p, threads=True, seed=True):
        if threads:
            p.add_argument("--threads", type=positive, default=1, help="worker threads for batch proving")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="deterministic seed (test/bench only)")

    p = sub.add_parser("setup", help="generate and store public parameters")
    p.add_argument("--big-n", type=int, required=True, help="vector length N (power of two)")
    p.add_argument("--batch", type=int, required=True, help="batch size b in [1, mu]")
    p.add_argument("--out", required=True)
    common(p, threads=False)
    p.set_defaults(fn=cmd_setup)

    p = sub.add_parser("commit", help="commit to a vector")
    p.add_argument("--params", required=True)
    p.add_argument("--data", help="JSON array of integers")
    p.add_argument("--random", action="store_true", help="commit to a seeded random vector")
    p.add_argument("--data-out", help="where to store the generated vector (with --random)")
    p.add_argument("--out", required=True, help="commitment output file")
    p.add_argument("--aux-out", required=True, help="auxiliary state output file")
    common(p, threads=False)
    p.set_defaults(fn=cmd_commit)

    p = sub.add_parser("open-all", help="generate all N opening proofs")
    p.add_argument("--params", required=True)
    p.add_argument("--aux", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    common(p, seed=False)
    p.set_defaults(fn=cmd_open_all)

    p = sub.add_parser("open", help="extract one opening from an open-all file")
    p.add_argument("--params", required=True)
    p.add_argument("--proofs", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_open)

    p = sub.add_parser("verify", help="verify one opening")
    p.add_argument("--params", required=True)
    p.add_argument("--commitment", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--value", type=lambda s: int(s, 0), required=True)
    p.add_argument("--opening", required=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("prove-eval", help="prove an evaluation of the vector's extension")
    p.add_argument("--params", required=True)
    p.add_argument("--aux", required=True)
    p.add_argument("--point", required=True, help="JSON array of log2(N) coordinates")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_prove_eval)

    p = sub.add_parser("verify-eval", help="verify an evaluation proof")
    p.add_argument("--params", required=True)
    p.add_argument("--commitment", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--value", type=lambda s: int(s, 0), default=None)
    p.set_defaults(fn=cmd_verify_eval)

    p = sub.add_parser("bench-fc", help="benchmark the functional commitment")
    p.add_argument("--n", type=_int_list, default=[1 << 10, 1 << 12])
    p.add_argument("--t", type=_int_list, default=[1, 32])
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table"), default="table")
    common(p)
    p.set_defaults(fn=cmd_bench_fc)

    p = sub.add_parser("bench-vc", help="benchmark commit/open-all/verify")
    p.add_argument("--big-n", type=_int_list, default=[1 << 10, 1 << 12, 1 << 14])
    p.add_argument(
        "--batch",
        type=_int_list,
        default=None,
        help="batch sizes (default: 2*log2(N) and log2(N)^2, capped)",
    )
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument(
        "--large",
        action="store_true",
        help="extend the default N sweep to 2^16 (slow)",
    )
    common(p)
    p.set_defaults(fn=cmd_bench_vc)

    p = sub.add_parser("selftest", help="run the property suite at small sizes")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--mutate", action="store_true", help="break the verifier fold on purpose (expects failures)")
    common(p, threads=False)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        parallel.set_worker_threads(args.threads)
    if getattr(args, "large", False) and args.command == "bench-vc":
        args.big_n = sorted(set(args.big_n) | {1 << 16})
    try:
        return args.fn(args)
    finally:
        parallel.set_worker_threads(1)


if __name__ == "__main__":
    sys.exit(main())
