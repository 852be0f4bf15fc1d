import pytest

from allproofs import parallel
from allproofs.algebra import GroupVec, MultilinearPoly, mle_eval, multi_exp
from allproofs.curve import G1Element, GTElement, SCALAR_ORDER as P
from allproofs.pc import pc_commit
from allproofs.transcript import DOMAIN_H, hash_to_scalar
from allproofs.vc import (
    VcAux,
    VcOpening,
    _open_all_state,
    load_aux,
    load_params,
    save_aux,
    save_params,
    vc_commit,
    vc_open,
    vc_open_all,
    vc_open_subarrays,
    vc_setup,
    vc_verify,
    vc_verify_subarray,
)
from allproofs.wire import WireError, u32


def random_vector(rng, n):
    return [rng.randrange(P) for _ in range(n)]


def fresh(ctx, rng, n_total, b, seed=None):
    pp = vc_setup(ctx, n_total, b, seed=rng.getrandbits(32) if seed is None else seed)
    values = random_vector(rng, n_total)
    commitment, aux = vc_commit(pp, values)
    return pp, values, commitment, aux


class TestSetupLayout:
    def test_square_layout(self, ctx):
        pp = vc_setup(ctx, 4, 1, seed=1)
        assert (pp.mu, pp.nu) == (2, 2)

    def test_rectangular_layout_odd_log(self, ctx):
        pp = vc_setup(ctx, 8, 2, seed=1)
        assert (pp.mu, pp.nu) == (4, 2)
        assert pp.mu * pp.nu == 8

    def test_paper_scale_layout(self, ctx):
        pp = vc_setup(ctx, 1 << 16, 2 * 16, seed=1)
        assert (pp.mu, pp.nu) == (1 << 8, 1 << 8)

    def test_block_clipping(self, ctx):
        pp = vc_setup(ctx, 16, 3, seed=1)  # mu = 4, blocks [0,3), [3,4)
        assert pp.block_count == 2
        assert pp.block_indices(0) == [0, 1, 2]
        assert pp.block_indices(1) == [3]

    def test_invalid_sizes_rejected(self, ctx):
        with pytest.raises(ValueError):
            vc_setup(ctx, 12, 1, seed=1)
        with pytest.raises(ValueError):
            vc_setup(ctx, 16, 0, seed=1)
        with pytest.raises(ValueError):
            vc_setup(ctx, 16, 5, seed=1)  # mu = 4


class TestCommit:
    def test_zero_vector_gives_identities(self, ctx):
        pp = vc_setup(ctx, 4, 1, seed=2)
        commitment, aux = vc_commit(pp, [0, 0, 0, 0])
        assert all(c == G1Element.identity() for c in aux.commitments)
        assert commitment.fc.value == GTElement.identity()

    def test_composition_oracle_with_trapdoors(self, ctx, rng):
        # C must equal gt^(sum_j f_j(s) beta^(2j)) for the seeded trapdoors
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2, seed=3)
        beta, s = pp.fc.beta, pp.pc.s
        point = list(reversed(s))
        exponent = sum(
            mle_eval(aux.polys[j], point) * pow(beta, 2 * j, P) for j in range(pp.mu)
        ) % P
        assert commitment.fc.value == ctx.gt ** exponent

    def test_subvector_commitments_match_pc(self, ctx, rng):
        pp, values, _, aux = fresh(ctx, rng, 16, 2)
        for j in range(pp.mu):
            f = MultilinearPoly.from_vector(values[j * 4 : (j + 1) * 4])
            assert pc_commit(pp.pc, f).value == aux.commitments[j]

    def test_cross_boundary_permutation_changes_commitment(self, ctx, rng):
        pp = vc_setup(ctx, 16, 2, seed=4)
        values = random_vector(rng, 16)
        swapped = list(values)
        swapped[0], swapped[8] = swapped[8], swapped[0]
        c1, _ = vc_commit(pp, values)
        c2, _ = vc_commit(pp, swapped)
        assert c1.to_bytes() != c2.to_bytes()

    def test_length_mismatch(self, ctx):
        pp = vc_setup(ctx, 16, 2, seed=5)
        with pytest.raises(ValueError):
            vc_commit(pp, [1, 2, 3])


class TestOpenAll:
    @pytest.mark.parametrize("n_total,b", [(4, 1), (16, 1), (16, 2), (64, 2), (64, 8)])
    def test_all_openings_verify(self, ctx, rng, n_total, b):
        pp, values, commitment, aux = fresh(ctx, rng, n_total, b)
        openings = vc_open_all(pp, aux, values, check_fold=(n_total <= 16))
        assert len(openings) == n_total
        assert all(
            vc_verify(pp, commitment, i, values[i], openings[i])
            for i in range(n_total)
        )

    def test_root_state_matches_direct_recomputation(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        openings, state = _open_all_state(pp, aux, values)
        root = openings[0].root
        rs = [hash_to_scalar(DOMAIN_H, root + u32(j)) for j in range(pp.mu)]
        assert state.root_commitment == multi_exp(aux.commitments, rs)
        expected = [
            sum(rs[j] * aux.polys[j].table[a] for j in range(pp.mu)) % P
            for a in range(pp.nu)
        ]
        assert list(state.root_table) == expected

    def test_unit_challenges_give_column_sums(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        _, state = _open_all_state(pp, aux, values, _unit_challenges=True)
        for a in range(pp.nu):
            assert state.root_table[a] == sum(values[j * 4 + a] for j in range(4)) % P

    def test_fold_conservation_invariants(self, ctx, rng):
        # the debug flag asserts D products and y sums at every node
        pp, values, commitment, aux = fresh(ctx, rng, 64, 4)
        vc_open_all(pp, aux, values, check_fold=True)

    def test_inconsistent_aux_detected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        tampered = list(values)
        tampered[3] = (tampered[3] + 1) % P
        with pytest.raises(ValueError):
            vc_open_all(pp, aux, tampered)

    def test_byte_determinism_and_threads(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 64, 3)
        first = [o.to_bytes() for o in vc_open_all(pp, aux, values)]
        second = [o.to_bytes() for o in vc_open_all(pp, aux, values)]
        assert first == second
        parallel.set_worker_threads(4)
        try:
            third = [o.to_bytes() for o in vc_open_all(pp, aux, values)]
        finally:
            parallel.set_worker_threads(1)
        assert first == third

    def test_open_returns_cached_openings(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        openings = vc_open_all(pp, aux, values)
        assert vc_open(pp, aux, 9, values).to_bytes() == openings[9].to_bytes()
        fresh_aux = VcAux(aux.commitments, aux.polys)
        assert vc_open(pp, fresh_aux, 9, values).to_bytes() == openings[9].to_bytes()
        with pytest.raises(IndexError):
            vc_open(pp, aux, 16, values)


class TestVerify:
    def test_wrong_value_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        openings = vc_open_all(pp, aux, values)
        for i in (0, 7, 15):
            assert not vc_verify(pp, commitment, i, (values[i] + 1) % P, openings[i])

    def test_swapped_level_records_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 64, 2)  # 3 fold levels
        openings = vc_open_all(pp, aux, values)
        o = openings[9]
        records = list(o.records)
        records[0], records[1] = records[1], records[0]
        swapped = VcOpening(
            o.index, o.block, o.fc_proof, o.root, o.path, o.f_digest,
            tuple(records), o.pc_proof,
        )
        assert not vc_verify(pp, commitment, 9, values[9], swapped)

    def test_opening_for_other_index_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        openings = vc_open_all(pp, aux, values)
        assert not vc_verify(pp, commitment, 4, values[4], openings[5])

    def test_single_bit_tampering_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        opening = vc_open_all(pp, aux, values)[6]
        blob = bytearray(opening.to_bytes())
        for _ in range(30):
            pos = rng.randrange(len(blob) * 8)
            blob[pos // 8] ^= 1 << (pos % 8)
            try:
                bad = VcOpening.from_bytes(bytes(blob), pp)
                assert not vc_verify(pp, commitment, 6, values[6], bad)
            except (WireError, Exception):
                pass  # unparseable counts as rejected
            blob[pos // 8] ^= 1 << (pos % 8)

    def test_index_bounds(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 4, 1)
        opening = vc_open_all(pp, aux, values)[0]
        with pytest.raises(IndexError):
            vc_verify(pp, commitment, 4, values[0], opening)


class TestOpeningWire:
    def test_round_trip(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        for opening in vc_open_all(pp, aux, values)[:4]:
            blob = opening.to_bytes()
            assert VcOpening.from_bytes(blob, pp).to_bytes() == blob

    def test_size_structure(self, ctx, rng):
        # header + block + fc proof + root/path/digest + records + pc proof
        pp, values, commitment, aux = fresh(ctx, rng, 64, 2)
        opening = vc_open_all(pp, aux, values)[0]
        from allproofs.fc import fc_proof_size

        expected = (
            1 + 8  # version, index
            + 4 + len(opening.block) * ctx.s1
            + fc_proof_size(pp.mu)
            + 32 + 1 + pp.log_mu * 32  # root, path length, path
            + 32  # polynomial digest
            + pp.log_mu * (2 * (ctx.s1 + 32))  # sibling + parent per level
            + 1 + pp.log_nu * ctx.s1  # hypercube evaluation proof
        )
        assert len(opening.to_bytes()) == expected

    def test_truncation_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        blob = vc_open_all(pp, aux, values)[0].to_bytes()
        with pytest.raises(WireError):
            VcOpening.from_bytes(blob[:-1], pp)
        with pytest.raises(WireError):
            VcOpening.from_bytes(blob + b"x", pp)


class TestSubarrays:
    def test_recommit_oracle_and_rejection(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        openings = vc_open_subarrays(pp, aux, 4)
        for j in range(4):
            part = values[j * 4 : (j + 1) * 4]
            assert vc_verify_subarray(pp, commitment, j, part, openings[j])
            wrong = list(part)
            wrong[2] = (wrong[2] + 1) % P
            assert not vc_verify_subarray(pp, commitment, j, wrong, openings[j])

    def test_full_partition_equals_step1_blocks(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 1, seed=6)
        step1 = vc_open_all(pp, aux, values)
        subs = vc_open_subarrays(pp, aux, pp.mu)
        for j in range(pp.mu):
            assert subs[j].fc_proof.to_bytes() == step1[j * pp.nu].fc_proof.to_bytes()

    def test_wider_subarrays(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 64, 2)  # mu = 8, nu = 8
        openings = vc_open_subarrays(pp, aux, 2)
        half = len(values) // 2
        assert vc_verify_subarray(pp, commitment, 0, values[:half], openings[0])
        assert vc_verify_subarray(pp, commitment, 1, values[half:], openings[1])
        assert not vc_verify_subarray(pp, commitment, 1, values[:half], openings[0])

    def test_misaligned_partition_rejected(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        with pytest.raises(ValueError):
            vc_open_subarrays(pp, aux, 3)


class TestPersistence:
    def test_params_round_trip(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2, seed=7)
        blob = save_params(pp)
        loaded = load_params(blob, ctx)
        assert save_params(loaded) == blob
        commitment2, _ = vc_commit(loaded, values)
        assert commitment2.to_bytes() == commitment.to_bytes()
        opening = vc_open_all(pp, aux, values)[3]
        assert vc_verify(loaded, commitment2, 3, values[3], opening)

    def test_bad_magic_rejected(self, ctx):
        pp = vc_setup(ctx, 4, 1, seed=8)
        blob = save_params(pp)
        with pytest.raises(WireError, match="magic"):
            load_params(b"NOTMAGIC" + blob[8:], ctx)

    def test_truncated_params_rejected(self, ctx):
        pp = vc_setup(ctx, 4, 1, seed=8)
        with pytest.raises(WireError):
            load_params(save_params(pp)[:-7], ctx)

    def test_aux_round_trip(self, ctx, rng):
        pp, values, commitment, aux = fresh(ctx, rng, 16, 2)
        restored = load_aux(save_aux(pp, aux), pp)
        assert restored.commitments == aux.commitments
        assert restored.polys == aux.polys
        openings = vc_open_all(pp, restored, values)
        assert vc_verify(pp, commitment, 5, values[5], openings[5])


class TestSmallSizes:
    @pytest.mark.parametrize("n_total", [1, 2])
    def test_degenerate_layouts(self, ctx, rng, n_total):
        pp, values, commitment, aux = fresh(ctx, rng, n_total, 1)
        openings = vc_open_all(pp, aux, values, check_fold=True)
        assert all(
            vc_verify(pp, commitment, i, values[i], openings[i])
            for i in range(n_total)
        )
        assert not vc_verify(pp, commitment, 0, (values[0] + 1) % P, openings[0])

    def test_zero_vector_round_trip(self, ctx):
        # all-identity commitments exercise the canonical infinity encoding
        # throughout the opening pipeline
        pp = vc_setup(ctx, 16, 2, seed=11)
        values = [0] * 16
        commitment, aux = vc_commit(pp, values)
        openings = vc_open_all(pp, aux, values, check_fold=True)
        for i in range(16):
            blob = openings[i].to_bytes()
            parsed = VcOpening.from_bytes(blob, pp)
            assert vc_verify(pp, commitment, i, 0, parsed)
        assert not vc_verify(pp, commitment, 3, 1, openings[3])

    def test_opening_from_other_batch_layout_rejected(self, ctx, rng):
        values = [rng.randrange(P) for _ in range(16)]
        pp2 = vc_setup(ctx, 16, 2, seed=12)
        pp4 = vc_setup(ctx, 16, 4, seed=12)
        c2, aux2 = vc_commit(pp2, values)
        opening = vc_open_all(pp2, aux2, values)[0]
        # same trapdoors, different block layout: structural mismatch
        assert not vc_verify(pp4, c2, 0, values[0], opening)
