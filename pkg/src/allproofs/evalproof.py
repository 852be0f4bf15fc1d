"""Evaluation proofs for the committed vector's multilinear extension.

A committed vector m of length N defines a multilinear polynomial f_m on
log2(N) variables. Proof systems that encode their inputs this way need
one thing from the commitment: an evaluation proof for f_m at an arbitrary
point r. The two-layer structure supplies it directly, because

    f_m(x) = sum_j f_j(x_R) * T_j(x_L)

where x_L are the high log2(mu) coordinates selecting the subvector, x_R
the low log2(nu) coordinates, and T_j is the hypercube indicator
(eq) polynomial of index j. Fixing x_L = r_L gives a restricted polynomial
F = sum_j T_j(r_L) f_j whose commitment is the same weighted product of the
subvector commitments, so the prover sends C_F with (1) a functional-
commitment proof that C_F = <C, (T_j(r_L))_j> against the vector
commitment and (2) an evaluation proof of F at r_R.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import counters
from .algebra import GroupVec, MultilinearPoly, mle_eval, multi_exp
from .curve import G1Element, SCALAR_ORDER as P, scalar_from_bytes, scalar_to_bytes
from .fc import FcBatchProof, fc_bopen, fc_bverify, fc_commit, fc_proof_size
from .pc import PcCommitment, PcEvalProof, pc_eval, pc_verify
from .vc import VcAux, VcCommitment, VcParams
from .wire import Reader, WireError, u8

__all__ = ["MleEvalProof", "eq_weights", "prove_mle_eval", "verify_mle_eval"]


@dataclass(frozen=True)
class MleEvalProof:
    """Claimed value plus the two sub-proofs tying it to the commitment.

    ``value`` is carried in the proof for self-containment; verifiers with
    their own expected value can pass it explicitly to override.
    """

    c_f: G1Element
    fc_proof: FcBatchProof
    pc_proof: PcEvalProof
    value: int

    def to_bytes(self) -> bytes:
        return (
            u8(1)
            + self.c_f.to_bytes()
            + self.fc_proof.to_bytes()
            + self.pc_proof.to_bytes()
            + scalar_to_bytes(self.value)
        )

    @classmethod
    def from_bytes(cls, data: bytes, pp: VcParams) -> "MleEvalProof":
        reader = Reader(data)
        if reader.u8() != 1:
            raise WireError("unsupported proof version")
        c_f = G1Element.from_bytes(reader.take(pp.ctx.s1))
        fc_proof = FcBatchProof.from_bytes(
            reader.take(fc_proof_size(pp.mu, pp.ctx)), pp.fc.ell
        )
        pc_proof = PcEvalProof.from_bytes(reader.take(1 + pp.log_nu * pp.ctx.s1))
        value = scalar_from_bytes(reader.take(32))
        reader.expect_end()
        return cls(c_f, fc_proof, pc_proof, value)


def eq_weights(r_high) -> list[int]:
    """Hypercube indicator values (T_j(r))_j for all indices j.

    ``r_high`` is ordered like every evaluation point, highest variable
    first. Computed by the doubling expansion in O(2^len) field ops; on
    hypercube points the weights are a unit vector.
    """
    weights = [1]
    for coord in reversed(r_high):  # low variable first
        coord = coord % P
        one_minus = (1 - coord) % P
        weights = [w * one_minus % P for w in weights] + [
            w * coord % P for w in weights
        ]
    counters.record("field_ops", max(0, 2 * (len(weights) - 1)))
    return weights


def _split_point(pp: VcParams, point):
    if len(point) != pp.log_mu + pp.log_nu:
        raise ValueError(
            f"point must have {pp.log_mu + pp.log_nu} coordinates, got {len(point)}"
        )
    return list(point[: pp.log_mu]), list(point[pp.log_mu :])


def prove_mle_eval(pp: VcParams, aux: VcAux, point) -> MleEvalProof:
    """Prove f_m(point) where f_m extends the committed vector.

    The subvector-selector weights are dense, so the functional-commitment
    proof uses the general (non-unit-vector) batch opening with t = 1.
    """
    r_high, r_low = _split_point(pp, point)
    weights = eq_weights(r_high)
    c_f = multi_exp(aux.commitments, weights)
    commitment = fc_commit(pp.fc, aux.commitments)
    fc_proof = fc_bopen(pp.fc, commitment, aux.commitments, [weights], [c_f])
    restricted = [0] * pp.nu
    for w, poly in zip(weights, aux.polys):
        for a in range(pp.nu):
            restricted[a] = (restricted[a] + w * poly.table[a]) % P
    counters.record("field_ops", 2 * pp.mu * pp.nu)
    f_restricted = MultilinearPoly(tuple(restricted), pp.log_nu)
    value, pc_proof = pc_eval(pp.pc, f_restricted, r_low)
    return MleEvalProof(c_f, fc_proof, pc_proof, value)


def verify_mle_eval(
    pp: VcParams,
    commitment: VcCommitment,
    point,
    proof: MleEvalProof,
    value: int | None = None,
) -> bool:
    """Check an evaluation proof against the vector commitment.

    ``value`` overrides the proof's embedded claim when the caller already
    knows what the evaluation must be.
    """
    r_high, r_low = _split_point(pp, point)
    claimed = proof.value if value is None else value % P
    weights = eq_weights(r_high)
    if not fc_bverify(pp.fc, commitment.fc, [weights], [proof.c_f], proof.fc_proof):
        return False
    return pc_verify(pp.pc, PcCommitment(proof.c_f), r_low, claimed, proof.pc_proof)
