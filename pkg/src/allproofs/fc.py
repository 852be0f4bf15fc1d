"""Functional commitment for multi-exponentiations over G1 with batch opening.

The committed object is a vector ``A`` of G1 elements. A batch proof
convinces a verifier that ``y_i = prod_j A[j]^{b_i[j]}`` simultaneously for
``t`` public scalar vectors ``b_0..b_{t-1}`` against the constant-size
commitment ``C = prod_j e(A[j], v[j])``, where ``v`` is the structured key
``v[j] = g2^(beta^(2j))`` from a trusted setup.

The proof is a recursive halving argument: the ``t`` claims are first
merged into one by a random linear combination, then the combined claim is
folded in half log2(n) times. Verification folds the commitment pair the
same way and ends in a single pairing check. The verifier outsources the
folded key ``v_final`` to the prover and checks it with a quotient
polynomial opening against ``g1^beta`` (two extra G2 elements per proof).

Challenge derivation (wire contract; encodings from ``curve``/``transcript``):

- aggregation scalar ``r_i`` <- H(enc(b_i) || C || count || enc(b_0..b_{t-1})
  || count || y_0..y_{t-1}), one call per claim with the claim's own vector
  absorbed first and again inside the set (redundant but kept by design);
- round challenge ``x_j`` <- H'(x_{j-1} || L_gt || L_g1 || R_gt || R_g1)
  with the empty string in place of ``x_0``;
- key-opening point ``z`` <- H'("key" || x_ell || v_final).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import counters
from .algebra import GroupVec, multi_exp, pairing_prod, split_lr
from .curve import (
    BilinearCtx,
    G1Element,
    G2Element,
    GTElement,
    SCALAR_ORDER as P,
    scalar_inv,
    scalar_to_bytes,
)
from .transcript import (
    DOMAIN_H,
    DOMAIN_H_PRIME,
    encode_scalars,
    hash_to_scalar,
    scalar_stream,
)
from .wire import Reader, u32

__all__ = [
    "FcParams",
    "FcCommitment",
    "FcBatchProof",
    "fc_setup",
    "fc_commit",
    "fc_bopen",
    "fc_bverify",
    "fc_bopen_units",
    "fc_bverify_units",
    "fc_key_proof",
    "fc_key_verify",
    "fc_proof_size",
]

# Test hook for the self-test's mutation check: when set, the verifier's
# commitment update deliberately deviates from the correct fold.
_BREAK_FOLD_UPDATE = False


@dataclass(frozen=True)
class FcParams:
    """Public parameters: the structured G2 key plus key-proof elements.

    ``v[i] = g2^(beta^(2i))`` is the commitment key. ``g1_beta = g1^beta``
    and the odd powers ``g2_odd[i] = g2^(beta^(2i+1))`` exist only to prove
    and verify the folded key; both are trusted-setup outputs and neither
    reveals beta. ``beta`` itself is retained only when a test seed was
    supplied (trapdoor for oracle tests) and must be None in production.
    """

    ctx: BilinearCtx
    n: int
    ell: int
    v: GroupVec
    g1_beta: G1Element
    g2_odd: GroupVec
    beta: int | None = None

    def __post_init__(self):
        if len(self.v) != self.n or len(self.g2_odd) != max(0, self.n - 1):
            raise ValueError("key vector lengths do not match n")


@dataclass(frozen=True)
class FcCommitment:
    value: GTElement

    def to_bytes(self) -> bytes:
        return self.value.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "FcCommitment":
        return cls(GTElement.from_bytes(data))


@dataclass(frozen=True)
class FcRound:
    l_gt: GTElement
    l_g1: G1Element
    r_gt: GTElement
    r_g1: G1Element

    def to_bytes(self) -> bytes:
        return (
            self.l_gt.to_bytes()
            + self.l_g1.to_bytes()
            + self.r_gt.to_bytes()
            + self.r_g1.to_bytes()
        )


@dataclass(frozen=True)
class FcBatchProof:
    """Folding transcript: ell rounds of (L, R), the folded vector element,
    and the outsourced key ``v_final`` with its quotient proof."""

    rounds: tuple[FcRound, ...]
    a_final: G1Element
    v_final: G2Element
    key_proof: G2Element

    def to_bytes(self) -> bytes:
        body = b"".join(r.to_bytes() for r in self.rounds)
        return (
            body
            + self.a_final.to_bytes()
            + self.v_final.to_bytes()
            + self.key_proof.to_bytes()
        )

    @property
    def byte_size(self) -> int:
        s1, s2, st = G1Element._wire_len, G2Element._wire_len, GTElement._wire_len
        return 2 * len(self.rounds) * (st + s1) + s1 + 2 * s2

    @classmethod
    def from_bytes(cls, data: bytes, ell: int) -> "FcBatchProof":
        reader = Reader(data)
        rounds = []
        for _ in range(ell):
            l_gt = GTElement.from_bytes(reader.take(384))
            l_g1 = G1Element.from_bytes(reader.take(32))
            r_gt = GTElement.from_bytes(reader.take(384))
            r_g1 = G1Element.from_bytes(reader.take(32))
            rounds.append(FcRound(l_gt, l_g1, r_gt, r_g1))
        a_final = G1Element.from_bytes(reader.take(32))
        v_final = G2Element.from_bytes(reader.take(64))
        key_proof = G2Element.from_bytes(reader.take(64))
        reader.expect_end()
        return cls(tuple(rounds), a_final, v_final, key_proof)


def fc_proof_size(n: int, ctx: BilinearCtx | None = None) -> int:
    """Serialized proof size in bytes for key length n (independent of t)."""
    from .curve import default_ctx

    ctx = ctx or default_ctx()
    ell = _log2_exact(n)
    return 2 * ell * (ctx.st + ctx.s1) + ctx.s1 + 2 * ctx.s2


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


def fc_setup(ctx: BilinearCtx, n: int, seed: int | bytes | None = None) -> FcParams:
    """Sample the structured key for vectors of length n (a power of two).

    With ``seed`` set, the trapdoor beta is derived deterministically and
    kept on the returned params for oracle tests; never seed outside tests.
    """
    if seed is None:
        import secrets

        beta = 0
        while beta == 0:
            beta = secrets.randbelow(P)
        return _params_from_beta(ctx, n, beta, keep_beta=False)
    stream = scalar_stream(seed, b"fc-setup")
    beta = next(x for x in stream if x != 0)
    return _params_from_beta(ctx, n, beta, keep_beta=True)


def _params_from_beta(ctx: BilinearCtx, n: int, beta: int, keep_beta: bool) -> FcParams:
    ell = _log2_exact(n)
    beta_sq = beta * beta % P
    evens = [1] * n
    for i in range(1, n):
        evens[i] = evens[i - 1] * beta_sq % P
    odds = [e * beta % P for e in evens[: n - 1]]
    v = GroupVec.fixed_base(ctx.g2, evens)
    g2_odd = (
        GroupVec.fixed_base(ctx.g2, odds) if odds else GroupVec.empty(G2Element)
    )
    return FcParams(
        ctx=ctx,
        n=n,
        ell=ell,
        v=v,
        g1_beta=ctx.g1 ** beta,
        g2_odd=g2_odd,
        beta=beta if keep_beta else None,
    )


def fc_commit(pp: FcParams, vector: GroupVec) -> FcCommitment:
    if vector.cls is not G1Element or len(vector) != pp.n:
        raise ValueError(f"commit expects a G1 vector of length {pp.n}")
    return FcCommitment(pairing_prod(vector, pp.v))


# ---------------------------------------------------------------------------
# challenges


def _encode_unit_vector(n: int, index: int, zero32: bytes = bytes(32)) -> bytes:
    parts = [u32(n), zero32 * index, scalar_to_bytes(1), zero32 * (n - index - 1)]
    return b"".join(parts)


def _aggregation_scalars(
    commitment: FcCommitment, encoded_bs: list[bytes], ys: list[G1Element]
) -> list[int]:
    t = len(encoded_bs)
    tail = (
        commitment.to_bytes(),
        u32(t),
        *encoded_bs,
        u32(t),
        *(y.to_bytes() for y in ys),
    )
    return [hash_to_scalar(DOMAIN_H, enc, *tail) for enc in encoded_bs]


def _round_challenge(prev: bytes, rnd: FcRound) -> int:
    return hash_to_scalar(DOMAIN_H_PRIME, prev, rnd.to_bytes())


def _key_point(prev: bytes, v_final: G2Element) -> int:
    return hash_to_scalar(DOMAIN_H_PRIME, b"key", prev, v_final.to_bytes())


# ---------------------------------------------------------------------------
# key proof (outsourced v_final)


def _key_coefficients(challenge_invs: list[int], ell: int) -> list[int]:
    """Coefficients of F where v_final = g2^F(beta^2).

    F(Y) = prod_{k=1..ell} (1 + x_k^{-1} Y^(2^(ell-k))); coefficient m is
    the product of x_k^{-1} over the set bits of m (bit ell-k set <-> k).
    """
    coeffs = [1]
    for k in range(ell, 0, -1):
        inv = challenge_invs[k - 1]
        coeffs = coeffs + [c * inv % P for c in coeffs]
    counters.record("field_ops", max(0, len(coeffs) - 1))
    return coeffs


def fc_key_proof(
    pp: FcParams, challenges: list[int], z: int
) -> tuple[G2Element, G2Element]:
    """Compute (v_final, key_proof) for the given nonzero round challenges."""
    if len(challenges) != pp.ell:
        raise ValueError(f"expected {pp.ell} challenges")
    if pp.ell == 0:
        return pp.v[0], G2Element.identity()
    invs = [scalar_inv(x) for x in challenges]
    coeffs = _key_coefficients(invs, pp.ell)
    v_final = multi_exp(pp.v, coeffs)
    return v_final, _key_quotient(pp, coeffs, z)


def _key_quotient(pp: FcParams, coeffs: list[int], z: int) -> G2Element:
    """g2^q(beta) for q(X) = (f(X) - f(z)) / (X - z), f(X) = F(X^2)."""
    n = pp.n
    degree = 2 * n - 2
    dense = [0] * (degree + 1)
    for m, c in enumerate(coeffs):
        dense[2 * m] = c
    quotient = [0] * degree
    quotient[degree - 1] = dense[degree]
    for d in range(degree - 1, 0, -1):
        quotient[d - 1] = (dense[d] + z * quotient[d]) % P
    counters.record("field_ops", 2 * degree)
    even = quotient[0::2]  # exponents beta^(2i), i < n-1
    odd = quotient[1::2]  # exponents beta^(2i+1), i < n-1
    bases = pp.v.slice(0, n - 1).concat(pp.g2_odd)
    return multi_exp(bases, even + odd)


def fc_key_verify(
    pp: FcParams,
    challenges: list[int],
    z: int,
    v_final: G2Element,
    key_proof: G2Element,
) -> bool:
    """Check e(g1^(beta-z), key_proof) = e(g1, v_final * g2^(-f(z)))."""
    if len(challenges) != pp.ell:
        raise ValueError(f"expected {pp.ell} challenges")
    ctx = pp.ctx
    if pp.ell == 0:
        return v_final == pp.v[0] and key_proof == G2Element.identity()
    z_pows = [z % P]  # z^(2^m)
    for _ in range(pp.ell):
        z_pows.append(z_pows[-1] * z_pows[-1] % P)
    f_z = 1
    for k in range(1, pp.ell + 1):
        f_z = f_z * (1 + scalar_inv(challenges[k - 1]) * z_pows[pp.ell - k + 1]) % P
    counters.record("field_ops", 3 * pp.ell)
    lhs_g1 = pp.g1_beta * (ctx.g1 ** z).inv()
    rhs_g2 = v_final * (ctx.g2 ** f_z).inv()
    return ctx.pairing(lhs_g1, key_proof) == ctx.pairing(ctx.g1, rhs_g2)


# ---------------------------------------------------------------------------
# batch opening


def _check_open_inputs(pp, vector, bs, ys):
    if vector is not None and (vector.cls is not G1Element or len(vector) != pp.n):
        raise ValueError(f"expected a committed G1 vector of length {pp.n}")
    if len(bs) == 0:
        raise ValueError("batch opening needs at least one claim")
    if len(bs) != len(ys):
        raise ValueError("claim vectors and claimed values differ in count")


def _combine_claims(bs: list, ys: list[G1Element], rs: list[int]):
    """Random linear combination: b = sum r_i b_i, y = prod y_i^{r_i}."""
    n = len(bs[0])
    combined = [0] * n
    for r, b in zip(rs, bs):
        for j in range(n):
            combined[j] = (combined[j] + r * b[j]) % P
    counters.record("field_ops", 2 * n * len(bs))
    y = multi_exp(GroupVec.from_elements(ys), rs)
    return combined, y


def _prove_folded(pp: FcParams, vector: GroupVec, b_dense, b_sparse):
    """Shared folding loop; ``b`` is dense (list) or sparse ({index: coeff}).

    Both representations produce identical rounds and challenges; the sparse
    form only changes how the G1 inner products are gathered.
    """
    a_cur = vector
    v_cur = pp.v
    rounds = []
    challenges = []
    prev = b""
    m = pp.n
    while m > 1:
        half = m // 2
        a_l, a_r = a_cur.halves()
        v_l, v_r = v_cur.halves()
        l_gt = pairing_prod(a_r, v_l)
        r_gt = pairing_prod(a_l, v_r)
        if b_dense is not None:
            b_l, b_r = split_lr(b_dense)
            l_g1 = multi_exp(a_r, b_l)
            r_g1 = multi_exp(a_l, b_r)
        else:
            left = {i: c for i, c in b_sparse.items() if i < half}
            right = {i - half: c for i, c in b_sparse.items() if i >= half}
            l_g1 = _sparse_exp(a_r, left)
            r_g1 = _sparse_exp(a_l, right)
        rnd = FcRound(l_gt, l_g1, r_gt, r_g1)
        x = _round_challenge(prev, rnd)
        prev = scalar_to_bytes(x)
        x_inv = scalar_inv(x)
        a_cur = a_l.fold(a_r, x)
        v_cur = v_l.fold(v_r, x_inv)
        if b_dense is not None:
            b_dense = [(b_l[i] + x_inv * b_r[i]) % P for i in range(half)]
            counters.record("field_ops", 2 * half)
        else:
            b_sparse = {
                i: (left.get(i, 0) + x_inv * right.get(i, 0)) % P
                for i in set(left) | set(right)
            }
        rounds.append(rnd)
        challenges.append(x)
        m = half
    a_final = a_cur[0]
    v_final = v_cur[0]
    if pp.ell == 0:
        key_proof = G2Element.identity()
    else:
        z = _key_point(prev, v_final)
        invs = [scalar_inv(x) for x in challenges]
        key_proof = _key_quotient(pp, _key_coefficients(invs, pp.ell), z)
    return FcBatchProof(tuple(rounds), a_final, v_final, key_proof)


def _sparse_exp(vec: GroupVec, entries: dict[int, int]) -> G1Element:
    live = [(i, c) for i, c in sorted(entries.items()) if c % P != 0]
    if not live:
        return G1Element.identity()
    return multi_exp(vec.select([i for i, _ in live]), [c for _, c in live])


def fc_bopen(
    pp: FcParams,
    commitment: FcCommitment,
    vector: GroupVec,
    bs: list,
    ys: list[G1Element],
) -> FcBatchProof:
    """Prove y_i = <vector, b_i> for all claims against the commitment."""
    _check_open_inputs(pp, vector, bs, ys)
    for b in bs:
        if len(b) != pp.n:
            raise ValueError(f"claim vectors must have length {pp.n}")
    encoded = [encode_scalars(b) for b in bs]
    rs = _aggregation_scalars(commitment, encoded, ys)
    combined, _ = _combine_claims(bs, ys, rs)
    return _prove_folded(pp, vector, combined, None)


def fc_bverify(
    pp: FcParams,
    commitment: FcCommitment,
    bs: list,
    ys: list[G1Element],
    proof: FcBatchProof,
) -> bool:
    """Verify a batch proof; False on any failed check, raise on malformed input."""
    _check_open_inputs(pp, None, bs, ys)
    for b in bs:
        if len(b) != pp.n:
            raise ValueError(f"claim vectors must have length {pp.n}")
    encoded = [encode_scalars(b) for b in bs]
    rs = _aggregation_scalars(commitment, encoded, ys)
    combined, y = _combine_claims(bs, ys, rs)

    def fold_b(x_inv: int, b):
        half = len(b) // 2
        counters.record("field_ops", 2 * half)
        return [(b[i] + x_inv * b[i + half]) % P for i in range(half)]

    def final_b(_challenge_invs, b):
        return b[0]

    return _verify_folded(pp, commitment, y, proof, combined, fold_b, final_b)


def _verify_folded(pp, commitment, y, proof, b_state, fold_b, final_b):
    if len(proof.rounds) != pp.ell:
        raise ValueError(f"proof must have exactly {pp.ell} rounds")
    ctx = pp.ctx
    c_gt = commitment.value
    c_g1 = y
    prev = b""
    invs = []
    for rnd in proof.rounds:
        x = _round_challenge(prev, rnd)
        prev = scalar_to_bytes(x)
        x_inv = scalar_inv(x)
        invs.append(x_inv)
        if _BREAK_FOLD_UPDATE:
            x = (x + 1) % P  # deliberately wrong update (self-test hook)
        c_gt = (rnd.l_gt ** x) * c_gt * (rnd.r_gt ** x_inv)
        c_g1 = (rnd.l_g1 ** x) * c_g1 * (rnd.r_g1 ** x_inv)
        if b_state is not None:
            b_state = fold_b(x_inv, b_state)
    if pp.ell > 0:
        challenges = [scalar_inv(i) for i in invs]
        z = _key_point(prev, proof.v_final)
        if not fc_key_verify(pp, challenges, z, proof.v_final, proof.key_proof):
            return False
    elif proof.v_final != pp.v[0] or proof.key_proof != G2Element.identity():
        return False
    b_final = final_b(invs, b_state)
    if c_gt != ctx.pairing(proof.a_final, proof.v_final):
        return False
    return c_g1 == proof.a_final ** (b_final % P)


# ---------------------------------------------------------------------------
# unit-vector fast paths


def _check_indices(pp: FcParams, indices: list[int]) -> None:
    if len(indices) == 0:
        raise ValueError("batch opening needs at least one claim")
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate indices in unit-vector batch")
    for i in indices:
        if not 0 <= i < pp.n:
            raise ValueError(f"index {i} out of range [0, {pp.n})")


def _unit_aggregation_scalars(pp, commitment, indices, ys):
    encoded = [_encode_unit_vector(pp.n, i) for i in indices]
    return _aggregation_scalars(commitment, encoded, ys)


def fc_bopen_units(
    pp: FcParams,
    commitment: FcCommitment,
    vector: GroupVec,
    indices: list[int],
    ys: list[G1Element],
    rs: list[int] | None = None,
) -> FcBatchProof:
    """Batch-open unit-vector claims y_i = vector[indices[i]].

    Produces the same proof bytes as ``fc_bopen`` on the corresponding unit
    vectors, but keeps the claim combination sparse so the per-round inner
    products touch only |indices| positions. ``rs`` overrides the derived
    aggregation scalars (test hook).
    """
    _check_open_inputs(pp, vector, indices, ys)
    _check_indices(pp, indices)
    if rs is None:
        rs = _unit_aggregation_scalars(pp, commitment, indices, ys)
    sparse: dict[int, int] = {}
    for r, i in zip(rs, indices):
        sparse[i] = (sparse.get(i, 0) + r) % P
    return _prove_folded(pp, vector, None, sparse)


def fc_bverify_units(
    pp: FcParams,
    commitment: FcCommitment,
    indices: list[int],
    ys: list[G1Element],
    proof: FcBatchProof,
    rs: list[int] | None = None,
) -> bool:
    """Verify unit-vector claims with the closed-form folded coefficient.

    Rather than folding a dense vector, the final coefficient is
    sum_i r_i * prod_{k=1..ell} (1/x_k)^(bit_{ell-k} of indices[i]),
    which costs O(|indices| * ell) field operations.
    """
    _check_open_inputs(pp, None, indices, ys)
    _check_indices(pp, indices)
    if rs is None:
        rs = _unit_aggregation_scalars(pp, commitment, indices, ys)
    y = multi_exp(GroupVec.from_elements(ys), rs)

    def final_b(challenge_invs, _state):
        total = 0
        for r, idx in zip(rs, indices):
            term = r
            for k in range(1, pp.ell + 1):
                if (idx >> (pp.ell - k)) & 1:
                    term = term * challenge_invs[k - 1] % P
            total = (total + term) % P
        counters.record("field_ops", len(indices) * (pp.ell + 1))
        return total

    return _verify_folded(pp, commitment, y, proof, None, None, final_b)
