"""Two-layer vector commitment with linear-time generation of all openings.

A length-N vector is split into ``mu`` subvectors of length ``nu``
(``mu = 2^ceil(log2(N)/2)``, both powers of two). Each subvector is
committed as a multilinear polynomial (``pc``); the vector of those
commitments is committed with the multi-exponentiation functional
commitment (``fc``). An opening for index i then shows (1) that
C_{i // nu} really is that component of the committed commitment vector,
and (2) that the subvector polynomial evaluates to m_i at the right
hypercube point.

``open_all`` produces all N openings at once:

- Step 1 batches the component proofs: the commitment vector is cut into
  ceil(mu/b) blocks of ``b`` indices (last block clipped) and one
  unit-vector batch proof covers each block, so the heavy folding work is
  paid N/b times instead of N times. Larger ``b`` means fewer, larger
  batches: cheaper proving, more verifier work per opening.
- Step 2 folds the mu randomized polynomials ``r_j f_j`` pairwise up a
  binary tree into one polynomial ``g*``, recording for every tree level
  the sibling commitment and sibling evaluation each verifier needs, and
  finally emits hypercube evaluation proofs for ``g*`` in one
  ``pc_hyper_eval`` pass shared by all verifiers with the same residue.

The Fiat-Shamir challenges ``r_j`` are derived from a Merkle root over
the (commitment, polynomial-digest) leaves: ``r_j = H(root || j)``. Each
opening ships the membership path for its leaf so a verifier can re-derive
its ``r_j`` from data the prover committed to before seeing any challenge.
Step-1 proofs do not feed this transcript (the two randomizations are
independent); in the serialized opening they precede the root.

Openings carry, per fold level, the sibling record (D_sib, y_sib) plus the
resulting parent pair (D, y); the verifier recomputes each parent with the
fold rule and rejects on the first mismatch, which pins every record to
its level. The last parent pair is (D*, y*), the folded commitment and
claimed evaluation the final ``pc_verify`` runs against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import counters
from .algebra import GroupVec, MultilinearPoly, bits, multi_exp
from .curve import (
    BilinearCtx,
    G1Element,
    SCALAR_ORDER as P,
    scalar_from_bytes,
    scalar_to_bytes,
)
from .fc import (
    FcCommitment,
    FcParams,
    fc_bopen_units,
    fc_bverify_units,
    fc_commit,
    fc_proof_size,
    fc_setup,
    FcBatchProof,
)
from .parallel import pmap
from .pc import PcCommitment, PcEvalProof, PcParams, pc_commit, pc_hyper_eval, pc_setup, pc_verify
from .transcript import DOMAIN_H, MerkleTree, hash_bytes, hash_to_scalar, merkle_verify
from .wire import Reader, WireError, u8, u32, u64

__all__ = [
    "VcParams",
    "VcCommitment",
    "VcAux",
    "VcOpening",
    "SubarrayOpening",
    "FoldState",
    "vc_setup",
    "vc_commit",
    "vc_open_all",
    "vc_open",
    "vc_verify",
    "vc_open_subarrays",
    "vc_verify_subarray",
    "save_params",
    "load_params",
]

PARAMS_MAGIC = b"FLEXPP01"


@dataclass(frozen=True)
class VcParams:
    ctx: BilinearCtx
    n_total: int
    mu: int
    nu: int
    b: int
    fc: FcParams
    pc: PcParams

    @property
    def log_mu(self) -> int:
        return self.mu.bit_length() - 1

    @property
    def log_nu(self) -> int:
        return self.nu.bit_length() - 1

    def block_indices(self, k: int) -> list[int]:
        """Step-1 block S_k = [kb, min((k+1)b, mu)), last block clipped."""
        start = k * self.b
        if not 0 <= start < self.mu:
            raise ValueError(f"block {k} out of range")
        return list(range(start, min(start + self.b, self.mu)))

    @property
    def block_count(self) -> int:
        return -(-self.mu // self.b)


@dataclass(frozen=True)
class VcCommitment:
    fc: FcCommitment

    def to_bytes(self) -> bytes:
        return self.fc.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "VcCommitment":
        return cls(FcCommitment.from_bytes(data))


@dataclass
class VcAux:
    """Prover-side state: the subvector commitments and their polynomials.

    Holding the mu polynomial tables costs N field elements but avoids
    re-deriving them from the vector on every opening pass. The top-level
    commitment and generated openings are cached here when known; both are
    derivable, so neither is part of the serialized form.
    """

    commitments: GroupVec
    polys: tuple[MultilinearPoly, ...]
    _fc_commitment: "FcCommitment | None" = field(default=None, repr=False)
    _openings: "list[VcOpening] | None" = field(default=None, repr=False)

    def top_commitment(self, pp: "VcParams") -> FcCommitment:
        if self._fc_commitment is None:
            self._fc_commitment = fc_commit(pp.fc, self.commitments)
        return self._fc_commitment


@dataclass(frozen=True)
class FoldLevel:
    commitments: GroupVec
    tables: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FoldState:
    """Bottom-up levels of the fold tree (level 0 = randomized leaves).

    For honest execution, node w at any level satisfies
    D_w = pc_commit(g_w) and table_w[a] = g_w(bits(a)); each parent is the
    product/sum of its two children.
    """

    levels: tuple[FoldLevel, ...]

    @property
    def root_commitment(self) -> G1Element:
        return self.levels[-1].commitments[0]

    @property
    def root_table(self) -> tuple[int, ...]:
        return self.levels[-1].tables[0]


@dataclass(frozen=True)
class VcOpening:
    index: int
    block: GroupVec
    fc_proof: FcBatchProof
    root: bytes
    path: tuple[bytes, ...]
    f_digest: bytes
    # one record per fold level: (sibling D, sibling y, parent D, parent y)
    records: tuple[tuple[G1Element, int, G1Element, int], ...]
    pc_proof: PcEvalProof

    def to_bytes(self) -> bytes:
        out = [
            u8(1),
            u64(self.index),
            u32(len(self.block)),
            self.block.to_bytes(),
            self.fc_proof.to_bytes(),
            self.root,
            u8(len(self.path)),
            b"".join(self.path),
            self.f_digest,
        ]
        for d_sib, y_sib, d_par, y_par in self.records:
            out += [d_sib.to_bytes(), scalar_to_bytes(y_sib), d_par.to_bytes(), scalar_to_bytes(y_par)]
        out.append(self.pc_proof.to_bytes())
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes, pp: VcParams) -> "VcOpening":
        reader = Reader(data)
        if reader.u8() != 1:
            raise WireError("unsupported opening version")
        index = reader.u64()
        block_len = reader.u32()
        if block_len > pp.b:
            raise WireError("block larger than batch size")
        block = GroupVec.from_bytes(G1Element, reader.take(block_len * pp.ctx.s1))
        fc_proof = FcBatchProof.from_bytes(
            reader.take(fc_proof_size(pp.mu, pp.ctx)), pp.fc.ell
        )
        root = reader.take(32)
        path_len = reader.u8()
        if path_len != pp.log_mu:
            raise WireError("membership path length mismatch")
        path = tuple(reader.take(32) for _ in range(path_len))
        f_digest = reader.take(32)
        records = []
        for _ in range(pp.log_mu):
            d_sib = G1Element.from_bytes(reader.take(pp.ctx.s1))
            y_sib = scalar_from_bytes(reader.take(32))
            d_par = G1Element.from_bytes(reader.take(pp.ctx.s1))
            y_par = scalar_from_bytes(reader.take(32))
            records.append((d_sib, y_sib, d_par, y_par))
        pc_proof = PcEvalProof.from_bytes(reader.take(1 + pp.log_nu * pp.ctx.s1))
        reader.expect_end()
        return cls(index, block, fc_proof, root, tuple(path), f_digest, tuple(records), pc_proof)


@dataclass(frozen=True)
class SubarrayOpening:
    """Step-1-only opening showing a block of subvector commitments."""

    index: int
    block: GroupVec
    fc_proof: FcBatchProof

    def to_bytes(self) -> bytes:
        return (
            u8(1)
            + u64(self.index)
            + u32(len(self.block))
            + self.block.to_bytes()
            + self.fc_proof.to_bytes()
        )

    @classmethod
    def from_bytes(cls, data: bytes, pp: VcParams) -> "SubarrayOpening":
        reader = Reader(data)
        if reader.u8() != 1:
            raise WireError("unsupported opening version")
        index = reader.u64()
        block_len = reader.u32()
        block = GroupVec.from_bytes(G1Element, reader.take(block_len * pp.ctx.s1))
        fc_proof = FcBatchProof.from_bytes(
            reader.take(fc_proof_size(pp.mu, pp.ctx)), pp.fc.ell
        )
        reader.expect_end()
        return cls(index, block, fc_proof)


def _layout(n_total: int) -> tuple[int, int]:
    if n_total < 1 or n_total & (n_total - 1):
        raise ValueError("vector length must be a power of two")
    log_n = n_total.bit_length() - 1
    mu = 1 << ((log_n + 1) // 2)
    return mu, n_total // mu


def vc_setup(
    ctx: BilinearCtx, n_total: int, b: int, seed: int | bytes | None = None
) -> VcParams:
    """Run both sub-setups for vectors of length ``n_total``.

    The layout is mu subvectors of length nu with mu*nu = N and
    mu = nu = sqrt(N) when log2 N is even (mu = 2*nu otherwise). The two
    trapdoors are independent; ``seed`` is a test/benchmark convenience
    and is documented as such on the sub-setups.
    """
    mu, nu = _layout(n_total)
    if not 1 <= b <= mu:
        raise ValueError(f"batch size must be in [1, {mu}], got {b}")
    fc_pp = fc_setup(ctx, mu, seed=seed)
    pc_pp = pc_setup(ctx, nu.bit_length() - 1, seed=seed)
    return VcParams(ctx=ctx, n_total=n_total, mu=mu, nu=nu, b=b, fc=fc_pp, pc=pc_pp)


def _subvector_polys(pp: VcParams, values) -> tuple[MultilinearPoly, ...]:
    return tuple(
        MultilinearPoly.from_vector(values[j * pp.nu : (j + 1) * pp.nu])
        for j in range(pp.mu)
    )


def vc_commit(pp: VcParams, values) -> tuple[VcCommitment, VcAux]:
    """Commit to a length-N scalar vector; deterministic in (pp, values)."""
    if len(values) != pp.n_total:
        raise ValueError(f"expected {pp.n_total} values, got {len(values)}")
    polys = _subvector_polys(pp, values)
    comms = pmap(lambda f: pc_commit(pp.pc, f).value, polys)
    cvec = GroupVec.from_elements(comms)
    top = fc_commit(pp.fc, cvec)
    return VcCommitment(top), VcAux(cvec, polys, top)


def _f_digest(poly: MultilinearPoly) -> bytes:
    return hash_bytes(b"VC/fdigest", poly.table_bytes())


def _challenges(root: bytes, mu: int) -> list[int]:
    return [hash_to_scalar(DOMAIN_H, root + u32(j)) for j in range(mu)]


def _fold_state(pp: VcParams, aux: VcAux, rs: list[int]) -> FoldState:
    tables = tuple(
        tuple(r * x % P for x in poly.table) for r, poly in zip(rs, aux.polys)
    )
    counters.record("field_ops", pp.mu * pp.nu)
    commitments = aux.commitments.mul_each(rs)
    levels = [FoldLevel(commitments, tables)]
    while len(levels[-1].tables) > 1:
        prev = levels[-1]
        count = len(prev.tables) // 2
        even = prev.commitments.select(range(0, 2 * count, 2))
        odd = prev.commitments.select(range(1, 2 * count, 2))
        next_tables = tuple(
            tuple((a + b) % P for a, b in zip(prev.tables[2 * i], prev.tables[2 * i + 1]))
            for i in range(count)
        )
        counters.record("field_ops", count * pp.nu)
        levels.append(FoldLevel(even.hadamard(odd), next_tables))
    return FoldState(tuple(levels))


def _check_fold_state(pp: VcParams, state: FoldState) -> None:
    """Debug assertions: per-node commitment/table consistency (O(N) commits)."""
    for lvl, level in enumerate(state.levels):
        for w, table in enumerate(level.tables):
            expected = pc_commit(pp.pc, MultilinearPoly(table, pp.log_nu)).value
            if level.commitments[w] != expected:
                raise AssertionError(f"fold node ({lvl}, {w}): commitment mismatch")
        if lvl:
            below = state.levels[lvl - 1]
            for w, table in enumerate(level.tables):
                both = zip(below.tables[2 * w], below.tables[2 * w + 1])
                if tuple((x + y) % P for x, y in both) != table:
                    raise AssertionError(f"fold node ({lvl}, {w}): table sum mismatch")
                product = below.commitments[2 * w] * below.commitments[2 * w + 1]
                if product != level.commitments[w]:
                    raise AssertionError(f"fold node ({lvl}, {w}): product mismatch")


def vc_open_all(
    pp: VcParams,
    aux: VcAux,
    values,
    check_fold: bool = False,
    _unit_challenges: bool = False,
) -> list[VcOpening]:
    """Generate all N openings (two runs on equal input are byte-identical).

    ``check_fold`` turns on the per-node fold-tree assertions (costly:
    one commitment per node). ``_unit_challenges`` forces every r_j to 1,
    a hook for column-sum tests only.
    """
    openings, _ = _open_all_state(pp, aux, values, check_fold, _unit_challenges)
    aux._openings = openings
    return openings


def _open_all_state(pp, aux, values, check_fold=False, _unit_challenges=False):
    if len(values) != pp.n_total:
        raise ValueError(f"expected {pp.n_total} values, got {len(values)}")
    if len(aux.commitments) != pp.mu or len(aux.polys) != pp.mu:
        raise ValueError("auxiliary data does not match the layout")
    for j, poly in enumerate(aux.polys):
        if poly.table != tuple(
            x % P for x in values[j * pp.nu : (j + 1) * pp.nu]
        ):
            raise ValueError(f"auxiliary polynomial {j} is inconsistent with the vector")

    commitment = VcCommitment(aux.top_commitment(pp))

    # Step 1: one unit-vector batch proof per block of commitments.
    def prove_block(k: int) -> FcBatchProof:
        idx = pp.block_indices(k)
        ys = [aux.commitments[j] for j in idx]
        return fc_bopen_units(pp.fc, commitment.fc, aux.commitments, idx, ys)

    block_proofs = pmap(prove_block, list(range(pp.block_count)))

    # Step 2: Merkle-commit the leaves, derive r_j, fold, batch-evaluate.
    digests = [_f_digest(poly) for poly in aux.polys]
    leaves = [
        aux.commitments[j].to_bytes() + digests[j] for j in range(pp.mu)
    ]
    tree = MerkleTree(leaves)
    rs = [1] * pp.mu if _unit_challenges else _challenges(tree.root, pp.mu)
    state = _fold_state(pp, aux, rs)
    if check_fold:
        _check_fold_state(pp, state)
    g_star = MultilinearPoly(state.root_table, pp.log_nu)
    hyper = pc_hyper_eval(pp.pc, g_star)

    # everything that depends on the leaf or block alone is shared across
    # the nu (resp. nu*b) openings that reference it
    blocks = [
        aux.commitments.slice(pp.block_indices(k)[0], pp.block_indices(k)[-1] + 1)
        for k in range(pp.block_count)
    ]
    paths = [tuple(tree.path(j)) for j in range(pp.mu)]
    node_elems = [list(level.commitments) for level in state.levels]
    skeletons = []
    for j in range(pp.mu):
        chain, node = [], j
        for h in range(pp.log_mu):
            chain.append(
                (node_elems[h][node ^ 1], state.levels[h].tables[node ^ 1],
                 node_elems[h + 1][node >> 1], state.levels[h + 1].tables[node >> 1])
            )
            node >>= 1
        skeletons.append(chain)

    openings = []
    for i in range(pp.n_total):
        j, a = divmod(i, pp.nu)
        records = tuple(
            (sib, sib_table[a], par, par_table[a])
            for sib, sib_table, par, par_table in skeletons[j]
        )
        openings.append(
            VcOpening(
                index=i,
                block=blocks[j // pp.b],
                fc_proof=block_proofs[j // pp.b],
                root=tree.root,
                path=paths[j],
                f_digest=digests[j],
                records=records,
                pc_proof=hyper[a][1],
            )
        )
    return openings, state


def vc_open(pp: VcParams, aux: VcAux, index: int, values) -> VcOpening:
    """Return the opening for one index, generating and caching all of them."""
    if not 0 <= index < pp.n_total:
        raise IndexError(f"index {index} out of range [0, {pp.n_total})")
    if aux._openings is None:
        vc_open_all(pp, aux, values)
    return aux._openings[index]


def vc_verify(
    pp: VcParams, commitment: VcCommitment, index: int, value: int, opening: VcOpening
) -> bool:
    """Check one opening; False on any failed sub-check."""
    if not 0 <= index < pp.n_total:
        raise IndexError(f"index {index} out of range [0, {pp.n_total})")
    if opening.index != index:
        return False
    j, a = divmod(index, pp.nu)
    k = j // pp.b
    idx = pp.block_indices(k)
    if len(opening.block) != len(idx) or len(opening.records) != pp.log_mu:
        return False
    if len(opening.path) != pp.log_mu or len(opening.root) != 32:
        return False
    if len(opening.f_digest) != 32:
        return False

    block_elems = list(opening.block)
    if not fc_bverify_units(pp.fc, commitment.fc, idx, block_elems, opening.fc_proof):
        return False

    c_j = block_elems[j - idx[0]]
    leaf = c_j.to_bytes() + opening.f_digest
    if not merkle_verify(opening.root, j, leaf, opening.path):
        return False

    r_j = hash_to_scalar(DOMAIN_H, opening.root + u32(j))
    y = r_j * (value % P) % P
    d = c_j ** r_j
    for d_sib, y_sib, d_par, y_par in opening.records:
        y = (y + y_sib) % P
        d = d * d_sib
        if d != d_par or y != y_par:
            return False
    return pc_verify(pp.pc, PcCommitment(d), bits(a, pp.log_nu), y, opening.pc_proof)


def vc_open_subarrays(pp: VcParams, aux: VcAux, m_count: int) -> list[SubarrayOpening]:
    """Openings proving each of ``m_count`` consecutive sub-arrays at once.

    The partition must align with subvector boundaries (m_count divides mu);
    each opening is the Step-1 batch proof for its span of commitments.
    """
    if m_count < 1 or pp.mu % m_count != 0:
        raise ValueError("sub-array count must divide the subvector count")
    width = pp.mu // m_count
    commitment = VcCommitment(aux.top_commitment(pp))

    def prove(j: int) -> SubarrayOpening:
        idx = list(range(j * width, (j + 1) * width))
        ys = [aux.commitments[t] for t in idx]
        proof = fc_bopen_units(pp.fc, commitment.fc, aux.commitments, idx, ys)
        return SubarrayOpening(j, aux.commitments.slice(idx[0], idx[-1] + 1), proof)

    return pmap(prove, list(range(m_count)))


def vc_verify_subarray(
    pp: VcParams,
    commitment: VcCommitment,
    index: int,
    values,
    opening: SubarrayOpening,
) -> bool:
    """Check that ``values`` is the ``index``-th sub-array of the committed vector.

    The verifier recommits every contained subvector polynomial itself and
    compares against the proven commitment block.
    """
    if len(values) % pp.nu != 0 or len(values) == 0:
        raise ValueError("sub-array must cover whole subvectors")
    width = len(values) // pp.nu
    if pp.mu % width != 0 or opening.index != index:
        return False
    start = index * width
    if start + width > pp.mu or len(opening.block) != width:
        return False
    idx = list(range(start, start + width))
    if not fc_bverify_units(
        pp.fc, commitment.fc, idx, list(opening.block), opening.fc_proof
    ):
        return False
    for t in range(width):
        poly = MultilinearPoly.from_vector(values[t * pp.nu : (t + 1) * pp.nu])
        if pc_commit(pp.pc, poly).value != opening.block[t]:
            return False
    return True


# ---------------------------------------------------------------------------
# aux persistence (prover-side state for the CLI workflows)


def save_aux(pp: VcParams, aux: VcAux) -> bytes:
    out = [u64(pp.mu), aux.commitments.to_bytes()]
    for poly in aux.polys:
        out.append(poly.table_bytes())
    return b"".join(out)


def load_aux(data: bytes, pp: VcParams) -> VcAux:
    reader = Reader(data)
    mu = reader.u64()
    if mu != pp.mu:
        raise WireError("auxiliary data does not match the parameters")
    cvec = GroupVec.from_bytes(G1Element, reader.take(mu * pp.ctx.s1))
    polys = []
    for _ in range(mu):
        table = tuple(
            scalar_from_bytes(reader.take(32)) for _ in range(pp.nu)
        )
        polys.append(MultilinearPoly(table, pp.log_nu))
    reader.expect_end()
    return VcAux(cvec, tuple(polys))


# ---------------------------------------------------------------------------
# parameter persistence


def save_params(pp: VcParams) -> bytes:
    curve = pp.ctx.curve_id.encode()
    out = [
        PARAMS_MAGIC,
        u32(len(curve)),
        curve,
        u64(pp.n_total),
        u64(pp.mu),
        u64(pp.nu),
        u64(pp.b),
        u64(pp.fc.n),
        pp.fc.v.to_bytes(),
        pp.fc.g1_beta.to_bytes(),
        pp.fc.g2_odd.to_bytes(),
        u64(pp.pc.k),
        pp.pc.srs_mono.to_bytes(),
        pp.pc.g2_s.to_bytes(),
    ]
    return b"".join(out)


def load_params(data: bytes, ctx: BilinearCtx) -> VcParams:
    from .curve import G2Element
    from .pc import _monomial_to_lagrange

    reader = Reader(data)
    if reader.take(len(PARAMS_MAGIC)) != PARAMS_MAGIC:
        raise WireError("bad magic: not a parameters file")
    curve = reader.take(reader.u32()).decode()
    if curve != ctx.curve_id:
        raise WireError(f"parameters are for curve {curve!r}, context is {ctx.curve_id!r}")
    n_total, mu, nu, b = reader.u64(), reader.u64(), reader.u64(), reader.u64()
    if (mu, nu) != _layout(n_total) or not 1 <= b <= mu:
        raise WireError("inconsistent layout fields")
    fc_n = reader.u64()
    if fc_n != mu:
        raise WireError("inconsistent key length")
    ell = fc_n.bit_length() - 1
    v = GroupVec.from_bytes(G2Element, reader.take(fc_n * ctx.s2))
    g1_beta = G1Element.from_bytes(reader.take(ctx.s1))
    g2_odd = GroupVec.from_bytes(G2Element, reader.take((fc_n - 1) * ctx.s2))
    fc_pp = FcParams(ctx=ctx, n=fc_n, ell=ell, v=v, g1_beta=g1_beta, g2_odd=g2_odd)
    k = reader.u64()
    if 1 << k != nu:
        raise WireError("inconsistent variable count")
    srs_mono = GroupVec.from_bytes(G1Element, reader.take((1 << k) * ctx.s1))
    g2_s = GroupVec.from_bytes(G2Element, reader.take(k * ctx.s2))
    reader.expect_end()
    levels = [None] * (k + 1)
    levels[k] = _monomial_to_lagrange(srs_mono, k)
    for d in range(k - 1, -1, -1):
        lo, hi = levels[d + 1].halves()
        levels[d] = lo.hadamard(hi)
    pc_pp = PcParams(
        ctx=ctx, k=k, srs_mono=srs_mono, g2_s=g2_s, lagrange=tuple(levels)
    )
    return VcParams(ctx=ctx, n_total=n_total, mu=mu, nu=nu, b=b, fc=fc_pp, pc=pc_pp)
