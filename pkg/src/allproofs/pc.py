"""Multilinear polynomial commitment with per-variable quotient proofs.

Commitments are ``g1^f(s)`` for a trusted-setup point ``s``; an evaluation
proof for ``f(r) = y`` consists of one quotient commitment per variable,
from the decomposition ``f(X) - y = sum_a q_a(X) (X_a - r_a)``, checked
with k+1 pairings.

The published parameters are the monomial form ``g1^(prod_{a in S} s_a)``
for every subset S of variables (index = bitmask). Since polynomials are
handled as hypercube evaluation tables, setup also derives the equivalent
Lagrange bases - for the full cube and for every lower-dimensional cube the
quotients live on - so committing is always a single multi-exponentiation.

``hyper_eval`` produces the evaluation proofs for *all* 2^k hypercube
points in O(k 2^k) group operations: the quotient for the top variable is
shared by every point in a subtree, so one commitment per tree node covers
all leaves below it. Its per-point output is identical to ``pc_eval`` at
that point.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import counters
from .algebra import GroupVec, MultilinearPoly, multi_exp, pairing_prod
from .curve import (
    BilinearCtx,
    G1Element,
    G2Element,
    SCALAR_ORDER as P,
)
from .transcript import scalar_stream
from .wire import Reader, u8

__all__ = [
    "PcParams",
    "PcCommitment",
    "PcEvalProof",
    "pc_setup",
    "pc_commit",
    "pc_eval",
    "pc_verify",
    "pc_hyper_eval",
]


@dataclass(frozen=True)
class PcParams:
    """Multilinear SRS for k variables.

    ``srs_mono[m] = g1^(prod of s_a over set bits a of m)``;
    ``g2_s[a] = g2^(s_a)``; ``lagrange[d]`` is the hypercube-evaluation
    basis over the low d variables (derived, length 2^d). The trapdoor
    ``s`` is retained only under a test seed.
    """

    ctx: BilinearCtx
    k: int
    srs_mono: GroupVec
    g2_s: GroupVec
    lagrange: tuple[GroupVec, ...]
    s: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.srs_mono) != 1 << self.k or len(self.g2_s) != self.k:
            raise ValueError("SRS size does not match variable count")


@dataclass(frozen=True)
class PcCommitment:
    value: G1Element

    def to_bytes(self) -> bytes:
        return self.value.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "PcCommitment":
        return cls(G1Element.from_bytes(data))


@dataclass(frozen=True)
class PcEvalProof:
    """One quotient commitment per variable, ordered by variable index."""

    quotients: tuple[G1Element, ...]

    def to_bytes(self) -> bytes:
        return u8(len(self.quotients)) + b"".join(q.to_bytes() for q in self.quotients)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PcEvalProof":
        reader = Reader(data)
        k = reader.u8()
        quotients = tuple(G1Element.from_bytes(reader.take(32)) for _ in range(k))
        reader.expect_end()
        return cls(quotients)


def _monomial_to_lagrange(srs: GroupVec, k: int) -> GroupVec:
    """Tensor butterfly turning monomial SRS points into the Lagrange basis.

    Per variable a: (c_without, c_with) -> (c_without - c_with, c_with),
    i.e. the basis change (1, X_a) -> ((1 - X_a), X_a) applied group-side.
    """
    cur = srs
    for a in range(k):
        bit = 1 << a
        idx0 = [m for m in range(1 << k) if not m & bit]
        idx1 = [m | bit for m in idx0]
        lo = cur.select(idx0)
        hi = cur.select(idx1)
        new_lo = lo.sub_each(hi)
        parts = [b""] * (1 << k)
        w = cur._width
        for pos, m in enumerate(idx0):
            parts[m] = new_lo.data[pos * w : (pos + 1) * w]
            parts[m | bit] = hi.data[pos * w : (pos + 1) * w]
        cur = GroupVec(cur.cls, b"".join(parts))
    return cur


def pc_setup(ctx: BilinearCtx, k: int, seed: int | bytes | None = None) -> PcParams:
    """Sample an SRS for k-variable multilinear polynomials (k >= 0)."""
    if k < 0:
        raise ValueError("variable count must be non-negative")
    if seed is None:
        import secrets

        s = tuple(secrets.randbelow(P) for _ in range(k))
        return _params_from_trapdoor(ctx, k, s, keep_trapdoor=False)
    stream = scalar_stream(seed, b"pc-setup")
    s = tuple(next(stream) for _ in range(k))
    return _params_from_trapdoor(ctx, k, s, keep_trapdoor=True)


def _params_from_trapdoor(
    ctx: BilinearCtx, k: int, s: tuple[int, ...], keep_trapdoor: bool
) -> PcParams:
    expo = [1] * (1 << k)
    for a in range(k):
        bit = 1 << a
        for m in range(bit):
            expo[m | bit] = expo[m] * s[a] % P
    srs_mono = GroupVec.fixed_base(ctx.g1, expo)
    g2_s = (
        GroupVec.fixed_base(ctx.g2, list(s)) if k else GroupVec.empty(G2Element)
    )
    levels = [None] * (k + 1)
    levels[k] = _monomial_to_lagrange(srs_mono, k)
    for d in range(k - 1, -1, -1):
        lo, hi = levels[d + 1].halves()
        levels[d] = lo.hadamard(hi)
    return PcParams(
        ctx=ctx,
        k=k,
        srs_mono=srs_mono,
        g2_s=g2_s,
        lagrange=tuple(levels),
        s=s if keep_trapdoor else None,
    )


def pc_commit(pp: PcParams, f: MultilinearPoly) -> PcCommitment:
    if f.k != pp.k:
        raise ValueError(f"polynomial has {f.k} variables, SRS supports {pp.k}")
    return PcCommitment(multi_exp(pp.lagrange[pp.k], f.table))


def _eval_with_quotients(pp: PcParams, f: MultilinearPoly, point):
    """Restrict variables top-down; returns (y, quotient tables, commitments).

    Restricting the top variable X_d at r leaves quotient q_d = f_hi - f_lo
    (independent of r) and remainder (1-r) f_lo + r f_hi.
    """
    cur = list(f.table)
    tables = [None] * pp.k
    comms = [None] * pp.k
    for a in range(pp.k - 1, -1, -1):
        r = point[pp.k - 1 - a] % P
        half = 1 << a
        diff = [(cur[i + half] - cur[i]) % P for i in range(half)]
        tables[a] = diff
        comms[a] = multi_exp(pp.lagrange[a], diff)
        cur = [(cur[i] + r * diff[i]) % P for i in range(half)]
        counters.record("field_ops", 3 * half)
    return cur[0], tables, comms


def pc_eval(pp: PcParams, f: MultilinearPoly, point) -> tuple[int, PcEvalProof]:
    """Evaluate f at ``point`` and prove it; y is recomputed, never trusted."""
    if f.k != pp.k or len(point) != pp.k:
        raise ValueError(f"expected a {pp.k}-variable polynomial and point")
    y, _, comms = _eval_with_quotients(pp, f, point)
    return y, PcEvalProof(tuple(comms))


def pc_verify(
    pp: PcParams, commitment: PcCommitment, point, y: int, proof: PcEvalProof
) -> bool:
    """Check e(C / g1^y, g2) = prod_a e(q_a, g2^(s_a - r_a))."""
    if len(point) != pp.k:
        raise ValueError(f"point must have {pp.k} coordinates")
    if len(proof.quotients) != pp.k:
        raise ValueError(f"proof must have {pp.k} quotients")
    ctx = pp.ctx
    from .curve import GTElement

    lhs = ctx.pairing(commitment.value * (ctx.g1 ** y).inv(), ctx.g2)
    if pp.k == 0:
        return lhs == GTElement.identity()
    g2_terms = GroupVec.from_elements(
        [
            pp.g2_s[a] * (ctx.g2 ** (point[pp.k - 1 - a] % P)).inv()
            for a in range(pp.k)
        ]
    )
    rhs = pairing_prod(GroupVec.from_elements(list(proof.quotients)), g2_terms)
    return lhs == rhs


def pc_hyper_eval(pp: PcParams, f: MultilinearPoly):
    """Evaluation proofs for every hypercube point, ordered by index.

    One quotient commitment is computed per binary-tree node and shared by
    all points underneath, for O(k 2^k) total group work. Entry i equals
    ``(f.table[i], pc_eval(pp, f, bits(i, k)).proof)``.
    """
    if f.k != pp.k:
        raise ValueError(f"polynomial has {f.k} variables, SRS supports {pp.k}")
    results: list[tuple[int, PcEvalProof]] = []
    stack: list[G1Element] = []

    def descend(table: list[int], d: int) -> None:
        if d == 0:
            results.append((table[0], PcEvalProof(tuple(reversed(stack)))))
            return
        half = 1 << (d - 1)
        diff = [(table[i + half] - table[i]) % P for i in range(half)]
        counters.record("field_ops", half)
        stack.append(multi_exp(pp.lagrange[d - 1], diff))
        descend(table[:half], d - 1)
        descend(table[half:], d - 1)
        stack.pop()

    descend(list(f.table), pp.k)
    return results
