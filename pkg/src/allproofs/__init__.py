"""Pairing-based commitments with batch openings and linear-time OpenAll.

The package provides three layered schemes over one bilinear group:

- ``fc``: a functional commitment for multi-exponentiations over G1 with
  batch opening of many linear claims in a single logarithmic-size proof;
- ``pc``: a multilinear polynomial commitment with per-variable quotient
  proofs and batched generation of all hypercube evaluation proofs;
- ``vc``: a two-layer vector commitment whose ``open_all`` produces all N
  per-index opening proofs in linear time, tunable by a batch size ``b``;
- ``evalproof``: evaluation proofs for the committed vector's multilinear
  extension at arbitrary points, the interface proof systems consume.

``cli`` exposes the command-line harness (setup/commit/open/verify plus
benchmark and self-test commands).
"""

from .curve import BilinearCtx, G1Element, G2Element, GTElement, default_ctx
from .algebra import GroupVec, MultilinearPoly, bits, mle_eval, multi_exp, pairing_prod

__all__ = [
    "BilinearCtx",
    "G1Element",
    "G2Element",
    "GTElement",
    "GroupVec",
    "MultilinearPoly",
    "bits",
    "default_ctx",
    "mle_eval",
    "multi_exp",
    "pairing_prod",
]

__version__ = "0.1.0"
