"""Bilinear group context and group element types over BN254.

Elements are immutable wrappers around the backend's uncompressed affine
encodings; equality is byte equality (the encoding is canonical). The
group law is written multiplicatively to match commitment-scheme usage:
``a * b`` combines elements, ``a ** k`` raises to a scalar, ``~a`` or
``a.inv()`` inverts.

Wire encodings are the compressed canonical forms: 32 bytes for G1,
64 for G2, 384 for GT (full extension-field element), 32-byte big-endian
scalars. These exact byte strings are what transcripts absorb.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _native, counters
from ._native import BackendError

__all__ = [
    "SCALAR_ORDER",
    "BackendError",
    "BilinearCtx",
    "G1Element",
    "G2Element",
    "GTElement",
    "default_ctx",
    "scalar_from_bytes",
    "scalar_inv",
    "scalar_to_bytes",
]

# Order of G1/G2/GT and of the scalar field (BN254 / BN_SNARK1).
SCALAR_ORDER = (
    21888242871839275222246405745257275088548364400416034343698204186575808495617
)

SCALAR_BYTES = 32

if _native.fr_modulus() != SCALAR_ORDER:
    raise ImportError("pairing backend scalar field does not match BN254")


def scalar_to_bytes(x: int) -> bytes:
    """Canonical 32-byte big-endian encoding of a scalar in [0, p)."""
    return (x % SCALAR_ORDER).to_bytes(SCALAR_BYTES, "big")


def scalar_from_bytes(data: bytes) -> int:
    """Parse a canonical scalar; reject non-canonical (>= p) encodings."""
    if len(data) != SCALAR_BYTES:
        raise ValueError(f"scalar must be {SCALAR_BYTES} bytes, got {len(data)}")
    value = int.from_bytes(data, "big")
    if value >= SCALAR_ORDER:
        raise ValueError("non-canonical scalar encoding")
    return value


def scalar_inv(x: int) -> int:
    if x % SCALAR_ORDER == 0:
        raise ZeroDivisionError("scalar has no inverse")
    return pow(x, -1, SCALAR_ORDER)


def _fr(x: int) -> bytes:
    return (x % SCALAR_ORDER).to_bytes(SCALAR_BYTES, "little")


class _Element:
    """Shared machinery for G1/G2/GT wrapper types."""

    __slots__ = ("data",)

    _raw_len = 0
    _wire_len = 0
    _prefix = ""
    _exp_counter = ""

    def __init__(self, data: bytes):
        if len(data) != self._raw_len:
            raise ValueError(
                f"{type(self).__name__} expects {self._raw_len} raw bytes"
            )
        object.__setattr__(self, "data", bytes(data))

    def __setattr__(self, *args):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        return type(other) is type(self) and other.data == self.data

    def __hash__(self):
        return hash((type(self).__name__, self.data))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_bytes().hex()[:16]}…)"

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        op = "bk_gt_mul" if self._prefix == "gt" else f"bk_{self._prefix}_add"
        return type(self)(_native.call(op, self.data, other.data, out_size=self._raw_len))

    def __pow__(self, exponent: int):
        counters.record(self._exp_counter)
        op = "bk_gt_exp" if self._prefix == "gt" else f"bk_{self._prefix}_mul"
        return type(self)(
            _native.call(op, self.data, _fr(exponent), out_size=self._raw_len)
        )

    def inv(self):
        op = "bk_gt_inv" if self._prefix == "gt" else f"bk_{self._prefix}_neg"
        return type(self)(_native.call(op, self.data, out_size=self._raw_len))

    def __invert__(self):
        return self.inv()

    def __truediv__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self * other.inv()

    @classmethod
    def identity(cls):
        op = "bk_gt_identity" if cls._prefix == "gt" else f"bk_{cls._prefix}_identity"
        return cls(_native.call(op, out_size=cls._raw_len))

    @classmethod
    def generator(cls):
        op = "bk_gt_generator" if cls._prefix == "gt" else f"bk_{cls._prefix}_generator"
        return cls(_native.call(op, out_size=cls._raw_len))


class G1Element(_Element):
    __slots__ = ()
    _raw_len = _native.G1_LEN
    _wire_len = _native.G1_COMP_LEN
    _prefix = "g1"
    _exp_counter = "g1_exp"

    def to_bytes(self) -> bytes:
        return _native.call("bk_g1_compress", self.data, out_size=self._wire_len)

    @classmethod
    def from_bytes(cls, data: bytes) -> "G1Element":
        if len(data) != cls._wire_len:
            raise ValueError(f"G1 wire encoding must be {cls._wire_len} bytes")
        element = cls(_native.call("bk_g1_decompress", data, out_size=cls._raw_len))
        # strict parsing: the backend tolerates non-canonical encodings of
        # the identity, which would make proof bytes malleable
        if element.to_bytes() != bytes(data):
            raise ValueError("non-canonical G1 encoding")
        return element


class G2Element(_Element):
    __slots__ = ()
    _raw_len = _native.G2_LEN
    _wire_len = _native.G2_COMP_LEN
    _prefix = "g2"
    _exp_counter = "g2_exp"

    def to_bytes(self) -> bytes:
        return _native.call("bk_g2_compress", self.data, out_size=self._wire_len)

    @classmethod
    def from_bytes(cls, data: bytes) -> "G2Element":
        if len(data) != cls._wire_len:
            raise ValueError(f"G2 wire encoding must be {cls._wire_len} bytes")
        element = cls(_native.call("bk_g2_decompress", data, out_size=cls._raw_len))
        if element.to_bytes() != bytes(data):
            raise ValueError("non-canonical G2 encoding")
        return element


class GTElement(_Element):
    __slots__ = ()
    _raw_len = _native.GT_LEN
    _wire_len = _native.GT_LEN
    _prefix = "gt"
    _exp_counter = "gt_exp"

    def to_bytes(self) -> bytes:
        return self.data

    @classmethod
    def from_bytes(cls, data: bytes) -> "GTElement":
        if len(data) != cls._wire_len:
            raise ValueError(f"GT wire encoding must be {cls._wire_len} bytes")
        if not _native.check("bk_gt_validate", data):
            raise ValueError("invalid GT element encoding")
        return cls(data)


@dataclass(frozen=True)
class BilinearCtx:
    """Description of the Type-3 bilinear group the library operates in.

    ``s1``/``s2``/``st`` are the wire encoding widths of G1/G2/GT elements;
    size bookkeeping throughout the package is derived from them.
    """

    curve_id: str = "bn254"
    order: int = SCALAR_ORDER
    s1: int = _native.G1_COMP_LEN
    s2: int = _native.G2_COMP_LEN
    st: int = _native.GT_LEN
    g1: G1Element = field(default_factory=G1Element.generator)
    g2: G2Element = field(default_factory=G2Element.generator)
    gt: GTElement = field(default_factory=GTElement.generator)

    def pairing(self, a: G1Element, b: G2Element) -> GTElement:
        counters.record("pairings")
        return GTElement(
            _native.call(
                "bk_multi_pairing", a.data, b.data, 1, out_size=_native.GT_LEN
            )
        )


_DEFAULT_CTX: BilinearCtx | None = None


def default_ctx() -> BilinearCtx:
    global _DEFAULT_CTX
    if _DEFAULT_CTX is None:
        _DEFAULT_CTX = BilinearCtx()
    return _DEFAULT_CTX
