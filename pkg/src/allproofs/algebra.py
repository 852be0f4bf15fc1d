"""Vector and polynomial arithmetic over the bilinear group.

Scalar vectors are plain lists of ints reduced mod the group order;
group vectors are packed buffers so that batch operations (multi-
exponentiation, pairing products, halving folds) cross into the native
backend once per call instead of once per element.

Index convention for multilinear polynomials: a table of length 2^k lists
evaluations over the boolean hypercube, entry ``i`` at the point
``bits(i, k)`` = (i_{k-1}, ..., i_0). Evaluation points use the same
ordering, so ``x[0]`` is the coordinate of the highest-numbered variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Type, Union

from . import _native, counters
from .curve import (
    SCALAR_ORDER,
    G1Element,
    G2Element,
    GTElement,
    scalar_to_bytes,
)

P = SCALAR_ORDER

ScalarVec = Sequence[int]


def _fr_buf(scalars: ScalarVec) -> bytes:
    return b"".join((x % P).to_bytes(32, "little") for x in scalars)


class GroupVec:
    """Ordered vector of elements from one source group (G1 or G2)."""

    __slots__ = ("cls", "data")

    def __init__(self, cls: Type, data: bytes):
        if cls not in (G1Element, G2Element):
            raise TypeError("GroupVec holds G1 or G2 elements")
        if len(data) % cls._raw_len != 0:
            raise ValueError("buffer length is not a multiple of the element size")
        self.cls = cls
        self.data = bytes(data)

    @classmethod
    def from_elements(cls, elements: Sequence) -> "GroupVec":
        if not elements:
            raise ValueError("cannot infer group of an empty vector; use empty()")
        ecls = type(elements[0])
        if any(type(e) is not ecls for e in elements):
            raise ValueError("mixed groups in one vector")
        return cls(ecls, b"".join(e.data for e in elements))

    @classmethod
    def empty(cls, ecls: Type) -> "GroupVec":
        return cls(ecls, b"")

    @classmethod
    def fill(cls, element, n: int) -> "GroupVec":
        return cls(type(element), element.data * n)

    @property
    def _prefix(self) -> str:
        return self.cls._prefix

    @property
    def _width(self) -> int:
        return self.cls._raw_len

    def __len__(self) -> int:
        return len(self.data) // self._width

    def __getitem__(self, i: int):
        n = len(self)
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for vector of length {n}")
        w = self._width
        return self.cls(self.data[i * w : (i + 1) * w])

    def __iter__(self) -> Iterator:
        w = self._width
        return (self.cls(self.data[i * w : (i + 1) * w]) for i in range(len(self)))

    def __eq__(self, other):
        return (
            isinstance(other, GroupVec)
            and other.cls is self.cls
            and other.data == self.data
        )

    def __repr__(self):
        return f"GroupVec({self.cls.__name__} x {len(self)})"

    def halves(self) -> tuple["GroupVec", "GroupVec"]:
        n = len(self)
        if n % 2 != 0:
            raise ValueError("cannot halve a vector of odd length")
        mid = (n // 2) * self._width
        return GroupVec(self.cls, self.data[:mid]), GroupVec(self.cls, self.data[mid:])

    def slice(self, start: int, stop: int) -> "GroupVec":
        w = self._width
        if not 0 <= start <= stop <= len(self):
            raise IndexError("slice out of range")
        return GroupVec(self.cls, self.data[start * w : stop * w])

    def select(self, indices: Sequence[int]) -> "GroupVec":
        w = self._width
        n = len(self)
        parts = []
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"index {i} out of range for vector of length {n}")
            parts.append(self.data[i * w : (i + 1) * w])
        return GroupVec(self.cls, b"".join(parts))

    def concat(self, other: "GroupVec") -> "GroupVec":
        if other.cls is not self.cls:
            raise ValueError("cannot concatenate vectors over different groups")
        return GroupVec(self.cls, self.data + other.data)

    def _vec_call(self, op: str, *args, count: int) -> "GroupVec":
        out = _native.call(
            f"bk_{self._prefix}_{op}", *args, len(self), out_size=len(self.data)
        )
        if count:
            counters.record(f"{self._prefix}_exp", count)
        return GroupVec(self.cls, out)

    def hadamard(self, other: "GroupVec") -> "GroupVec":
        if other.cls is not self.cls or len(other) != len(self):
            raise ValueError("hadamard requires same group and equal lengths")
        return self._vec_call("hadamard", self.data, other.data, count=0)

    def sub_each(self, other: "GroupVec") -> "GroupVec":
        if other.cls is not self.cls or len(other) != len(self):
            raise ValueError("sub_each requires same group and equal lengths")
        return self._vec_call("sub_each", self.data, other.data, count=0)

    def pow(self, exponent: int) -> "GroupVec":
        return self._vec_call(
            "scale", self.data, _fr_buf([exponent]), count=len(self)
        )

    def mul_each(self, scalars: ScalarVec) -> "GroupVec":
        if len(scalars) != len(self):
            raise ValueError("scalar count must match vector length")
        return self._vec_call("mul_each", self.data, _fr_buf(scalars), count=len(self))

    def fold(self, right: "GroupVec", x: int) -> "GroupVec":
        """self[i] * right[i]^x, the halving step of the recursive argument."""
        if right.cls is not self.cls or len(right) != len(self):
            raise ValueError("fold requires same group and equal lengths")
        return self._vec_call("fold", self.data, right.data, _fr_buf([x]), count=len(self))

    def msm(self, scalars: ScalarVec):
        if len(scalars) != len(self):
            raise ValueError("scalar count must match vector length")
        counters.record(f"{self._prefix}_exp", len(self))
        return self.cls(
            _native.call(
                f"bk_{self._prefix}_msm",
                self.data,
                _fr_buf(scalars),
                len(self),
                out_size=self._width,
            )
        )

    def to_bytes(self) -> bytes:
        """Concatenated compressed encodings (the wire/transcript form)."""
        return b"".join(e.to_bytes() for e in self)

    @classmethod
    def from_bytes(cls, ecls: Type, data: bytes) -> "GroupVec":
        w = ecls._wire_len
        if len(data) % w != 0:
            raise ValueError("wire buffer length is not a multiple of element size")
        elems = [ecls.from_bytes(data[i : i + w]) for i in range(0, len(data), w)]
        if not elems:
            return cls.empty(ecls)
        return cls.from_elements(elems)

    @classmethod
    def fixed_base(cls, base, scalars: ScalarVec) -> "GroupVec":
        """(base^s for s in scalars) in one backend call."""
        ecls = type(base)
        counters.record(f"{ecls._prefix}_exp", len(scalars))
        out = _native.call(
            f"bk_{ecls._prefix}_fixed_mul",
            base.data,
            _fr_buf(scalars),
            len(scalars),
            out_size=len(scalars) * ecls._raw_len,
        )
        return cls(ecls, out)


def multi_exp(vec: GroupVec, scalars: ScalarVec):
    """prod_i vec[i]^scalars[i]; the identity for empty inputs."""
    if len(vec) != len(scalars):
        raise ValueError("multi_exp requires equal lengths")
    if len(vec) == 0:
        return vec.cls.identity()
    return vec.msm(scalars)


def pairing_prod(a: GroupVec, b: GroupVec) -> GTElement:
    """prod_i e(a[i], b[i]); the GT identity for empty inputs."""
    if a.cls is not G1Element or b.cls is not G2Element:
        raise ValueError("pairing_prod takes a G1 vector and a G2 vector")
    if len(a) != len(b):
        raise ValueError("pairing_prod requires equal lengths")
    counters.record("pairings", len(a))
    return GTElement(
        _native.call(
            "bk_multi_pairing", a.data, b.data, len(a), out_size=_native.GT_LEN
        )
    )


def hadamard(a: GroupVec, b: GroupVec) -> GroupVec:
    return a.hadamard(b)


def vec_pow(a: GroupVec, x: int) -> GroupVec:
    return a.pow(x)


def split_lr(v: Union[GroupVec, ScalarVec]):
    """Split into (left half, right half), preserving order."""
    if isinstance(v, GroupVec):
        return v.halves()
    n = len(v)
    if n % 2 != 0:
        raise ValueError("cannot halve a vector of odd length")
    return list(v[: n // 2]), list(v[n // 2 :])


def bits(i: int, k: int) -> tuple[int, ...]:
    """Bit decomposition (i_{k-1}, ..., i_0) of a k-bit integer."""
    if not 0 <= i < (1 << k):
        raise ValueError(f"{i} is not a {k}-bit integer")
    return tuple((i >> a) & 1 for a in range(k - 1, -1, -1))


@dataclass(frozen=True)
class MultilinearPoly:
    """Multilinear polynomial given by its boolean-hypercube evaluations."""

    table: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.table) != 1 << self.k:
            raise ValueError("table length must be 2^k")
        object.__setattr__(self, "table", tuple(x % P for x in self.table))

    @classmethod
    def from_vector(cls, values: ScalarVec) -> "MultilinearPoly":
        n = len(values)
        if n == 0 or n & (n - 1):
            raise ValueError("vector length must be a power of two")
        return cls(tuple(values), n.bit_length() - 1)

    def scale(self, r: int) -> "MultilinearPoly":
        counters.record("field_ops", len(self.table))
        return MultilinearPoly(tuple(r * x % P for x in self.table), self.k)

    def add(self, other: "MultilinearPoly") -> "MultilinearPoly":
        if other.k != self.k:
            raise ValueError("variable counts differ")
        counters.record("field_ops", len(self.table))
        return MultilinearPoly(
            tuple((a + b) % P for a, b in zip(self.table, other.table)), self.k
        )

    def table_bytes(self) -> bytes:
        return b"".join(scalar_to_bytes(x) for x in self.table)


def mle_eval(f: MultilinearPoly, point: ScalarVec) -> int:
    """Evaluate the multilinear extension at ``point`` in O(2^k) field ops.

    ``point`` is ordered (x_{k-1}, ..., x_0): coordinate j binds the same
    variable as bit j of a table index, so f(bits(i, k)) == table[i].
    """
    if len(point) != f.k:
        raise ValueError(f"point has {len(point)} coordinates, poly has {f.k}")
    cur = list(f.table)
    for x in point:
        half = len(cur) // 2
        x = x % P
        cur = [(cur[i] + x * (cur[i + half] - cur[i])) % P for i in range(half)]
    counters.record("field_ops", max(0, 2 * (len(f.table) - 1)))
    return cur[0]
