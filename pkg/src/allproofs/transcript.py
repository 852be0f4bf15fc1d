"""Deterministic challenge derivation and the Merkle tree for openings.

Both random oracles are built from one primitive, SHA-256, using the
standard hash-then-expand pattern for hash-to-field: the oracle name and
message are absorbed once, and the digest is expanded to 64 bytes (twice
the scalar width) before modular reduction, so the bias is negligible.
Challenges are always nonzero: a zero reduction is retried with an
appended counter byte.

The byte strings absorbed for each protocol challenge are normative wire
contract; the protocol modules document their exact layouts.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, Sequence

from .curve import SCALAR_ORDER, scalar_to_bytes
from .wire import u32, u64

DOMAIN_H = b"FC/H"
DOMAIN_H_PRIME = b"FC/Hprime"

_NODE_LEN = 32


def _expand64(state: "hashlib._Hash", domain: bytes) -> bytes:
    """64-byte expansion of an absorbed state (wide-reduction width)."""
    b0 = state.digest()
    return (
        hashlib.sha256(b0 + b"\x01" + domain).digest()
        + hashlib.sha256(b0 + b"\x02" + domain).digest()
    )


def _base_state(domain: bytes, chunks: Iterable[bytes]) -> "hashlib._Hash":
    state = hashlib.sha256()
    state.update(u32(len(domain)) + domain)
    for chunk in chunks:
        state.update(chunk)
    return state


def hash_to_scalar(domain: bytes, *chunks: bytes) -> int:
    """Map bytes to a nonzero scalar under the named oracle.

    Chunks are absorbed in order without framing; callers define the
    normative layout of their payloads.
    """
    state = _base_state(domain, chunks)
    counter = 0
    while True:
        fork = state.copy()
        if counter:
            fork.update(bytes([counter]))
        value = int.from_bytes(_expand64(fork, domain), "big") % SCALAR_ORDER
        if value != 0:
            return value
        counter += 1


def hash_bytes(tag: bytes, *chunks: bytes) -> bytes:
    """Domain-tagged 32-byte digest (Merkle nodes, data digests)."""
    state = hashlib.sha256()
    state.update(u32(len(tag)) + tag)
    for chunk in chunks:
        state.update(chunk)
    return state.digest()


def encode_scalars(values: Sequence[int]) -> bytes:
    """Length-prefixed canonical encoding of a scalar vector."""
    return u32(len(values)) + b"".join(scalar_to_bytes(v) for v in values)


def scalar_stream(seed: int | bytes, label: bytes) -> Iterator[int]:
    """Deterministic stream of scalars for seeded setups and test data."""
    if isinstance(seed, int):
        seed = seed.to_bytes(16, "big", signed=False)
    counter = 0
    while True:
        value = (
            int.from_bytes(
                _expand64(_base_state(b"DRBG", (label, seed, u64(counter))), b"DRBG"),
                "big",
            )
            % SCALAR_ORDER
        )
        counter += 1
        yield value


class Transcript:
    """Running Fiat-Shamir state: absorb messages, squeeze challenges.

    Identical absorb sequences give identical challenges; each squeezed
    challenge is folded back into the state so later challenges depend on
    earlier ones.
    """

    def __init__(self, label: bytes = b"transcript"):
        self._state = _base_state(b"TRANSCRIPT", (u32(len(label)), label))
        self.absorbed = 0

    def absorb(self, label: bytes, data: bytes) -> None:
        self._state.update(u32(len(label)) + label)
        self._state.update(u64(len(data)) + data)
        self.absorbed += 1

    def challenge_scalar(self, label: bytes) -> int:
        counter = 0
        while True:
            fork = self._state.copy()
            fork.update(u32(len(label)) + label + u32(counter))
            value = (
                int.from_bytes(_expand64(fork, b"TRANSCRIPT"), "big") % SCALAR_ORDER
            )
            if value != 0:
                break
            counter += 1
        self.absorb(b"challenge/" + label, scalar_to_bytes(value))
        return value


class MerkleTree:
    """Binary hash tree over byte-string leaves, padded to a power of two.

    Leaf and interior digests are domain-separated; missing leaves are a
    fixed empty-leaf digest so the shape depends only on the leaf count.
    """

    def __init__(self, leaves: Sequence[bytes]):
        if not leaves:
            raise ValueError("merkle tree needs at least one leaf")
        self.leaf_count = len(leaves)
        width = 1 << max(0, (len(leaves) - 1).bit_length())
        level = [leaf_digest(leaf) for leaf in leaves]
        level += [EMPTY_LEAF_DIGEST] * (width - len(level))
        self.levels = [level]
        while len(level) > 1:
            level = [
                hash_bytes(b"MT/node", level[i], level[i + 1])
                for i in range(0, len(level), 2)
            ]
            self.levels.append(level)

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    def path(self, index: int) -> list[bytes]:
        """Sibling digests from the leaf level up to just below the root."""
        if not 0 <= index < self.leaf_count:
            raise IndexError(f"leaf {index} out of range")
        out = []
        for level in self.levels[:-1]:
            out.append(level[index ^ 1])
            index >>= 1
        return out


def leaf_digest(leaf: bytes) -> bytes:
    return hash_bytes(b"MT/leaf", leaf)


EMPTY_LEAF_DIGEST = hash_bytes(b"MT/empty")


def merkle_verify(root: bytes, index: int, leaf: bytes, path: Sequence[bytes]) -> bool:
    """Check a membership path produced by :meth:`MerkleTree.path`."""
    if index < 0 or index >= (1 << len(path)):
        return False
    node = leaf_digest(leaf)
    for sibling in path:
        if len(sibling) != _NODE_LEN:
            return False
        if index & 1:
            node = hash_bytes(b"MT/node", sibling, node)
        else:
            node = hash_bytes(b"MT/node", node, sibling)
        index >>= 1
    return node == root
