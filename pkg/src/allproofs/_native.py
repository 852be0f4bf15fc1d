"""ctypes bindings for the Rust pairing backend (BN254 via arkworks).

The shared library is built from ``native/`` by ``setup.py`` (or a plain
``cargo build --release``) and looked up in that order:

1. ``ALLPROOFS_BACKEND_LIB`` environment variable,
2. the bundled ``_lib/`` directory next to this module,
3. ``native/target/release/`` relative to the repository root (dev checkout).

All functions operate on fixed-width byte buffers holding arkworks canonical
encodings; see ``curve`` for the object layer on top.
"""

from __future__ import annotations

import ctypes
import os
import sys
from pathlib import Path

FR_LEN = 32
G1_LEN = 64
G2_LEN = 128
GT_LEN = 384
G1_COMP_LEN = 32
G2_COMP_LEN = 64


class BackendError(RuntimeError):
    """A backend call failed (malformed encoding or internal error)."""


def _lib_filename() -> str:
    if sys.platform.startswith("darwin"):
        return "libpairing_backend.dylib"
    if sys.platform.startswith("win"):
        return "pairing_backend.dll"
    return "libpairing_backend.so"


def _locate_library() -> Path:
    override = os.environ.get("ALLPROOFS_BACKEND_LIB")
    if override:
        return Path(override)
    name = _lib_filename()
    here = Path(__file__).resolve().parent
    candidates = [
        here / "_lib" / name,
        here.parent.parent.parent / "native" / "target" / "release" / name,
    ]
    for path in candidates:
        if path.exists():
            return path
    raise ImportError(
        "pairing backend library not found; run `pip install -e . "
        "--no-build-isolation` or `cargo build --release` inside native/ "
        f"(searched: {', '.join(str(c) for c in candidates)})"
    )


_lib = ctypes.CDLL(str(_locate_library()))

_u8p = ctypes.POINTER(ctypes.c_ubyte)

for _name, _argtypes in {
    "bk_g1_generator": [_u8p],
    "bk_g2_generator": [_u8p],
    "bk_gt_generator": [_u8p],
    "bk_g1_identity": [_u8p],
    "bk_g2_identity": [_u8p],
    "bk_gt_identity": [_u8p],
    "bk_fr_modulus": [_u8p],
    "bk_g1_add": [_u8p, _u8p, _u8p],
    "bk_g2_add": [_u8p, _u8p, _u8p],
    "bk_gt_mul": [_u8p, _u8p, _u8p],
    "bk_g1_neg": [_u8p, _u8p],
    "bk_g2_neg": [_u8p, _u8p],
    "bk_gt_inv": [_u8p, _u8p],
    "bk_g1_mul": [_u8p, _u8p, _u8p],
    "bk_g2_mul": [_u8p, _u8p, _u8p],
    "bk_gt_exp": [_u8p, _u8p, _u8p],
    "bk_g1_msm": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_msm": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_mul_each": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_mul_each": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_scale": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_scale": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_hadamard": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_hadamard": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_sub_each": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_sub_each": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_fold": [_u8p, _u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_fold": [_u8p, _u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_fixed_mul": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g2_fixed_mul": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_multi_pairing": [_u8p, _u8p, ctypes.c_uint64, _u8p],
    "bk_g1_compress": [_u8p, _u8p],
    "bk_g2_compress": [_u8p, _u8p],
    "bk_g1_decompress": [_u8p, _u8p],
    "bk_g2_decompress": [_u8p, _u8p],
    "bk_gt_validate": [_u8p],
}.items():
    _fn = getattr(_lib, _name)
    _fn.argtypes = _argtypes
    _fn.restype = ctypes.c_int32


def _buf(data: bytes):
    return (ctypes.c_ubyte * len(data)).from_buffer_copy(data)


def _out(size: int):
    return (ctypes.c_ubyte * size)()


def call(name: str, *args, out_size: int) -> bytes:
    """Invoke a backend function, returning the output buffer contents."""
    out = _out(out_size)
    c_args = [(_buf(a) if isinstance(a, (bytes, bytearray)) else a) for a in args]
    rc = getattr(_lib, name)(*c_args, out)
    if rc != 0:
        raise BackendError(f"{name} failed with code {rc}")
    return bytes(out)


def check(name: str, *args) -> bool:
    """Invoke a validating backend function, returning success as bool."""
    c_args = [(_buf(a) if isinstance(a, (bytes, bytearray)) else a) for a in args]
    return getattr(_lib, name)(*c_args) == 0


def fr_modulus() -> int:
    return int.from_bytes(call("bk_fr_modulus", out_size=FR_LEN), "little")
