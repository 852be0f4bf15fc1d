"""Build hook that compiles the Rust pairing backend and bundles the cdylib."""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.dist import Distribution

ROOT = Path(__file__).resolve().parent
CRATE = ROOT / "native"
LIB_DIR = ROOT / "src" / "allproofs" / "_lib"

LIB_NAMES = {
    "linux": "libpairing_backend.so",
    "darwin": "libpairing_backend.dylib",
    "win32": "pairing_backend.dll",
}


def _lib_name() -> str:
    for prefix, name in LIB_NAMES.items():
        if sys.platform.startswith(prefix):
            return name
    return LIB_NAMES["linux"]


class BuildBackend(build_ext):
    def run(self):
        if shutil.which("cargo") is None:
            built = LIB_DIR / _lib_name()
            if built.exists():
                return
            raise RuntimeError(
                "cargo not found: the Rust toolchain is required to build the "
                "pairing backend (native/). Install Rust or provide a prebuilt "
                f"library at {built}."
            )
        subprocess.run(
            ["cargo", "build", "--release"], cwd=CRATE, check=True
        )
        LIB_DIR.mkdir(parents=True, exist_ok=True)
        name = _lib_name()
        shutil.copy2(CRATE / "target" / "release" / name, LIB_DIR / name)


class BinaryDistribution(Distribution):
    def has_ext_modules(self):
        return True


setup(
    cmdclass={"build_ext": BuildBackend},
    distclass=BinaryDistribution,
)
