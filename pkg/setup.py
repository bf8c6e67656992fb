"""Build script for the optional compiled trajectory kernel.

The package works without the extension (a NumPy fallback is selected at
import time); set BINQWALK_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BINQWALK_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "binqwalk._kernels._cykernel",
                    ["src/binqwalk/_kernels/_cykernel.pyx"],
                    # -ffp-contract=off forbids fused multiply-adds so the
                    # compiled kernel stays bit-identical to the NumPy twin.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
