"""Build script for the optional compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed, never correctness.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-NumPy backend instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernels ({exc}); "
                  "amphinav will use the NumPy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "amphinav will use the NumPy fallback")


def make_extensions():
    import numpy as np

    # -ffp-contract=off keeps the compiled kernels bit-identical to the
    # NumPy fallback (no FMA contraction).
    flags = ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "amphinav._kernels._core",
        sources=[os.path.join("src", "amphinav", "_kernels", "_core.pyx")],
        include_dirs=[np.get_include()],
        extra_compile_args=flags,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    try:
        from Cython.Build import cythonize
        return cythonize([ext], language_level="3")
    except ImportError:
        return []


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
