"""Build script for the optional Cython jet kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to compile is downgraded to a warning.
"""

import sys

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qale._jetcore",
                ["src/qale/_jetcore.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"qale: skipping Cython extension ({exc}); numpy fallback will be used",
          file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
