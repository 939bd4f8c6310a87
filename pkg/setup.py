"""Build script for the optional compiled row-reduction kernel.

The package is pure Python apart from ``fphomalg._kernels._modp``.  If
Cython or a C compiler is unavailable the install still succeeds and the
numpy fallback kernel is selected at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fphomalg._kernels._modp",
                ["src/fphomalg/_kernels/_modp.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
