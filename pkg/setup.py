"""Build script for the compiled matching/bump-train kernels.

The extension is a performance core only: every entry point has a NumPy
fallback in ``apset._kernels_py``, selected at import time when the compiled
module is unavailable (or when ``APSET_PURE_PYTHON=1``).
"""
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("apset._native", ["src/apset/_native.pyx"]),
]

setup(ext_modules=cythonize(extensions, language_level="3"))
