"""Build hook for the optional mod-p speedup extension.

The package is fully functional without the compiled module; if Cython or a C
compiler is unavailable the install proceeds and the pure fallback is used.
"""
import os

from setuptools import Extension, setup

ext_modules = []
_pyx = "src/nilgrade/_speedups.pyx"
if os.environ.get("NILGRADE_NO_EXT") != "1" and os.path.exists(_pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("nilgrade._speedups", [_pyx])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
