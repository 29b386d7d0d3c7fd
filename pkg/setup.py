"""Build the optional Cython kernels.

The package works without them: ``superflag.kernels`` falls back to the
pure-Python implementations when the extension is missing.

    python3 setup.py build_ext --inplace
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SUPERFLAG_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/superflag/_ckernels.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
