"""Build script: compiles the optional search-kernel extension.

The package is fully functional without the extension (a pure-Python lane
with identical semantics is selected at import time), so any failure to
cythonize or compile downgrades to a warning instead of failing the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/flattori/_filterkern.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    warnings.warn(f"building without compiled kernel: {exc}")

setup(ext_modules=ext_modules)
