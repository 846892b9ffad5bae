"""Build script: compiles the optional image-kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so a failed compile downgrades to a
warning instead of aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/chartforge/quality/_imagekernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - environment dependent
    warnings.warn(f"image kernel extension skipped ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)
