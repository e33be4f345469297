"""Optional compiled kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("NESTLAB_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        import numpy  # noqa: F401  (memoryview callers pass int32 arrays)

        ext_modules = cythonize(
            ["src/nestlab/_ckernels.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
