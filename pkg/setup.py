"""Build script: compiles the hot-kernel extension when Cython is available.

Set POWERBOUNDS_NO_EXT=1 to skip the extension entirely; the package then
runs on the NumPy fallback backend.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("POWERBOUNDS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "powerbounds._kernels._fast",
                    ["src/powerbounds/_kernels/_fast.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
