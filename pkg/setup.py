"""Build script: compiles the optional Cython kernel, falling back to pure Python.

The package is fully functional without the extension; `ltrcweibull._kernels`
selects the NumPy implementation when `_cyimpl` is absent.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension instead of failing the install when compilation breaks."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"skipping Cython kernel build: {exc}", stacklevel=1)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}: {exc}", stacklevel=1)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "ltrcweibull._kernels._cyimpl",
        ["src/ltrcweibull/_kernels/_cyimpl.pyx"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
