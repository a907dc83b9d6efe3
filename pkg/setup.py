"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a missing compiler or Cython only costs speed.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compilation failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"skipping compiled kernel: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


ext_modules = []
if not os.environ.get("ESAKIA_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("esakia._kernel._core", ["src/esakia/_kernel/_core.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        warnings.warn("Cython not available, building without the compiled kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
