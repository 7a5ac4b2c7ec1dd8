"""Build script: compiles the optional cone-search kernel.

The compiled extension is a pure speedup; if Cython or a C compiler is
unavailable the install still succeeds and the package falls back to the
pure-Python kernel at import time.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled kernel: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


ext_modules = []
if os.environ.get("ORDLAB_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ordlab._kernel._conecore",
                    ["src/ordlab/_kernel/_conecore.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        warnings.warn("Cython not available; installing with pure-Python kernel only")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
