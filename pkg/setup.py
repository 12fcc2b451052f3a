"""Build script for the optional compiled kernels.

The Cython extension is optional: when Cython or a C compiler is missing the
package installs without it and falls back to ``fiblab._pykernels``.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize

    USE_CYTHON = True
except ImportError:
    USE_CYTHON = False


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); using pure Python", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


extensions = []
if USE_CYTHON and not os.environ.get("FIBLAB_NO_EXT"):
    extensions = cythonize(
        [Extension("fiblab._ckernels", ["src/fiblab/_ckernels.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
