"""Build script: compiles the optional refinement kernel, falling back to pure
Python/NumPy when no C toolchain is available."""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the C kernel if possible; a failed build is not fatal."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: extension build skipped ({exc}); using pure-python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using pure-python kernel")


ext_modules = []
if os.environ.get("WLKIT_PURE") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "wlkit._refine_cy",
                    ["src/wlkit/_refine_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except Exception as exc:
        print(f"warning: cython unavailable ({exc}); using pure-python kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
