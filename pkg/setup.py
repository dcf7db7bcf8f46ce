"""Build script: compiles the optional quadrature kernel extension.

The extension is a performance feature, not a correctness requirement; if
Cython or a C compiler is unavailable the install falls back to the pure
Python kernel selected at import time by ``fbelos._kernels``.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to the pure-Python kernel on compile failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: extension build skipped ({exc}); using pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} build failed ({exc}); using pure-Python kernel")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; using pure-Python kernel")
        return []
    from setuptools import Extension

    ext = Extension(
        "fbelos._kernels._quadcy",
        ["src/fbelos/_kernels/_quadcy.pyx"],
        # No -ffast-math and no FP contraction: the compiled kernel must be
        # bit-identical to the pure-Python kernel (error-free transforms
        # inside rely on strict IEEE double semantics).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
