"""Builds the optional compiled kernel extension.

The package works without it: carbonlens.kernels falls back to the pure
Python implementations when the extension is absent or fails to build.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension (instead of aborting the install) on build failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernels ({exc}); pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); pure-Python fallback will be used")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("carbonlens._speedups", ["src/carbonlens/_speedups.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
