"""Build script: compiles the optional Cython kernel extension.

The extension is marked optional; when Cython or a C compiler is missing the
install proceeds with the pure-Python kernels only.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dictag._kernels._ckernels",
                ["src/dictag/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
    for ext in ext_modules:
        ext.optional = True
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
