"""Build hook for the optional compiled kernels.

The package works without the extension; phidim.kernels falls back to the
pure-Python implementation when the compiled module is missing or when
PHIDIM_PURE=1 is set.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "phidim._ckernels",
                ["src/phidim/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
