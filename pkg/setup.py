"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it just makes training faster. If the
toolchain is missing the build degrades to pure Python instead of failing.
"""

import sys

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    numpy = None
    cythonize = None


def extensions():
    if cythonize is None:
        print("hingsent: Cython/NumPy unavailable, skipping compiled kernels",
              file=sys.stderr)
        return []
    ext = Extension(
        "hingsent.nn._kernels",
        ["src/hingsent/nn/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
