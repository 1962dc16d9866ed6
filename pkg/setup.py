import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


def extensions():
    if cythonize is None or os.environ.get("EADSIM_NO_EXT"):
        return []
    ext = Extension(
        "eadsim._kernels",
        ["src/eadsim/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # inputs are finite, so skip the C99 inf/nan recovery in complex multiply
        extra_compile_args=["-O3", "-fcx-limited-range"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions())
