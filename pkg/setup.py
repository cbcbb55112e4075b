import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "timbrebench.effects._kernels",
                sources=["src/timbrebench/effects/_kernels.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    # No Cython: the package still works via the pure-numpy fallback.
    ext_modules = []

setup(ext_modules=ext_modules)
