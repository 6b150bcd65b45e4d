import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional; jumplab.kernels falls back to pure Python.
ext_modules = []
if os.environ.get("JUMPLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "jumplab._kernels",
                    ["src/jumplab/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: compiled and fallback kernels must agree bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
