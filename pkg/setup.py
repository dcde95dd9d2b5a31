import numpy
from setuptools import Extension, setup

# The compiled kernels are optional: fincov falls back to the numpy lane
# when the extension is absent (see fincov/kernels.py).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fincov._kernels_c",
                ["src/fincov/_kernels_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
