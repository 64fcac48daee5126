import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "dynhull._kernels._speedups",
        ["src/dynhull/_kernels/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

# The package works without the extension (dynhull._kernels falls back to the
# pure-Python backend), so a missing Cython only degrades performance.
ext_modules = cythonize(extensions, language_level=3) if cythonize else []

setup(ext_modules=ext_modules)
