"""Build script for the optional compiled DP kernel.

Without Cython or a C++ compiler the package still installs and runs on the
pure-Python kernel.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("hmsched.kernels._dp", ["src/hmsched/kernels/_dp.pyx"], language="c++",
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
