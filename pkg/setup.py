import os

from setuptools import Extension, setup

# The enumeration kernel compiles to a small C extension.  If Cython (or a C
# compiler) is unavailable the package still works: aupoly.kernels falls back
# to the pure numpy twin at import time.
ext_modules = []
if os.environ.get("AUPOLY_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("aupoly._speedups", ["src/aupoly/_speedups.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
