from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/esequiv/_canonc.pyx"],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except ImportError:
    # The package works without the compiled kernel (pure-Python fallback).
    ext_modules = []

setup(ext_modules=ext_modules)
