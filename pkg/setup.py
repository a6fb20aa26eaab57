from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # No Cython: install pure-Python only; mrootgeom.kernels falls back at import.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("mrootgeom._speedups", ["src/mrootgeom/_speedups.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
