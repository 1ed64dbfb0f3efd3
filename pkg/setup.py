from setuptools import setup, Extension

# The compiled kernel is optional: the package falls back to the pure-Python
# twin in choreknife.bounds._pykernel when the extension is unavailable.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "choreknife.bounds._speedups",
                ["src/choreknife/bounds/_speedups.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
