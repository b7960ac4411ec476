"""Builds the optional compiled refinement kernel.

The package is fully functional without it; famkit._refine falls back to
the pure-Python implementation when the extension is absent.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "famkit._kernel",
                ["src/famkit/_kernel.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
