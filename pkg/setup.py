"""Build hook: compile the optional kernel extension when Cython is present.

The package works without it (a numpy fallback is selected at import), so
the extension is marked optional and any build failure is non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension(
        "hardylab._kernels",
        ["src/hardylab/_kernels.pyx"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    pass

setup(ext_modules=ext_modules)
