"""Build the optional compiled elimination kernel.

If Cython or a C compiler is unavailable the package installs without it and
``nilgeo.linalg`` falls back to ``nilgeo._kernel_py``.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("NILGEO_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("nilgeo._kernel", ["src/nilgeo/_kernel.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
