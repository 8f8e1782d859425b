import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SUMMA_PURE") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            Extension("summa._ckernels", ["src/summa/_ckernels.pyx"]),
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
