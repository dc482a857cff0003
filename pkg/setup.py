import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("SE3AD_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "se3ad._dual_ext",
        ["src/se3ad/_dual_ext.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
