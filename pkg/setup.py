import numpy
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "twobody._core",
                ["src/twobody/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback in twobody._kernels is used when the compiled
    # core is unavailable; the package stays fully functional.
    pass

setup(ext_modules=ext_modules)
