"""Builds the optional compiled kernels. Pure-Python fallbacks are used when
the extension is unavailable, so a failed compile must not fail the install."""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ikl._kernels._speedups",
                ["src/ikl/_kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

for ext in extensions:
    ext.optional = True

setup(ext_modules=extensions)
