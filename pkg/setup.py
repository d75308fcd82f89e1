"""Build script for the optional compiled maxima kernel.

The package works without the extension (a pure NumPy fallback is selected
at import time); building it just makes the large Monte Carlo runs fast.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "trigauss._maxkernel",
                sources=["src/trigauss/_maxkernel.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps the compiled kernel bitwise
                # identical to the NumPy fallback (no fused multiply-add).
                extra_compile_args=["-O3", "-ffp-contract=off", "-fopenmp"],
                extra_link_args=["-fopenmp"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
