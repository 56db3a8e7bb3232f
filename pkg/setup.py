import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: gapline.kernels falls back to the
# numpy implementation when the extension is absent.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gapline._kernels",
                ["src/gapline/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
