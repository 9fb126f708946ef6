from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "belldistil._trajectory_cy",
                ["src/belldistil/_trajectory_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # The package works without the compiled kernel; a pure-Python
    # fallback is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
