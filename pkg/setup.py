from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    ext = Extension(
        "spast._augment",
        ["src/spast/_augment.pyx"],
        extra_compile_args=["-O3"],
        optional=True,  # pure-Python fallback is selected at import
    )
    extensions = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=extensions)
