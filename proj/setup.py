import glob
import os

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

eigen_include = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "topoguard._core",
    sorted(glob.glob("src/*.cpp")) + ["bindings/py_module.cpp"],
    include_dirs=["include", "vendor", eigen_include],
    cxx_std=20,
    extra_compile_args=["-O3"],
)

ParallelCompile("TOPOGUARD_BUILD_JOBS", default=0).install()

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
