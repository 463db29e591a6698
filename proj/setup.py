"""Build the C++ core plus bindings as a single extension module.

The C++ library itself is CMake-first (see CMakeLists.txt); this setup
compiles the same sources directly so `pip install .` needs nothing but a
compiler, Eigen headers, and pybind11.
"""

import os
import subprocess
from glob import glob

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    env = os.environ.get("EIGEN3_INCLUDE_DIR")
    if env:
        return env
    try:
        flags = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True, text=True, check=True,
        ).stdout.split()
        for flag in flags:
            if flag.startswith("-I"):
                return flag[2:]
    except (OSError, subprocess.CalledProcessError):
        pass
    return "/usr/include/eigen3"


ParallelCompile("MAX_JOBS", default=2).install()

ext = Pybind11Extension(
    "robustnet._core",
    sources=sorted(glob("src/*.cpp")) + ["bindings/py_module.cpp"],
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
