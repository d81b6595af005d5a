"""CMake-driven extension build, following pybind11's cmake_example layout."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        # .../build_lib/nievalue/_core.so -> install prefix .../build_lib
        prefix = ext_fullpath.parent.parent.resolve()
        cfg = "Debug" if int(os.environ.get("DEBUG", "0")) else "Release"

        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython_EXECUTABLE={sys.executable}",
            "-DSKBUILD=ON",  # wheel build: extension only, no tests
        ]
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)

        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", f"-j{os.cpu_count() or 2}"],
            cwd=build_temp,
            check=True,
        )
        subprocess.run(
            ["cmake", "--install", ".", "--prefix", str(prefix)],
            cwd=build_temp,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("nievalue._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
