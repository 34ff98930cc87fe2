"""CMake-driven extension build for the wosnet package.

Use `pip install -e . --no-build-isolation` for development installs.
"""

import glob
import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = os.path.abspath(sourcedir)


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        configure = [
            "cmake",
            ext.sourcedir,
            "-DCMAKE_BUILD_TYPE=Release",
            "-DSKBUILD=ON",
            "-DWOSNET_BUILD_PYTHON=ON",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(configure, cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j"],
            cwd=build_temp,
            check=True,
        )
        built = glob.glob(str(build_temp / "python" / "wosnet" / "_core*"))
        built = [p for p in built if not p.endswith(".py")]
        if not built:
            raise RuntimeError("CMake did not produce the _core extension module")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], dest)


setup(
    ext_modules=[CMakeExtension("wosnet._core")],
    cmdclass={"build_ext": CMakeBuild},
)
