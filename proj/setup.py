"""Build shim: compiles the _core extension through the project's CMake tree.

Metadata lives in pyproject.toml; this file only teaches setuptools how to
produce trimode/_core*.so. Use `pip install -e . --no-build-isolation`.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        ext_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        config = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={config}",
                "-DTRIMODE_PYTHON=ON",
                f"-DTRIMODE_EXT_DIR={ext_dir}",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            [
                "cmake",
                "--build",
                ".",
                "--target",
                "_core",
                f"-j{os.cpu_count() or 2}",
            ],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("trimode._core")],
    cmdclass={"build_ext": CMakeBuild},
)
