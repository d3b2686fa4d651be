#!/usr/bin/env python3

#
# Copyright (C) 2026 The panoctools developers
#
# This file is part of panoctools, an augmented Lagrangian solver for
# nonconvex constrained optimization built around PANOC.
#
# panoctools is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation, either version 3 of the License, or (at
# your option) any later version.
#
# panoctools is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with panoctools.  If not, see <http://www.gnu.org/licenses/>.
#

import setuptools
import sys

with open("README.md", "rt", encoding="UTF-8") as fh:
    long_description = fh.read()

version = {}
with open("panoctools/__init__.py", "rt", encoding="UTF-8") as fh:
    exec(fh.read(), version)

if sys.hexversion < 0x03070000:
    sys.stderr.write("error: panoctools v%s requires Python 3.7 or later.\n"
                     % version["__version__"])
    sys.exit(1)

setuptools.setup(
    name="panoctools",
    version=version["__version__"],
    description="Augmented Lagrangian and PANOC tools for nonconvex constrained optimization",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="GPLv3+",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics"],
    keywords="optimization augmented-lagrangian PANOC L-BFGS model-predictive-control",
    packages=setuptools.find_packages(exclude=["tests"]),
    install_requires=["numpy>=1.17"],
    extras_require={"test": ["pytest>=6"]},
    python_requires=">=3.7",
    entry_points={
        "console_scripts": [
            "panoctools=panoctools.panoctools:main"
        ]
    }
)
