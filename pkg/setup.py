#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

from setuptools import setup


with open("README.rst") as readme:
    long_description = readme.read()

setup(name="dbarw",
      version="0.1.0",
      description="Double branching annihilating random walk laboratory",
      long_description=long_description,
      author="the dbarw developers",
      license="MIT",
      packages=["dbarw"],
      python_requires=">=3.8",
      install_requires=["numpy>=1.17"],
      entry_points={
          "console_scripts": ["dbarw=dbarw.cli:main"],
      },
      classifiers=[
        'Development Status :: 3 - Alpha',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        ],
      )


########################################################################
