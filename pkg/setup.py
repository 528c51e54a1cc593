# -*- coding: utf-8 -*-
import os
import re

from setuptools import find_packages
from setuptools import setup

HERE = os.path.abspath(os.path.dirname(__file__))

# manage package version
# store version in the init.py
with open(os.path.join(HERE, "src", "semp", "__init__.py")) as v_file:
    package_version = (
        re.compile(r'.*__VERSION__ = "(.*?)"', re.S).match(v_file.read()).group(1)
    )

long_description = (
    description
) = "Type checker and interpreter for a session-typed language with multi-level contextual metaprogramming."
with open(os.path.join(HERE, "README.md")) as f:
    long_description = f.read()


# set up requires
install_requires = [
    "lark>=1.1",
    "pyramid>=1.3",  # settings coercion, ConfigurationError, reify
    "zope.interface",  # in Pyramid
]
testing_requires = [
    "pytest",
]
testing_extras = install_requires + testing_requires + ["coverage"]
docs_extras = [
    "sphinx",
]

setup(
    name="semp",
    version=package_version,
    description=description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Software Development :: Interpreters",
    ],
    keywords="session types metaprogramming contextual modal type checker interpreter",
    license="MIT",
    python_requires=">=3.10",
    packages=find_packages(
        where="src",
    ),
    package_dir={"": "src"},
    package_data={
        "semp": ["grammar.lark", "corpus/*.semp", "corpus/negative/*.semp"],
    },
    include_package_data=True,
    zip_safe=False,
    entry_points={
        "console_scripts": [
            "semp = semp.cli:main",
        ],
    },
    install_requires=install_requires,
    tests_require=testing_requires,
    extras_require={
        "testing": testing_extras,
        "docs": docs_extras,
    },
)
