# -*- coding: utf-8 -*-
#
# semp documentation build configuration file

import os
import sys

# the package, and the directory of setup.py for the version
sys.path.insert(0, os.path.abspath(".."))
sys.path.insert(0, os.path.abspath("../.."))

from setup import package_version

# -- General configuration ----------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode"]
templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "semp"
copyright = "2026, the semp contributors"

version = package_version
release = package_version

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# -- Options for HTML output --------------------------------------------------

html_theme = "default"
html_static_path = []
htmlhelp_basename = "sempdoc"

# -- Options for LaTeX output -------------------------------------------------

latex_documents = [
    ("index", "semp.tex", "semp Documentation", "the semp contributors", "manual"),
]

# -- Options for manual page output -------------------------------------------

man_pages = [("index", "semp", "semp Documentation", ["the semp contributors"], 1)]
