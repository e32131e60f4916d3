#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from os.path import (
    abspath,
    join,
)
import sys

project_name = "iondesign"
sys.path.insert(0, abspath(join("..", "..")))

autodoc_default_options = {
    "members": True,
    "show-inheritance": True,
}

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.todo",
    "sphinx.ext.mathjax",
    "sphinx.ext.ifconfig",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
]

napoleon_google_docstring = True
napoleon_use_param = False
napoleon_use_ivar = True

pygments_style = "sphinx"
source_suffix = ".rst"
master_doc = "index"
language = None

todo_include_todos = True
exclude_patterns = []

htmlhelp_basename = "iondesigndoc"
html_theme = "sphinx_rtd_theme"

author = "iondesign developers"
project_description = (
    "Design-space estimates for ion-trap and cavity-QED quantum computers"
)

latex_documents = [(
    master_doc,
    "iondesign.tex",
    project_description,
)]

man_pages = [(
    master_doc,
    project_name,
    project_description,
    author,
)]

texinfo_documents = [(
    master_doc,
    project_name,
    project_description,
    author,
)]

epub_title = project_description
epub_author = author
epub_publisher = author
epub_copyright = copyright
epub_exclude_files = ["search.html"]
