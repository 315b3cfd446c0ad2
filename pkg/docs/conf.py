#
# numrange documentation build configuration file.
#
# Only the settings that differ from the Sphinx defaults are listed here.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import numrange  # noqa: E402

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode", "sphinx.ext.napoleon", "sphinx.ext.mathjax"]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "numrange"
copyright = "2026, the numrange developers"
author = "the numrange developers"

version = numrange.__version__
release = version

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "numrangedoc"

latex_documents = [
    (master_doc, "numrange.tex", "numrange Documentation", author, "manual"),
]

man_pages = [(master_doc, "numrange", "numrange Documentation", [author], 1)]

texinfo_documents = [
    (
        master_doc,
        "numrange",
        "numrange Documentation",
        author,
        "numrange",
        "Numerical ranges of complex matrices in several dimensions.",
        "Miscellaneous",
    ),
]
