# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

# -- Path setup --------------------------------------------------------------
# core, models, services and config are flat packages at the repository root.
sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'quadalg - Degenerate Quadratic Algebras'
copyright = '2025, quadalg developers'
author = 'quadalg developers'
release = '1.0.0'

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx_autodoc_typehints',
    'sphinx_copybutton',
    'autoapi.extension',
    'myst_parser',
    'sphinxcontrib.mermaid',
]

# AutoAPI configuration
autoapi_dirs = ['../core', '../models', '../services', '../config']
autoapi_type = 'python'
autoapi_file_patterns = ['*.py']
autoapi_add_toctree_entry = False
autoapi_member_order = 'bysource'
autoapi_python_class_content = 'both'
autoapi_options = [
    'members',
    'undoc-members',
    'show-inheritance',
    'show-module-summary',
]
autoapi_ignore = ['*tests*', '*test_*']

# MyST Parser configuration
source_suffix = {
    '.rst': None,
    '.md': 'myst_parser',
}
myst_enable_extensions = ['dollarmath']

autodoc_typehints = 'description'
autodoc_member_order = 'bysource'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

master_doc = 'index'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'prev_next_buttons_location': 'bottom',
    'style_nav_header_background': '#2c3e50',
    'collapse_navigation': True,
    'sticky_navigation': True,
    'navigation_depth': 3,
}

pygments_style = 'sphinx'

# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'sympy': ('https://docs.sympy.org/latest/', None),
    'pydantic': ('https://docs.pydantic.dev/latest/', None),
}

copybutton_prompt_text = r">>> |\.\.\. |\$ "
copybutton_prompt_is_regexp = True

mermaid_version = "latest"

suppress_warnings = [
    'toc.not_included',  # autoapi pages are linked from autoapi/index only
    'autoapi.python_import_resolution',
]
