# -*- coding: utf-8 -*-
#
# dbarw documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'dbarw'
copyright = u'2024, the dbarw developers'  # skipcq: PYL-W0622
author = u'the dbarw developers'

# The short X.Y version.
version = u'0.1'
# The full version, including alpha/beta/rc tags.
release = u'0.1.0'

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'


# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_static_path = ['_static']
html_sidebars = {
    '**': [
        'about.html',
        'navigation.html',
        'relations.html',
        'searchbox.html',
    ]
}
htmlhelp_basename = 'dbarwdoc'


# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'dbarw.tex', u'dbarw Guide',
     u'the dbarw developers', 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'dbarw', u'dbarw Guide', [author], 1)
]
