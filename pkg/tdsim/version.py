"""Version information."""

__version__ = "0.1.0"
__author__ = "tdsim developers"
__author_email__ = "tdsim-dev@users.noreply.github.com"
