"""Reference-based compression of directed graphs with community-aware vertex ordering."""

__version__ = "0.1.0"
