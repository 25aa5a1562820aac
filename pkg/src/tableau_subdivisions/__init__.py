"""
Subdivisions of hypersimplices induced by semistandard Young tableaux.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("tableau-subdivisions")
except PackageNotFoundError:
    __version__ = "0.0.0"
