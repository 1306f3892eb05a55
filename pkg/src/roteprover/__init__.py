"""Machinery for deciding first-order claims about the Rote word q and for
enumerating finite Rote words under an exponent bound."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.0.0"
