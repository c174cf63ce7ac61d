"""Version information based on PEP396 and 440."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__: str = version("pybprime")
except PackageNotFoundError:  # pragma: no cover
    # Running from a source checkout that hasn't been installed
    __version__ = "0.0.0"
