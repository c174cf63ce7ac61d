"""Set package shortcuts."""

import logging

from ._version import __version__  # noqa: F401
from .bernstein import (
    FactoredBPoly,  # noqa: F401
    bernstein_polynomial,  # noqa: F401
    bprime_wh,  # noqa: F401
    reduced_bernstein,  # noqa: F401
)
from .decide import decide_ci, decide_hypersurface  # noqa: F401
from .polyring import Poly, Ring, WeightSystem  # noqa: F401
from .singularity import Morphism, normalize_weights  # noqa: F401
from .utils import parse_morphism, parse_poly  # noqa: F401


# Setup default logging
_logger = logging.getLogger(__name__)
_logger.addHandler(logging.NullHandler())
_logger.debug(f"pybprime v{__version__}")


def debug_logger() -> None:
    """Setup the logging for debugging."""
    logger = logging.getLogger(__name__)
    logger.handlers = []
    handler = logging.StreamHandler()
    logger.setLevel(logging.DEBUG)
    formatter = logging.Formatter("%(levelname).1s: %(message)s")
    handler.setFormatter(formatter)
    logger.addHandler(handler)
