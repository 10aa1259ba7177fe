"""Leader election and identifiers for programmable matter on the FCC grid."""

from .configuration import Configuration, ConfigurationError
from .lattice import Coord, LatticeError, fcc_distance

__all__ = ["Configuration", "ConfigurationError", "Coord", "LatticeError", "fcc_distance"]
__version__ = "0.1.0"
