"""Bond percolation on Cartesian products of graphs."""

from prodperc.errors import CapacityError, InvalidParameterError
from prodperc.graph_core import FactorGraph, build_named, from_edges, validate
from prodperc.product import ProductGraph, hypercube

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "FactorGraph",
    "InvalidParameterError",
    "ProductGraph",
    "build_named",
    "from_edges",
    "hypercube",
    "validate",
    "__version__",
]
