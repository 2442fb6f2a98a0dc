"""Book Ramsey toolkit: booksizes of dense graphs, exhaustive small-order
verification, lower-bound colorings, and uniform-pair counting checks."""

from .colorings import ConstructionParams, TwoColoring, two_cliques, tripartite_random
from .errors import CapacityError, ParseError
from .graphs import BookCertificate, Graph

__version__ = "0.1.0"

__all__ = [
    "BookCertificate",
    "CapacityError",
    "ConstructionParams",
    "Graph",
    "ParseError",
    "TwoColoring",
    "tripartite_random",
    "two_cliques",
    "__version__",
]
