"""Lower bounds for hypergraph Ramsey numbers via pasting, SAT and local search."""

__version__ = "0.1.0"
