"""Regular closure operators on finite topological spaces."""

__version__ = "0.1.0"
