"""Fixed-width bit-vector semantics and invertibility-equivalence checking."""

__version__ = "0.1.0"
