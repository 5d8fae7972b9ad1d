"""uclid-mini: a small modeling language with verification and synthesis back ends."""

__version__ = "0.1.0"
