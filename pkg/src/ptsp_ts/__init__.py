"""Task selection and shift scheduling with an adaptive large neighborhood search."""

__version__ = "0.1.0"
