"""Model checking and proof checking for distributed knowledge-how."""

__version__ = "0.1.0"
