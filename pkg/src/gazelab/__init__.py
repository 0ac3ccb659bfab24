"""Reading-time prediction in IPA space."""
__version__ = "0.1.0"
