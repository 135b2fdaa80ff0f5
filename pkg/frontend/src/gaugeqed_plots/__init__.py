"""Figure renderer for gaugeqed CSV datasets."""

__version__ = "0.1.0"
