"""gaugeqed: numerical laboratory for arbitrary-gauge nonrelativistic cavity QED."""

__version__ = "0.1.0"
