"""Non-effectivity certificates for the classes k*xi_{d,m} on blow-ups of the plane."""

__version__ = "0.1.0"
