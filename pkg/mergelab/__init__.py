"""Social on-ramp merging laboratory."""

__version__ = "0.1.0"
