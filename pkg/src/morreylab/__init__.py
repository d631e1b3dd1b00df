"""morreylab: weighted Morrey-space analysis and inequality verification on
sampled model domains (interval, disk)."""

__version__ = "0.1.0"
