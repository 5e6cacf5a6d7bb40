"""Exact and high-precision experiments on partitions into quadratic residues and non-residues."""

__version__ = "0.1.0"
