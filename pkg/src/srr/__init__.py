"""Service rate regions of erasure-coded storage systems with MDS cores."""
