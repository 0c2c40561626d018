"""Logarithmic central force problem: blow-up, isolating block, block regularization."""
