"""
makerboard package.

This package simulates the Maker-Breaker G-game on blown-up star boards:
levelings, blocking graphs, the board, Maker's candidate strategy,
Breaker policies, brute-force oracles and the run harness.
"""

__version__ = "1.0.0"
