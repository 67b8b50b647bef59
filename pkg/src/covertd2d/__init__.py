"""Covert SWIPT-enabled D2D networks: performance model, Monte Carlo oracle and Stackelberg game."""

__version__ = "0.1.0"
