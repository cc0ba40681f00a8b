"""Stochastic simulated annealing (SSA/SSAU) for Ising/MAX-CUT problems with
closed-form hyperparameters derived from local-energy statistics."""

__version__ = "0.1.0"
