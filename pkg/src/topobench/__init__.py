"""Topology benchmark: Betti-number estimation for noisy binary images
via signed distance transforms and cubical persistence, with a synthetic
wall-network dataset and a calibrated windowed-counting estimator."""

__version__ = "0.1.0"
