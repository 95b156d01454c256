"""Discrete-time quantum walks of one and two bosons: topology and entanglement."""

__version__ = "0.1.0"
