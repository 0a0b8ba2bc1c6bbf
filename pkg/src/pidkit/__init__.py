"""Pedestrian intrusion detection toolkit."""

__version__ = "0.1.0"
