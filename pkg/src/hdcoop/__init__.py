"""Capacity toolkit for interference channels with half-duplex source cooperation."""

__version__ = "0.1.0"
