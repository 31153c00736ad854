"""Closed-form capacity bounds and the δ optimizer."""
