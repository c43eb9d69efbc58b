"""Connectivity-c mimicking networks."""
