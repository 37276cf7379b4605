"""Exact and numerical bounds for codes: Delsarte LP, triple-distance SDP and Lovász theta."""

__version__ = "0.1.0"
