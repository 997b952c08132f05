"""Meromorphic modular forms, polar harmonic Maass forms and higher Green's
functions on SL2(Z), with regularized Petersson inner products."""

__version__ = "0.1.0"
