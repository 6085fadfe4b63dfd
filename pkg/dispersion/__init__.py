"""
Dispersion analysis of discretized Maxwell-Lorentz systems
Submodules are imported directly (dispersion.fd, dispersion.dg, ...).
"""
