"""Central series, hypercenters and nilpotent residuals of finite groups,
with checks of the Schur-Baer-Wiegold family of bounds."""

__version__ = "0.1.0"
