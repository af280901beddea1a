"""
qdslim - convergence rates of quantum dynamical semigroups, quantum speed limits
and energy-constrained entropy/capacity continuity bounds, evaluated and
certified on finite truncations of infinite-dimensional systems.
"""

__version__ = "0.1.0"
__author__ = "Your Name"
__description__ = "Certify convergence-rate bounds for closed and open quantum dynamics"

__all__ = ["__version__", "__author__", "__description__"]
