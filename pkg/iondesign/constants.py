"""
Physical constants shared by every estimator, taken from CODATA via
:mod:`scipy.constants`.
"""
from numpy import pi
from scipy.constants import (
    atomic_mass,
    c,
    e,
    epsilon_0,
    hbar,
    physical_constants,
)

__all__ = [
    "AMU",
    "BOHR_RADIUS",
    "COULOMB_CONSTANT",
    "C",
    "E",
    "EPS0",
    "HBAR",
    "SECONDS_PER_WEEK",
    "TWO_PI",
]

C = c
E = e
EPS0 = epsilon_0
HBAR = hbar
AMU = atomic_mass
BOHR_RADIUS = physical_constants["Bohr radius"][0]

# e^2 / (4 pi eps0), J m
COULOMB_CONSTANT = E ** 2 / (4 * pi * EPS0)

TWO_PI = 2 * pi
SECONDS_PER_WEEK = 7 * 24 * 3600
