"""Analytical dimensioning of FFR/SFR-aided OFDMA cellular networks under
proportional fair scheduling, with a Monte Carlo system simulator."""

__version__ = "0.1.0"
