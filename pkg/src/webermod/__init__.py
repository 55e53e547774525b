"""Weber modular polynomials, supersingular isogeny graphs and Hecke sieves."""

__version__ = "0.1.0"
