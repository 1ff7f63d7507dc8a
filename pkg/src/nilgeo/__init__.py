"""nilgeo: exact Lie-algebra-level verification of complex, hypercomplex and
HKT geometry on nilpotent Lie algebras."""

__version__ = "0.1.0"
