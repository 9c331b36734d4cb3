"""coverkit: exact combinatorics of covering groups.

Sharp root data and dual groups from Weyl-invariant quadratic forms, Galois
coinvariants and obstruction groups, and exact local-field symbol arithmetic.
"""

__version__ = "0.1.0"
