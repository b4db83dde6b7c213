"""Point counts of Artin-Schreier curves y^q - y = a x^(q^r+1) + b x + c and
complete arcs from the generalized Hermitian curve T(y) = T(x^(q^r+1))."""

__version__ = "0.1.0"
FORMAT_VERSION = 1
