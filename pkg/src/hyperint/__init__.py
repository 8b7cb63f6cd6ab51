"""p-integrality certificates and Dwork-Frobenius checks for A-hypergeometric series."""

__version__ = "0.1.0"
