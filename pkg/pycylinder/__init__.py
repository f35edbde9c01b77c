"""
    Characteristic-function calculus and independence checks
    for linear statistics on the cylinder groups R x T and Sigma_a x T
"""

__version__ = '0.1.0'
__date__ = '2026/10/01'
