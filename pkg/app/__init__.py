"""
Freiman Rectifier
Exact rectification of small subsets of F_p into number-field towers
"""

__version__ = "1.0.0"
