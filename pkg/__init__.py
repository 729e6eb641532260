"""
Digital Net Discrepancy - exact L2 discrepancy of digital (0,n,2)-nets
"""

__version__ = "0.1.0"
