"""
lpsolve - generalized inverses and L_p approximation
"""
__version__ = "1.0.0"
