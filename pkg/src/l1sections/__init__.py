# src/l1sections/__init__.py
# Explicit low-distortion subspaces of l1 and their certificates.
__version__ = "0.1.0"
