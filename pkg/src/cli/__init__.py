"""
Command-line front end for motag-recon.
"""
from .main import main

__all__ = ['main']
