"""
motag-recon

Analytic and simulation models of botnet reconnaissance against a bank of
moving-target proxies, framed as an adversarial coupon-collection problem.
"""

__version__ = "0.1.0"
