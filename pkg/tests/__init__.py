"""Test suite for motag-recon."""
