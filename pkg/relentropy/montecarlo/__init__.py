"""Seeded Monte Carlo harness."""
