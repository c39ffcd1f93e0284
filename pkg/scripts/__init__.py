"""Utility scripts for robustness studies."""
