"""Configuration package for the UVAA secure beamforming toolkit."""
