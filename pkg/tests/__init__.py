"""Test suite for the UVAA secure beamforming toolkit."""
