"""Tests for the multi-objective optimizers."""
