"""UVAA secure beamforming - secrecy, sidelobe and energy trade-offs for two UAV swarms."""

__version__ = "0.1.0"
