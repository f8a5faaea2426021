"""Multi-hop beam routing and codebook beamforming for multi-IRS downlinks."""

__version__ = "0.1.0"
