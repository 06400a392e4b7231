"""qdlab: sparse Jacobi spectra, spin-glass ground-state bounds, and
disorder-averaged transverse-magnetization dynamics at desk scale."""

__version__ = "0.1.0"
