"""Photon wave mechanics: wave-packet modes, non-local products, multiphoton
states, coherence tensors and pulse-shaper conversion on discrete grids."""

from importlib.metadata import PackageNotFoundError, version

from .fieldcore import FieldError, Helicity, KGrid1, KGrid3, UnitsPolicy, VectorField

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = ["FieldError", "Helicity", "KGrid1", "KGrid3", "UnitsPolicy", "VectorField", "__version__"]
