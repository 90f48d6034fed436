"""Spectra, symbols and norms of discrete Hausdorff operators on L2(R^d)."""

__version__ = "0.1.0"

from .model import OperatorSpec, OctantScheme, scalar_dilation_spec, simultaneous_diagonalize, validate_spec  # noqa: E402
from .symbols import SymbolField, norm_bound  # noqa: E402

__all__ = ["OperatorSpec", "OctantScheme", "SymbolField", "norm_bound", "scalar_dilation_spec",
           "simultaneous_diagonalize", "validate_spec", "__version__"]
