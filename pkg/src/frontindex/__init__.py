"""Signed A_k singularities of fronts and maps on closed surfaces.

Modules:

- :mod:`frontindex.jets` truncated bivariate Taylor arithmetic
- :mod:`frontindex.surfaces` fronts, curvature, parallel fronts, affine normals
- :mod:`frontindex.morin` densities, null fields, the derivative cascade
- :mod:`frontindex.strata` singular curves, signed A3 points, region complexes
- :mod:`frontindex.indexcheck` degrees, Poincare-Hopf, index identities
- :mod:`frontindex.cli` scenario runner
"""

from ._kernels import BACKEND
from .errors import FrontIndexError
from .jets import Jet2, JetVec3, directional_jet_derivative, jet_arith

__version__ = "0.1.0"

__all__ = ["BACKEND", "FrontIndexError", "Jet2", "JetVec3", "directional_jet_derivative", "jet_arith", "__version__"]
