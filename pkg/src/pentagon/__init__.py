"""Solutions of the pentagon equation from five symmetric matrices.

Submodules: ``matcore`` (complex matrix helpers), ``directsum`` (triangle
bases and flips), ``metric`` (scalar products, orthonormal and isotropic
bases), ``grassmann`` (finite Grassmann algebra), ``weights`` (Gaussian
Grassmann weights), ``exotic`` (the commuting lambda/mu family), ``cli``.
"""

__version__ = "0.1.0"

from .directsum import (  # noqa: E402
    ALL_TRIANGLES,
    FLIP_NAMES,
    FlipSet,
    ZetaFamily,
    build_flips,
    check_pentagon,
    kashaev_flips,
    random_zeta_family,
)
from .errors import PentagonError  # noqa: E402
from .grassmann import GrassmannElement, berezin  # noqa: E402
from .metric import isotropic_flips, orthonormal_flips  # noqa: E402
from .weights import GaussWeight, pentagon_grassmann, weights_from_zeta  # noqa: E402

__all__ = [
    "__version__",
    "ALL_TRIANGLES",
    "FLIP_NAMES",
    "FlipSet",
    "ZetaFamily",
    "build_flips",
    "check_pentagon",
    "kashaev_flips",
    "random_zeta_family",
    "PentagonError",
    "GrassmannElement",
    "berezin",
    "isotropic_flips",
    "orthonormal_flips",
    "GaussWeight",
    "pentagon_grassmann",
    "weights_from_zeta",
]
