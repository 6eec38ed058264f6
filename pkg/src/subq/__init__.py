"""subq: a numerical laboratory for sub-quantum thermodynamics.

Field solvers, Madelung hydrodynamics, thermodynamic identities,
fluctuation-theorem estimators and the vacuum fluctuation ratio, built to
cross-check each other on a shared 1-D grid.
"""

from subq.fields import (
    Constants,
    Grid,
    MadelungBundle,
    compose,
    decompose,
    gradient,
    integrate,
    laplacian,
    make_grid,
    node_mask,
)

__all__ = [
    "Constants",
    "Grid",
    "MadelungBundle",
    "compose",
    "decompose",
    "gradient",
    "integrate",
    "laplacian",
    "make_grid",
    "node_mask",
]

__version__ = "0.1.0"
