"""Uniform Cartesian grids on the unit square and nodal scalar fields.

The spatial domain is always [0,1]^2, discretized by nodes x_i = i*h,
y_j = j*h with h = 1/N for N cells per side.  Fields store one value per
node in an (N+1, N+1) array indexed [i, j] (first index along x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# One-sided derivative stencils reach up to 5 nodes from the base node,
# so grids used for differencing need at least 8 cells per side.
MIN_CELLS = 8


class GridError(ValueError):
    """Invalid grid construction or field/grid mismatch."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform node grid on [0,1]^2 with n_cells intervals per side."""

    n_cells: int

    def __post_init__(self):
        if not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < 1:
            raise GridError(f"n_cells must be a positive integer, got {self.n_cells!r}")

    @property
    def h(self) -> float:
        return 1.0 / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def nodes(self) -> np.ndarray:
        """1D node coordinates, shared by both axes."""
        return np.arange(self.n_cells + 1) / self.n_cells

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) node coordinate arrays, indexed [i, j]."""
        x = self.nodes
        return np.meshgrid(x, x, indexing="ij")

    def interior_meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.nodes[1:-1]
        return np.meshgrid(x, x, indexing="ij")


def make_grid(n_cells: int) -> GridSpec:
    """Build a grid with at least MIN_CELLS cells per side.

    Coarser grids cannot host the one-sided derivative formulas, which
    reach offsets up to +-5 from a node.
    """
    if n_cells < MIN_CELLS:
        raise GridError(
            f"grid too coarse: n_cells={n_cells} < {MIN_CELLS} "
            "(derivative stencils reach 5 nodes off-center)"
        )
    return GridSpec(int(n_cells))


@dataclass(frozen=True)
class ScalarField:
    """Nodal values of a scalar function on a GridSpec.

    Values are copied on construction and frozen; fields are safe to share
    across threads.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        n = self.grid.n_nodes
        if vals.shape != (n, n):
            raise GridError(
                f"field shape {vals.shape} does not match grid {(n, n)}"
            )
        if not np.all(np.isfinite(vals)):
            i, j = np.argwhere(~np.isfinite(vals))[0]
            raise GridError(f"non-finite field value at node ({i}, {j})")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def interior(self) -> np.ndarray:
        return self.values[1:-1, 1:-1]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def zeros_field(grid: GridSpec) -> ScalarField:
    return ScalarField(grid, np.zeros((grid.n_nodes, grid.n_nodes)))


def sample_scalar(fn, grid: GridSpec, t: float = 0.0) -> ScalarField:
    """Sample fn(x, y, t) at every node.

    fn must accept numpy arrays for x and y; scalar-valued fn broadcasts.
    A non-finite sample raises, naming the offending node.
    """
    X, Y = grid.meshgrid()
    vals = np.asarray(fn(X, Y, t), dtype=float)
    vals = np.broadcast_to(vals, X.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise GridError(
            f"non-finite sample at node ({i}, {j}), "
            f"x={X[i, j]:.6g}, y={Y[i, j]:.6g}, t={t:.6g}"
        )
    return ScalarField(grid, vals)


def boundary_mask(grid: GridSpec) -> np.ndarray:
    n = grid.n_nodes
    mask = np.zeros((n, n), dtype=bool)
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
    return mask
