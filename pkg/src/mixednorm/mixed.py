"""Grid functions on the unit cube: sections, section norms, mixed norms, and
the geometric projection inequalities.

Cells are half-open products of [(i-1)h, ih), so level sets, sections and
essential projections are finite exact objects.  Axis k is 1-based and maps to
array axis k-1 (row-major, axis 1 slowest).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .stepcore import DomainError, StepFn, decreasing_from_pairs, step_fn
from .rispace import LINF, RiSpaceSpec, norm_sorted_uniform

__all__ = [
    "GridFn",
    "CellSet",
    "MixedSpaceSpec",
    "section",
    "psi",
    "psi_sorted",
    "bp_norm",
    "mixed_norm",
    "level_set",
    "essential_projection",
    "loomis_whitney_check",
    "distribution_product_check",
    "pointwise_fournier_bound",
    "load_gridfn",
    "dump_gridfn",
]

MAX_DIM = 4


@dataclass(frozen=True, eq=False)
class GridFn:
    """Nonnegative function constant on cells of a uniform grid over (0,1)^n.

    Dimension 1 is allowed internally so that section-norm maps of planar
    functions are again grid functions.
    """

    n: int
    cells: int
    values: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIM:
            raise DomainError(f"dimension must be in 1..{MAX_DIM}")
        if self.cells < 1:
            raise DomainError("need at least one cell per axis")
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if vals.shape != (self.cells,) * self.n:
            raise DomainError("values must have shape (N,)*n")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise DomainError("values must be finite and nonnegative")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def h(self):
        return 1.0 / self.cells

    @property
    def cell_measure(self):
        return self.h ** self.n

    def max_value(self):
        return float(self.values.max())

    def sorted_values(self):
        """All cell values, flat, descending."""
        return np.sort(self.values, axis=None)[::-1]

    def rearrangement(self):
        """Decreasing rearrangement as a StepFn on (0, 1)."""
        return decreasing_grid_stepfn(self.sorted_values(), self.cell_measure)

    def rearrangement_value(self, s):
        """f*(s) without building the StepFn (half-open piece convention)."""
        idx = int(math.floor(s / self.cell_measure))
        srt = self.sorted_values()
        return float(srt[idx]) if 0 <= idx < srt.size else 0.0

    def clip_above(self, c):
        return GridFn(self.n, self.cells, np.maximum(self.values - c, 0.0))

    def scale(self, s):
        if s < 0:
            raise DomainError("scale factor must be nonnegative")
        return GridFn(self.n, self.cells, self.values * s)

    def add(self, other):
        _check_same_grid(self, other)
        return GridFn(self.n, self.cells, self.values + other.values)

    def refine(self, factor=2):
        """Same function on a grid with factor-times more cells per axis."""
        vals = self.values
        for ax in range(self.n):
            vals = np.repeat(vals, factor, axis=ax)
        return GridFn(self.n, self.cells * factor, vals)

    def allclose(self, other, tol=0.0):
        return (self.n == other.n and self.cells == other.cells
                and np.allclose(self.values, other.values, rtol=0.0, atol=tol))


def _check_same_grid(f, g):
    if f.n != g.n or f.cells != g.cells:
        raise DomainError("grid mismatch")


def decreasing_grid_stepfn(sorted_desc, cell):
    """StepFn on (0,1) from descending cell values of equal measure `cell`."""
    sorted_desc = np.asarray(sorted_desc, dtype=float)
    m = sorted_desc.size
    bps = np.arange(1, m + 1) * cell
    bps[-1] = 1.0
    return step_fn(bps, sorted_desc, length=1.0)


@dataclass(frozen=True, eq=False)
class CellSet:
    """Subset of grid cells, as a boolean mask."""

    n: int
    cells: int
    mask: np.ndarray

    def __post_init__(self):
        mask = np.ascontiguousarray(np.asarray(self.mask, dtype=bool))
        if mask.shape != (self.cells,) * self.n:
            raise DomainError("mask must have shape (N,)*n")
        mask.flags.writeable = False
        object.__setattr__(self, "mask", mask)

    @property
    def measure(self):
        return int(self.mask.sum()) * (1.0 / self.cells) ** self.n

    def indices(self):
        """Sorted list of 1-based multi-indices."""
        return [tuple(int(i) + 1 for i in idx) for idx in np.argwhere(self.mask)]

    def same_as(self, other):
        return (self.n == other.n and self.cells == other.cells
                and bool(np.array_equal(self.mask, other.mask)))


@dataclass(frozen=True)
class MixedSpaceSpec:
    """Pair (X on the base cube, Y on the interval) plus mode: a single axis k
    (1-based) or "symmetric" for the sum over all axes."""

    X: RiSpaceSpec
    Y: RiSpaceSpec
    mode: object = "symmetric"

    def axes(self, n):
        if self.mode == "symmetric":
            return range(1, n + 1)
        k = int(self.mode)
        if not 1 <= k <= n:
            raise DomainError(f"axis {k} out of range for dimension {n}")
        return (k,)


def section(f, k, jhat):
    """1-D section along axis k at the base multi-index jhat (1-based)."""
    if not 1 <= k <= f.n:
        raise DomainError(f"axis {k} out of range")
    jhat = tuple(int(j) for j in jhat)
    if len(jhat) != f.n - 1 or any(not 1 <= j <= f.cells for j in jhat):
        raise DomainError("base index out of range")
    idx = tuple(j - 1 for j in jhat[: k - 1]) + (slice(None),) + tuple(j - 1 for j in jhat[k - 1:])
    line = f.values[idx]
    bps = np.arange(1, f.cells + 1) * f.h
    bps[-1] = 1.0
    return step_fn(bps, line, length=1.0)


def _axis_section_norms(f, k, Y):
    """Array of Y-norms of all axis-k sections, shape (N,)*(n-1)."""
    ax = k - 1
    if Y.kind == "Linf":
        return f.values.max(axis=ax)
    if Y.kind == "L1":
        return f.values.sum(axis=ax) * f.h
    moved = np.moveaxis(f.values, ax, -1)
    srt = -np.sort(-moved, axis=-1)
    return norm_sorted_uniform(Y, srt, f.h)


def psi(f, k, Y):
    """Section-norm map: base point -> Y-norm of the section along axis k."""
    if f.n < 2:
        raise DomainError("psi needs dimension >= 2")
    if not 1 <= k <= f.n:
        raise DomainError(f"axis {k} out of range")
    return GridFn(f.n - 1, f.cells, _axis_section_norms(f, k, Y))


def psi_sorted(f, k, Y):
    """Descending values of psi(f, k, Y); the rearrangement's cell values."""
    return np.sort(_axis_section_norms(f, k, Y), axis=None)[::-1]


def bp_norm(f, k, X, Y):
    """Benedek-Panzone norm: X-norm of the rearranged section-norm map."""
    srt = psi_sorted(f, k, Y)
    return float(norm_sorted_uniform(X, srt, f.h ** (f.n - 1)))


def mixed_norm(f, spec):
    """Single-axis Benedek-Panzone norm, or the symmetric sum over all axes."""
    return math.fsum(bp_norm(f, k, spec.X, spec.Y) for k in spec.axes(f.n))


def level_set(f, alpha):
    """Cells where the value exceeds alpha."""
    if alpha < 0:
        raise DomainError("level must be nonnegative")
    return CellSet(f.n, f.cells, f.values > alpha)


def essential_projection(E, k):
    """Base indices whose axis-k section meets E in at least one cell."""
    if not 1 <= k <= E.n:
        raise DomainError(f"axis {k} out of range")
    if E.n < 2:
        raise DomainError("projection needs dimension >= 2")
    return CellSet(E.n - 1, E.cells, E.mask.any(axis=k - 1))


def loomis_whitney_check(E):
    """(|E|, product of projection measures to the power 1/(n-1))."""
    lhs = E.measure
    if not E.mask.any():
        return lhs, 0.0
    rhs = 1.0
    for k in range(1, E.n + 1):
        rhs *= essential_projection(E, k).measure
    return lhs, rhs ** (1.0 / (E.n - 1))


def distribution_product_check(f, t):
    """(lambda_f(t), product of the section-sup distributions^(1/(n-1)))."""
    if t < 0:
        raise DomainError("level must be nonnegative")
    lhs = int((f.values > t).sum()) * f.cell_measure
    rhs = 1.0
    base = f.h ** (f.n - 1)
    for k in range(1, f.n + 1):
        rhs *= int((_axis_section_norms(f, k, LINF) > t).sum()) * base
    return lhs, rhs ** (1.0 / (f.n - 1))


def pointwise_fournier_bound(f, s):
    """(f*(s), sum over axes of psi*_k at s^(1/n')), with n' = n/(n-1)."""
    if not 0 < s < 1:
        raise DomainError("s must lie in (0, 1)")
    nprime = f.n / (f.n - 1)
    lhs = f.rearrangement_value(s)
    u = s ** (1.0 / nprime)
    base = f.h ** (f.n - 1)
    idx = int(math.floor(u / base))
    total = 0.0
    for k in range(1, f.n + 1):
        srt = psi_sorted(f, k, LINF)
        if idx < srt.size:
            total += float(srt[idx])
    return lhs, total



def dump_gridfn(f, path=None):
    """Serialize to the {"n","cells_per_axis","values"} JSON layout."""
    doc = {
        "n": f.n,
        "cells_per_axis": f.cells,
        "values": [float(v) for v in f.values.reshape(-1)],
    }
    if path is None:
        return json.dumps(doc)
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return None


def load_gridfn(source):
    """Load a GridFn from a JSON file path or string (row-major values)."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    n, N = int(doc["n"]), int(doc["cells_per_axis"])
    vals = np.asarray(doc["values"], dtype=float)
    if vals.size != N ** n:
        raise DomainError("value count does not match n and cells_per_axis")
    return GridFn(n, N, vals.reshape((N,) * n))
