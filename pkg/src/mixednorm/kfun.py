"""Peetre K-functionals for couples whose second member is L^inf.

For those couples the infimum over decompositions collapses to a 1-D convex
problem over the truncation height c: any split f = f0 + f1 with sup|f1| = c
satisfies |f0| >= (|f| - c)_+ pointwise, and every supported norm is monotone,
so truncations are optimal.  The scalar problem is solved by a value scan plus
golden-section refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stepcore import DomainError, StepFn, rearrangement, truncate
from .rispace import (
    fundamental_function,
    norm_decreasing_arrays,
    norm_sorted_uniform,
    ri_norm,
)
from .mixed import GridFn, MixedSpaceSpec, mixed_norm, psi_sorted
from .rispace import LINF

__all__ = [
    "CoupleSpec",
    "KProfile",
    "ri_couple",
    "mixed_couple",
    "mixed_pair_couple",
    "k_exact",
    "k_ri_formula",
    "k_mixed_formula",
    "truncation_decomposition",
    "k_lower_bound_property",
    "interp_norm",
    "sample_profile",
]

GOLDEN_REL_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class UnsupportedCoupleError(ValueError):
    """k_exact needs L^inf as the second member; other couples only admit the
    per-decomposition lower-bound check (k_lower_bound_property)."""


@dataclass(frozen=True)
class CoupleSpec:
    """One of (X, Linf), (R(X, Linf), Linf), or (R(X, Y), R(Linf, Y))."""

    kind: str  # "ri" | "mixed" | "mixed_pair"
    X: object
    Y: object = None


def ri_couple(X):
    return CoupleSpec("ri", X)


def mixed_couple(X):
    return CoupleSpec("mixed", X)


def mixed_pair_couple(X, Y):
    return CoupleSpec("mixed_pair", X, Y)


def _golden_min(obj, lo, hi, rel_tol=GOLDEN_REL_TOL):
    """Minimize a convex function on [lo, hi]; returns (argmin, min)."""
    span = hi - lo
    if span <= 0:
        return lo, obj(lo)
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = obj(c), obj(d)
    tol = rel_tol * span
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = obj(d)
    cands = [(obj(lo), lo), (fc, c), (fd, d), (obj(hi), hi)]
    val, arg = min(cands)
    return arg, val


def _objective(f, t, couple):
    """Return (objective over c, c range top) for the truncation reduction."""
    if couple.kind == "ri":
        fs = rearrangement(f) if isinstance(f, StepFn) else f.rearrangement()
        tt = np.concatenate(([0.0], np.asarray(fs.breakpoints)))
        vv = np.asarray(fs.values)
        X = couple.X

        def obj(c):
            return norm_decreasing_arrays(X, tt, np.maximum(vv - c, 0.0)) + t * c

        return obj, float(vv.max(initial=0.0))

    if couple.kind == "mixed":
        if not isinstance(f, GridFn):
            raise DomainError("mixed couple needs a grid function")
        X = couple.X
        base = f.h ** (f.n - 1)
        psis = [psi_sorted(f, k, LINF) for k in range(1, f.n + 1)]

        def obj(c):
            total = t * c
            for srt in psis:
                total += float(norm_sorted_uniform(X, np.maximum(srt - c, 0.0), base))
            return total

        return obj, f.max_value()

    raise UnsupportedCoupleError(
        "exact K is only available against L^inf; use k_lower_bound_property "
        "for the couple (R(X,Y), R(Linf,Y))")


def k_exact(f, t, couple):
    """K(f, t) for the couple, with the optimal truncation height.

    Returns (K, c_opt).  Seeds golden-section search with a coarse scan over
    value quantiles of f, which brackets the kink of the piecewise-smooth
    objective.
    """
    if t <= 0:
        raise DomainError("K-functional parameter must be positive")
    obj, vmax = _objective(f, t, couple)
    if vmax == 0.0:
        return 0.0, 0.0
    # coarse scan: quantile levels of the value range
    grid = np.linspace(0.0, vmax, 17)
    vals = [obj(c) for c in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    c_opt, K = _golden_min(obj, float(lo), float(hi))
    return K, c_opt


def k_ri_formula(f, X, t):
    """Explicit form for the couple (X, Linf): norm of f* cut off at t."""
    fs = rearrangement(f) if isinstance(f, StepFn) else f.rearrangement()
    return ri_norm(X, truncate(fs, t))


def k_mixed_formula(f, X, t):
    """Explicit form for (R(X,Linf), Linf): sum of cut-off section-sup norms."""
    total = 0.0
    base = f.h ** (f.n - 1)
    m_keep = int(math.ceil(t / base - 1e-12))
    for k in range(1, f.n + 1):
        srt = psi_sorted(f, k, LINF).copy()
        if m_keep < srt.size:
            # exact cut at t: shrink the straddling cell's weight by splitting
            cut = truncate(_grid_stepfn(srt, base), t)
            total += ri_norm(X, cut)
        else:
            total += float(norm_sorted_uniform(X, srt, base))
    return total


def _grid_stepfn(sorted_desc, cell):
    from .mixed import decreasing_grid_stepfn

    return decreasing_grid_stepfn(sorted_desc, cell)


def _psi_star_value(srt, base, t):
    idx = int(math.floor(t / base))
    return float(srt[idx]) if 0 <= idx < srt.size else 0.0


def truncation_decomposition(f, t):
    """Split f = F + G at the height alpha_t = sum_j psi*_j(f, Linf)(t).

    F = (f - alpha_t)_+ and G = min(f, alpha_t); this is the decomposition
    whose cost is within a factor 2 of the K-functional for (R(X,Linf), Linf).
    """
    if not 0 < t < 1:
        raise DomainError("t must lie in (0, 1)")
    base = f.h ** (f.n - 1)
    alpha = math.fsum(
        _psi_star_value(psi_sorted(f, k, LINF), base, t) for k in range(1, f.n + 1)
    )
    F = f.clip_above(alpha)
    G = GridFn(f.n, f.cells, np.minimum(f.values, alpha))
    return F, G, alpha


def k_lower_bound_property(f, f0, f1, X, Y, t):
    """(lhs, rhs) of the decomposition inequality for (R(X,Y), R(Linf,Y)):

    sum_k |psi*_k(f,Y) chi_(0,t)|_X  <=  n (|f0|_{R(X,Y)} + phi_X(t) |f1|_{R(Linf,Y)}).
    """
    if not f0.add(f1).allclose(f, tol=1e-12):
        raise DomainError("f0 + f1 must equal f cellwise")
    base = f.h ** (f.n - 1)
    lhs = math.fsum(
        ri_norm(X, truncate(_grid_stepfn(psi_sorted(f, k, Y), base), t))
        for k in range(1, f.n + 1)
    )
    phi = fundamental_function(X)
    rhs = f.n * (
        mixed_norm(f0, MixedSpaceSpec(X, Y))
        + phi(t) * mixed_norm(f1, MixedSpaceSpec(LINF, Y))
    )
    return lhs, rhs


@dataclass(frozen=True)
class KProfile:
    """Sampled K-functional curve: sorted (t, K) pairs for a fixed couple."""

    couple: CoupleSpec
    samples: tuple  # ((t, K), ...)

    def __post_init__(self):
        ts = [t for t, _ in self.samples]
        if any(t <= 0 for t in ts) or sorted(ts) != ts:
            raise DomainError("sample points must be positive and sorted")
        if any(K < 0 for _, K in self.samples):
            raise DomainError("K values must be nonnegative")

    def check_shape(self, tol=1e-9):
        """Nondecreasing, concave, K(t)/t nonincreasing, on the samples."""
        s = self.samples
        for (t1, K1), (t2, K2) in zip(s, s[1:]):
            if K2 < K1 - tol:
                return False
            if K2 * t1 > K1 * t2 * (1 + 1e-9) + tol:
                return False
        for (t1, K1), (t2, K2), (t3, K3) in zip(s, s[1:], s[2:]):
            lin = K1 + (K3 - K1) * (t2 - t1) / (t3 - t1)
            if K2 < lin - tol:
                return False
        return True

    def to_csv(self):
        lines = ["t,K"]
        lines += [f"{t:.12g},{K:.12g}" for t, K in self.samples]
        return "\n".join(lines) + "\n"


def sample_profile(f, couple, ts):
    samples = tuple((float(t), k_exact(f, t, couple)[0]) for t in sorted(ts))
    return KProfile(couple, samples)


def interp_norm(f, couple, theta, q, points=200):
    """Real-interpolation norm (integral of [t^-theta K(t)]^q dt/t)^(1/q).

    Interior on a log grid of `points` samples; tails in closed form using
    K(t) ~ slope * t near zero and K constant for large t (concavity).
    Documented relative tolerance ~1e-4.
    """
    if not 0 < theta < 1:
        raise DomainError("theta must lie in (0, 1)")
    if not (q >= 1):
        raise DomainError("q must lie in [1, inf]")
    obj, vmax = _objective(f, 1.0, couple)  # validates the couple
    if vmax == 0.0:
        return 0.0
    k_top = obj(0.0)  # cost of the trivial split: the full first-member norm
    t_min = 1e-6 * k_top
    t_max = 1e3 * k_top

    def K(t):
        return k_exact(f, t, couple)[0]

    slope = K(t_min) / t_min
    K_inf = K(t_max)
    if q == math.inf:
        grid = np.geomspace(t_min, t_max, points)
        interior = max(t ** (-theta) * K(t) for t in grid)
        low = t_min ** (1.0 - theta) * slope
        high = K_inf * t_max ** (-theta)
        return max(interior, low, high)
    low = slope ** q * t_min ** ((1.0 - theta) * q) / ((1.0 - theta) * q)
    high = K_inf ** q * t_max ** (-theta * q) / (theta * q)
    grid = np.geomspace(t_min, t_max, points)
    vals = np.array([(t ** (-theta) * K(t)) ** q for t in grid])
    interior = float(np.trapezoid(vals, np.log(grid)))
    return (low + interior + high) ** (1.0 / q)
