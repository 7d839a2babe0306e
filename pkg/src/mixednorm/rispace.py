"""Rearrangement-invariant space descriptors and exact norm evaluation.

A closed family of spaces is supported: L^1, L^inf, L^p, Lorentz L^{p,q}, and
Lorentz Lambda spaces with power-shaped fundamental functions.  Every norm is
a closed-form functional of the decreasing rearrangement, so all downstream
inequality checks are exact up to floating-point powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stepcore import DomainError, StepFn, compose_power, rearrangement, step_fn

__all__ = [
    "FundamentalFn",
    "RiSpaceSpec",
    "UnsupportedSpaceError",
    "L1",
    "LINF",
    "lebesgue",
    "lorentz",
    "lorentz_lambda",
    "ri_norm",
    "norm_decreasing_arrays",
    "norm_sorted_uniform",
    "fundamental_function",
    "associate_space",
    "lambda_norm",
    "boyd_indices",
    "dilate",
    "subst_norm",
    "a5_constant",
    "parse_space",
    "format_space",
]


class UnsupportedSpaceError(ValueError):
    """The requested operation is not defined for this space."""


@dataclass(frozen=True)
class FundamentalFn:
    """Power-form fundamental function t -> coeff * t^exponent, with a stated
    right limit at zero (nonzero only for L^inf)."""

    coeff: float
    exponent: float
    at_zero: float = 0.0

    def __call__(self, t):
        if t <= 0:
            return self.at_zero
        return self.coeff * t ** self.exponent


PHI_SQRT = FundamentalFn(1.0, 0.5)
PHI_ID = FundamentalFn(1.0, 1.0)
PHI_CBRT = FundamentalFn(1.0, 1.0 / 3.0)
_BUILTIN_PHI = {"sqrt": PHI_SQRT, "id": PHI_ID, "cbrt": PHI_CBRT}


@dataclass(frozen=True)
class RiSpaceSpec:
    """Descriptor of a supported r.i. space.

    kind is one of "L1", "Linf", "Lp", "Lpq", "Lambda"; p and q are meaningful
    for "Lp"/"Lpq", phi for "Lambda".  measure is the underlying domain measure
    (the unit cube gives 1).
    """

    kind: str
    p: float = 0.0
    q: float = 0.0
    phi: FundamentalFn | None = None
    measure: float = 1.0

    def __post_init__(self):
        if self.kind in ("L1", "Linf"):
            return
        if self.kind == "Lp":
            if not 1.0 < self.p < math.inf:
                raise DomainError("Lebesgue exponent must satisfy 1 < p < inf "
                                  "(use L1/Linf for the endpoints)")
            return
        if self.kind == "Lpq":
            if self.p == 1.0:
                if self.q != 1.0:
                    raise DomainError("L^{1,q} with q != 1 is not a norm")
                return
            if not (1.0 < self.p < math.inf and 1.0 <= self.q <= math.inf):
                raise DomainError("Lorentz requires 1 < p < inf and 1 <= q <= inf")
            return
        if self.kind == "Lambda":
            if self.phi is None:
                raise DomainError("Lambda space needs a fundamental function")
            if self.phi.coeff < 0 or self.phi.at_zero < 0 or not 0 <= self.phi.exponent <= 1:
                raise DomainError("Lambda fundamental function must be nondecreasing")
            return
        raise DomainError(f"unknown space kind {self.kind!r}")

    def is_norm(self):
        """True when the rearrangement form of the functional is subadditive.

        For L^{p,q} with q > p it is only a quasi-norm, so triangle-inequality
        sweeps skip those parameters.
        """
        if self.kind == "Lpq":
            return self.q <= self.p
        return True


L1 = RiSpaceSpec("L1")
LINF = RiSpaceSpec("Linf")


def lebesgue(p):
    if p == 1:
        return L1
    if p == math.inf:
        return LINF
    return RiSpaceSpec("Lp", p=float(p), q=float(p))


def lorentz(p, q):
    p, q = float(p), float(q)
    if p == q == math.inf:
        return LINF
    if p == q == 1.0:
        return L1
    return RiSpaceSpec("Lpq", p=p, q=q)


def lorentz_lambda(phi):
    return RiSpaceSpec("Lambda", phi=phi)


def _as_arrays(fstar):
    t = np.concatenate(([0.0], np.asarray(fstar.breakpoints)))
    v = np.asarray(fstar.values)
    return t, v


def norm_decreasing_arrays(X, t, v):
    """Norm of the nonincreasing step function with right endpoints t[1:] and
    values v (t[0] == 0).  Closed form per piece; no canonical form required."""
    if X.kind == "L1":
        return float(np.sum(v * np.diff(t)))
    if X.kind == "Linf":
        return float(v[0]) if len(v) else 0.0
    if X.kind in ("Lp", "Lpq"):
        p, q = X.p, X.q
        if p == 1.0:  # L^{1,1}
            return float(np.sum(v * np.diff(t)))
        if q == math.inf:
            return float(np.max(v * t[1:] ** (1.0 / p)))
        s = np.sum(v ** q * (p / q) * np.diff(t ** (q / p)))
        return float(s ** (1.0 / q))
    if X.kind == "Lambda":
        phi = X.phi
        pt = phi.coeff * t ** phi.exponent
        pt[0] = phi.at_zero
        return float(np.sum(v * np.diff(pt)) + v[0] * phi.at_zero)
    raise UnsupportedSpaceError(X.kind)


def norm_sorted_uniform(X, v, cell, axis=None):
    """Norm of a nonincreasing sequence v over cells of equal measure `cell`.

    v may be multi-dimensional with the sorted (descending) direction last;
    with axis=None v is 1-D.  Used as the fast path for grid sections.
    """
    v = np.asarray(v, dtype=float)
    m = v.shape[-1]
    t = np.arange(m + 1) * cell
    if X.kind == "L1":
        return v.sum(axis=-1) * cell
    if X.kind == "Linf":
        return v[..., 0]
    if X.kind in ("Lp", "Lpq"):
        p, q = X.p, X.q
        if p == 1.0:
            return v.sum(axis=-1) * cell
        if q == math.inf:
            return (v * t[1:] ** (1.0 / p)).max(axis=-1)
        w = (p / q) * np.diff(t ** (q / p))
        return (v ** q * w).sum(axis=-1) ** (1.0 / q)
    if X.kind == "Lambda":
        phi = X.phi
        pt = phi.coeff * t ** phi.exponent
        pt[0] = phi.at_zero
        return (v * np.diff(pt)).sum(axis=-1) + v[..., 0] * phi.at_zero
    raise UnsupportedSpaceError(X.kind)


def ri_norm(X, fstar):
    """Exact norm of a step function; rearranges first if not nonincreasing."""
    if not isinstance(fstar, StepFn):
        fstar = fstar.rearrangement()
    if not fstar.is_nonincreasing():
        fstar = rearrangement(fstar)
    if X.kind == "Lambda":
        return lambda_norm(X.phi, fstar)
    t, v = _as_arrays(fstar)
    return norm_decreasing_arrays(X, t, v)


def lambda_norm(phi, fstar):
    """Stieltjes sum sum_i v_i (phi(t_i) - phi(t_{i-1})) + v_1 phi(0+)."""
    if not fstar.is_nonincreasing():
        fstar = rearrangement(fstar)
    terms = [fstar.values[0] * phi.at_zero]
    prev = phi.at_zero
    for t, v in zip(fstar.breakpoints, fstar.values):
        cur = phi(t)
        terms.append(v * (cur - prev))
        prev = cur
    return math.fsum(terms)


def fundamental_function(X):
    """phi_X(t) = norm of an indicator of measure t, in closed power form."""
    if X.kind == "L1":
        return PHI_ID
    if X.kind == "Linf":
        return FundamentalFn(1.0, 0.0, at_zero=1.0)
    if X.kind in ("Lp", "Lpq"):
        p, q = X.p, X.q
        if p == 1.0:
            return PHI_ID
        if q == math.inf:
            return FundamentalFn(1.0, 1.0 / p)
        return FundamentalFn((p / q) ** (1.0 / q), 1.0 / p)
    if X.kind == "Lambda":
        return X.phi
    raise UnsupportedSpaceError(X.kind)


def _conjugate(e):
    if e == 1.0:
        return math.inf
    if e == math.inf:
        return 1.0
    return e / (e - 1.0)


def associate_space(X):
    """Koethe dual, by the classical table; Lambda spaces are unsupported."""
    if X.kind == "L1":
        return LINF
    if X.kind == "Linf":
        return L1
    if X.kind == "Lp":
        return lebesgue(_conjugate(X.p))
    if X.kind == "Lpq":
        if X.p == 1.0:
            return LINF
        return lorentz(_conjugate(X.p), _conjugate(X.q))
    raise UnsupportedSpaceError("associate space of a Lambda space is not tabulated")


def boyd_indices(X):
    """(lower, upper) Boyd indices from the analytic table."""
    if X.kind == "L1":
        return (1.0, 1.0)
    if X.kind == "Linf":
        return (0.0, 0.0)
    if X.kind in ("Lp", "Lpq"):
        return (1.0 / X.p, 1.0 / X.p)
    raise UnsupportedSpaceError("Boyd indices of a Lambda space are not tabulated")


def a5_constant(X):
    """Constant C with integral(f) <= C * norm_X(f): phi of the associate at
    full measure (Hoelder against the indicator)."""
    Xp = associate_space(X)
    return fundamental_function(Xp)(X.measure)


def dilate(f, t):
    """Dilation E_t f(s) = f(s/t) on (0, L), truncated at L, zero beyond tL."""
    if t <= 0:
        raise DomainError("dilation parameter must be positive")
    L = f.length
    if t == 1.0:
        return f
    bps, vals = [], []
    for right, v in zip(f.breakpoints, f.values):
        r = right * t
        if r >= L:
            bps.append(L)
            vals.append(v)
            break
        bps.append(r)
        vals.append(v)
    else:
        # t < 1: pad with zero up to L
        bps.append(L)
        vals.append(0.0)
    return step_fn(bps, vals, length=L)


def subst_norm(X, fstar, a):
    """Norm of t -> f*(t^a), exactly, via the breakpoint transform."""
    return ri_norm(X, compose_power(fstar, a))


def format_space(X):
    if X.kind == "L1":
        return "L1"
    if X.kind == "Linf":
        return "Linf"
    if X.kind == "Lp":
        return f"Lp:{X.p:g}"
    if X.kind == "Lpq":
        qtxt = "inf" if X.q == math.inf else f"{X.q:g}"
        return f"Lpq:{X.p:g},{qtxt}"
    if X.kind == "Lambda":
        for name, phi in _BUILTIN_PHI.items():
            if phi == X.phi:
                return f"Lambda:{name}"
        return f"Lambda:{X.phi.coeff:g}*t^{X.phi.exponent:g}"
    raise UnsupportedSpaceError(X.kind)


def parse_space(text):
    """Parse the CLI syntax: L1, Linf, Lp:2, Lpq:2,1, Lpq:3,inf, Lambda:sqrt."""
    text = text.strip()
    if text == "L1":
        return L1
    if text == "Linf":
        return LINF
    if text.startswith("Lp:"):
        return lebesgue(float(text[3:]))
    if text.startswith("Lpq:"):
        ptxt, qtxt = text[4:].split(",")
        q = math.inf if qtxt.strip() in ("inf", "oo") else float(qtxt)
        return lorentz(float(ptxt), q)
    if text.startswith("Lambda:"):
        name = text[7:]
        if name not in _BUILTIN_PHI:
            raise DomainError(f"unknown Lambda form {name!r}; choose from {sorted(_BUILTIN_PHI)}")
        return lorentz_lambda(_BUILTIN_PHI[name])
    raise DomainError(f"cannot parse space {text!r}")
