"""Embedding machinery: optimal range/domain norm constructions, a Lorentz
embedding decider, forward inequalities with explicit constants, extremal
witness generators, and diverging-ratio sharpness sweeps.

All constructions live on the unit cube with balls centered at (1/2, ..., 1/2)
and radius r < 1/2; every quantity checked is translation invariant, so the
centering is harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stepcore import DomainError, StepFn, double_star, indicator, step_fn
from .rispace import (
    L1,
    LINF,
    boyd_indices,
    lorentz,
    norm_decreasing_arrays,
    ri_norm,
    subst_norm,
    UnsupportedSpaceError,
)
from .mixed import GridFn, MixedSpaceSpec, mixed_norm

__all__ = [
    "EmbeddingReport",
    "WitnessSpec",
    "WitnessResult",
    "OptimalDomainResult",
    "unit_ball_measure",
    "optimal_range_norm",
    "optimal_domain_norm",
    "range_for_L1_target",
    "tilde_Xp_norm",
    "embedding_condition_check",
    "lorentz_embedding_decider",
    "fournier_check",
    "fubini_check",
    "witness_generate",
    "sharpness_sweep",
    "dyadic_profile",
    "SHARPNESS_IDS",
]


def unit_ball_measure(m):
    """Volume of the Euclidean unit ball in R^m (1 for m = 0, 2 for m = 1)."""
    if m < 0:
        raise DomainError("dimension must be nonnegative")
    return math.pi ** (m / 2.0) / math.gamma(m / 2.0 + 1.0)


def _nprime(n):
    if n < 2:
        raise DomainError("dimension must be at least 2")
    return n / (n - 1.0)


# ---------------------------------------------------------------------------
# substitution-based optimal constructions


def optimal_range_norm(X, n, fstar):
    """Smallest-range norm for sections measured in L^inf: |f*(t^{n'})|_X."""
    return subst_norm(X, fstar, _nprime(n))


def range_for_L1_target(X, n, fstar):
    """Range norm when sections are measured in L^1: |f*(t^{(n-1)'})|_X.

    Only meaningful from three indices up: with n = 2 the inner exponent
    (n-1)' is undefined.
    """
    if n < 3:
        raise DomainError("this range construction requires n >= 3")
    a = (n - 1.0) / (n - 2.0)
    return subst_norm(X, fstar, a)


def tilde_Xp_norm(X, p, n, fstar):
    """Range norm |f*(t^{(p(n-1))'})|_X for sources with L^{p,1} base; known
    to be non-optimal in general (a strictly better range exists for p > 1)."""
    if not p > 1:
        raise DomainError("requires p > 1")
    if n < 2:
        raise DomainError("dimension must be at least 2")
    s = p * (n - 1.0)
    return subst_norm(X, fstar, s / (s - 1.0))


# ---------------------------------------------------------------------------
# optimal domain norm via guaranteed bracketing of the f** substitution


@dataclass(frozen=True)
class OptimalDomainResult:
    """Bracketed value of |f**(s^{1/n'})|_Z plus the f* substitute.

    value is the bracket midpoint; [lower, upper] is a guaranteed enclosure.
    ratio compares against |f*(t^{1/n'})|_Z, which is an equivalent norm only
    when the upper Boyd index of Z is below 1/n' (equivalence_reliable).
    """

    value: float
    lower: float
    upper: float
    subst_value: float
    ratio: float
    equivalence_reliable: bool


def _double_star_eval(ph, u):
    """Vectorized evaluation of a PiecewiseHyperbolic at points u >= 0."""
    u = np.asarray(u, dtype=float)
    idx = np.minimum(
        np.searchsorted(np.asarray(ph.breakpoints), u, side="right"),
        len(ph.coeffs) - 1,
    )
    a = np.asarray([c[0] for c in ph.coeffs])[idx]
    b = np.asarray([c[1] for c in ph.coeffs])[idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(u > 0, a / np.where(u > 0, u, 1.0) + b, ph.at_zero())
    return out


def optimal_domain_norm(Z, n, fstar, rel_tol=1e-6, max_points=1 << 21):
    """Z-norm of s -> f**(s^{1/n'}) with a guaranteed enclosure.

    The map is continuous and nonincreasing, so the Z-norms of the step
    functions reading it at left / right endpoints of a grid bracket the true
    value; the grid keeps all kink images t_i^{n'} and is refined between them
    until the bracket's relative width drops below rel_tol.
    """
    if not fstar.is_nonincreasing():
        raise DomainError("requires a nonincreasing profile")
    nprime = _nprime(n)
    ph = double_star(fstar)

    if fstar.is_zero():
        return OptimalDomainResult(0.0, 0.0, 0.0, 0.0, 1.0, True)

    kinks = np.concatenate(([0.0], np.asarray(ph.breakpoints) ** nprime))
    kinks[-1] = 1.0

    def bracket(per_segment):
        pieces = [
            np.linspace(lo, hi, per_segment + 1)[:-1]
            for lo, hi in zip(kinks, kinks[1:])
        ]
        grid = np.concatenate(pieces + [np.array([1.0])])
        g = _double_star_eval(ph, grid ** (1.0 / nprime))
        upper = norm_decreasing_arrays(Z, grid, g[:-1])
        lower = norm_decreasing_arrays(Z, grid, g[1:])
        return lower, upper

    per_segment = 8
    lower, upper = bracket(per_segment)
    while upper - lower > rel_tol * upper:
        if per_segment * (len(kinks) - 1) * 2 > max_points:
            break
        per_segment *= 2
        lower, upper = bracket(per_segment)

    value = 0.5 * (lower + upper)
    subst_value = subst_norm(Z, fstar, 1.0 / nprime)
    ratio = value / subst_value if subst_value > 0 else math.inf
    try:
        reliable = boyd_indices(Z)[1] < 1.0 / nprime
    except UnsupportedSpaceError:
        reliable = False
    return OptimalDomainResult(value, lower, upper, subst_value, ratio, reliable)


# ---------------------------------------------------------------------------
# Lorentz embedding decider and condition checks


def _lorentz_pq(X):
    """(p, q) of a space in the Lebesgue/Lorentz family, else None."""
    if X.kind == "L1":
        return (1.0, 1.0)
    if X.kind == "Lp":
        return (X.p, X.p)
    if X.kind == "Lpq":
        return (X.p, X.q)
    return None


def lorentz_embedding_decider(p1, q1, p2, q2, relation="space"):
    """Verdict for L^{p1,q1} -> L^{p2,q2} on a probability space.

    Holds exactly when p2 < p1, or p2 = p1 with q1 <= q2.  The same index
    condition decides the mixed-norm variants: "mixed_left_Linf" compares
    R(L^{p1,q1}, Linf) with R(L^{p2,q2}, Linf), and "mixed_right_fixed"
    compares section spaces against a fixed base space.  Out-of-range
    parameters give "unknown".
    """
    if relation not in ("space", "mixed_left_Linf", "mixed_right_fixed"):
        raise DomainError(f"unknown relation {relation!r}")
    for p, q in ((p1, q1), (p2, q2)):
        if not (p >= 1.0 and 1.0 <= q <= math.inf) or p == math.inf:
            return "unknown"
        if p == 1.0 and q != 1.0:
            return "unknown"
    if p2 < p1 or (p2 == p1 and q1 <= q2):
        return "holds"
    return "fails"


@dataclass(frozen=True)
class EmbeddingReport:
    """Outcome of an embedding check or sweep.

    trajectory rows are (param, source_norm, target_norm, ratio); for a
    failing verdict the ratios must strictly increase (the divergence
    evidence), for a holding one the measured constant must be finite.
    """

    embedding_id: str
    verdict: str  # "holds" | "fails" | "unknown"
    conditions: str
    measured_constant: float
    witness_kind: str = ""
    trajectory: tuple = ()
    forward_constant: float = 0.0

    def __post_init__(self):
        if self.verdict == "holds" and not math.isfinite(self.measured_constant):
            raise DomainError("holding embedding must report a finite constant")
        if self.verdict == "fails" and self.trajectory:
            ratios = [row[3] for row in self.trajectory]
            if any(b <= a for a, b in zip(ratios, ratios[1:])):
                raise DomainError("failure evidence requires strictly increasing ratios")

    def to_csv(self):
        lines = ["param,source_norm,target_norm,ratio"]
        lines += [
            f"{p:.12g},{s:.12g},{t:.12g},{r:.12g}" for p, s, t, r in self.trajectory
        ]
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "embedding_id": self.embedding_id,
            "verdict": self.verdict,
            "conditions": self.conditions,
            "measured_constant": self.measured_constant,
            "witness_kind": self.witness_kind,
            "trajectory": [list(row) for row in self.trajectory],
            "forward_constant": self.forward_constant,
        }


def embedding_condition_check(X, Z, n, family, grids=()):
    """Does R(X, Linf) embed into Z?  Reduces to |f*(t^{1/n'})|_Z <= C |f|_X.

    measured_constant is the largest observed ratio over the profile family;
    for Lorentz X, Z the analytic verdict comes from the index condition on
    (X, dilated Z).  On each supplied grid the forward inequality
    |g|_Z <= n * C * |g|_{R(X, Linf)} is re-verified (constant n from summing
    the per-axis bounds).
    """
    if not family:
        raise DomainError("need a nonempty profile family")
    nprime = _nprime(n)
    C = 0.0
    for f in family:
        src = ri_norm(X, f)
        if src == 0.0:
            continue
        C = max(C, subst_norm(Z, f, 1.0 / nprime) / src)

    pqX, pqZ = _lorentz_pq(X), _lorentz_pq(Z)
    if pqX is not None and pqZ is not None:
        verdict = lorentz_embedding_decider(
            pqX[0], pqX[1], pqZ[0] / nprime, pqZ[1], "space"
        )
        conditions = (
            f"holds iff pZ/n' < pX, or pZ/n' = pX with qX <= qZ "
            f"(pX={pqX[0]:g}, qX={pqX[1]:g}, pZ={pqZ[0]:g}, qZ={pqZ[1]:g}, n'={nprime:g})"
        )
    else:
        verdict = "unknown"
        conditions = "no analytic index condition for this pair"

    forward = 0.0
    spec = MixedSpaceSpec(X, LINF)
    for g in grids:
        mixed = mixed_norm(g, spec)
        if mixed == 0.0:
            continue
        lhs = ri_norm(Z, g.rearrangement())
        if lhs > n * C * mixed * (1.0 + 1e-9):
            raise DomainError("forward embedding bound violated on a grid sample")
        forward = max(forward, lhs / mixed)

    return EmbeddingReport(
        embedding_id=f"mixed({_label(X)},Linf)->{_label(Z)}[n={n}]",
        verdict=verdict,
        conditions=conditions,
        measured_constant=C,
        forward_constant=forward,
    )


def _label(X):
    from .rispace import format_space

    return format_space(X)


# ---------------------------------------------------------------------------
# forward inequalities with explicit constants


def fournier_check(f):
    """(|f*|_{L^{n',1}}, |f|_{R(L1,Linf)}, ratio); the ratio never exceeds n'."""
    n = f.n
    lor = ri_norm(lorentz(_nprime(n), 1.0), f.rearrangement())
    mixed = mixed_norm(f, MixedSpaceSpec(L1, LINF))
    ratio = lor / mixed if mixed > 0 else 0.0
    return lor, mixed, ratio


def fubini_check(f, X):
    """(|f|_{R(X,L1)}, |f|_{R(L1,X)}) for planar grids; lhs <= 2 rhs."""
    if f.n != 2:
        raise DomainError("the order-exchange bound is two-dimensional")
    lhs = mixed_norm(f, MixedSpaceSpec(X, L1))
    rhs = mixed_norm(f, MixedSpaceSpec(L1, X))
    return lhs, rhs


# ---------------------------------------------------------------------------
# witness generators

_WITNESS_KINDS = ("diagonal", "radial_surface", "radial_volume", "cylinder", "integral")


@dataclass(frozen=True)
class WitnessSpec:
    """Recipe for an extremal function on (0,1)^n built from a 1-D profile.

    kind selects the geometry; profile is the nonincreasing g* being
    transplanted; r is the construction radius (the support must fit, e.g. a
    diagonal slab needs lambda_g(0) <= 2r/n).  phi is the fundamental function
    of the section space, used only by the integral kind.
    """

    kind: str
    profile: StepFn
    n: int
    N: int
    r: float = 0.25
    phi: object = None

    def __post_init__(self):
        if self.kind not in _WITNESS_KINDS:
            raise DomainError(f"unknown witness kind {self.kind!r}")
        if not 2 <= self.n <= 4:
            raise DomainError("witness dimension must be 2..4")
        if self.N < 2:
            raise DomainError("need at least 2 cells per axis")
        if not 0.0 < self.r < 0.5:
            raise DomainError("radius must lie in (0, 1/2)")
        if abs(self.profile.length - 1.0) > 1e-12:
            raise DomainError("profile must live on (0, 1)")
        if not self.profile.is_nonincreasing():
            raise DomainError("profile must be nonincreasing")
        if self.kind == "integral" and self.phi is None:
            raise DomainError("integral witness needs the section fundamental function")
        support = self.profile.support_measure()
        n, r = self.n, self.r
        if self.kind == "diagonal":
            cap = 2.0 * r / n
            if support > cap * (1 + 1e-12):
                raise DomainError(
                    f"profile support {support:g} violates lambda_g(0) <= 2r/n = {cap:g}")
        elif self.kind in ("radial_surface", "cylinder", "integral"):
            cap = unit_ball_measure(n - 1) * r ** (n - 1)
            if support > cap * (1 + 1e-12):
                raise DomainError(
                    f"profile support {support:g} exceeds the radius-r ball slice {cap:g}")
        elif self.kind == "radial_volume":
            cap = unit_ball_measure(n) * r ** n
            if support > cap * (1 + 1e-12):
                raise DomainError(
                    f"profile support {support:g} exceeds the radius-r ball {cap:g}")


@dataclass(frozen=True)
class WitnessResult:
    grid: GridFn
    ideal: dict  # analytic norms of the ideal (un-sampled) witness


def _stepfn_eval_array(f, arr):
    """f evaluated at an array of points (half-open piece convention)."""
    bps = np.asarray(f.breakpoints)
    vals = np.concatenate((np.asarray(f.values), [0.0]))
    idx = np.searchsorted(bps, arr, side="right")
    out = vals[np.minimum(idx, len(vals) - 1)]
    out = np.where((arr >= 0) & (arr < f.length), out, 0.0)
    return out


def _level_integral(profile, weight):
    """Integral over levels alpha of weight(lambda_profile(alpha)), exactly.

    For a step profile the distribution is constant between consecutive
    values, so the integral is a finite sum.
    """
    terms = []
    vals = list(profile.values) + [0.0]
    for (left, right, v), nxt in zip(profile.pieces(), vals[1:]):
        if v > nxt:
            terms.append((v - nxt) * weight(right))
    return math.fsum(terms)


def _centered_coords(n, N):
    h = 1.0 / N
    axis = (np.arange(N) + 0.5) * h - 0.5
    return np.meshgrid(*([axis] * n), indexing="ij")


def _integral_transform(profile, u, phi, n):
    """I(u) = integral over (u, 1) of profile(t) / (t * phi(2 (t/w)^{1/(n-1)})) dt
    with w the unit-ball measure in n-1 dimensions, evaluated exactly on the
    profile's pieces (phi is a power, so each piece integrates in closed form).
    """
    w = unit_ball_measure(n - 1)
    beta = phi.exponent / (n - 1.0)
    D = phi.coeff * 2.0 ** phi.exponent * w ** (-beta)
    if D <= 0:
        raise DomainError("fundamental function must be strictly increasing")
    out = np.zeros_like(u, dtype=float)
    for left, right, v in profile.pieces():
        if v == 0.0:
            continue
        lo = np.clip(u, left, right)
        if beta == 0.0:
            piece = np.log(right / np.maximum(lo, 1e-300))
        else:
            piece = (lo ** (-beta) - right ** (-beta)) / beta
        out += (v / D) * np.where(lo < right, piece, 0.0)
    return out


def witness_generate(spec):
    """Sample the witness at cell centers; also report analytic ideal norms."""
    n, N, r = spec.n, spec.N, spec.r
    coords = _centered_coords(n, N)
    profile = spec.profile
    ideal = {}

    if spec.kind == "diagonal":
        s = sum(coords)
        inside = np.ones_like(s, dtype=bool)
        for c in coords:
            inside &= np.abs(c) < r
        values = _stepfn_eval_array(profile, 2.0 * np.abs(s)) * inside
    elif spec.kind == "radial_surface":
        rad = np.sqrt(sum(c * c for c in coords))
        arg = unit_ball_measure(n - 1) * rad ** (n - 1)
        values = _stepfn_eval_array(profile, arg)
        ideal["mixed_L1_Linf"] = n * profile.integral()
        wn, wm = unit_ball_measure(n), unit_ball_measure(n - 1)
        ideal["integral"] = _level_integral(
            profile, lambda t: wn * (t / wm) ** (n / (n - 1.0))
        )
    elif spec.kind == "radial_volume":
        rad = np.sqrt(sum(c * c for c in coords))
        arg = unit_ball_measure(n) * rad ** n
        values = _stepfn_eval_array(profile, arg)
        wn, wm = unit_ball_measure(n), unit_ball_measure(n - 1)
        ideal["mixed_L1_Linf"] = n * _level_integral(
            profile, lambda t: wm * (t / wn) ** (1.0 / _nprime(n))
        )
        ideal["integral"] = profile.integral()
        ideal["fournier_lorentz"] = ri_norm(lorentz(_nprime(n), 1.0), profile)
    elif spec.kind == "cylinder":
        rad = np.sqrt(sum(c * c for c in coords[:-1]))
        arg = unit_ball_measure(n - 1) * rad ** (n - 1)
        values = _stepfn_eval_array(profile, arg)
    elif spec.kind == "integral":
        rad = np.sqrt(sum(c * c for c in coords))
        arg = unit_ball_measure(n - 1) * rad ** (n - 1)
        values = _integral_transform(profile, arg, spec.phi, n)
    else:  # pragma: no cover
        raise DomainError(spec.kind)

    return WitnessResult(GridFn(n, N, values), ideal)


# ---------------------------------------------------------------------------
# sharpness sweeps


def dyadic_profile(levels, scale=1.0):
    """Truncated t^{-1/2} profile with `levels` dyadic steps on (0, 1)."""
    if levels < 1:
        raise DomainError("need at least one level")
    bps = [2.0 ** (-(levels - 1 - j)) for j in range(levels)]
    vals = [scale * 2.0 ** ((levels - 1 - j) / 2.0) for j in range(levels)]
    return step_fn(bps, vals, length=1.0)


SHARPNESS_IDS = ("q-reversal", "q-forward", "fournier-range")


def sharpness_sweep(embedding_id, ladder=None, scale=1.0, s=4.0, n=2):
    """Run a registered ratio sweep along a dyadic parameter ladder.

    "q-reversal": L^{2,inf} sections against an L^{2,1} target (the second
    index decreases, so the embedding fails); profiles are truncated t^{-1/2}
    staircases with 2^m levels and the norm ratio roughly doubles per step.

    "q-forward": the same pair the right way round; the ratio stays bounded.

    "fournier-range": replacing the L^{n',1} target by L^{s,1} with s > n';
    shrinking ball indicators drive the ratio to infinity.
    """
    if embedding_id == "q-reversal":
        verdict = lorentz_embedding_decider(2, math.inf, 2, 1, "mixed_right_fixed")
        src, tgt = lorentz(2, math.inf), lorentz(2, 1)
        if ladder is None:
            ladder = (2, 3, 4, 5, 6)
        rows = []
        for m in ladder:
            g = dyadic_profile(2 ** int(m), scale)
            a, b = ri_norm(src, g), ri_norm(tgt, g)
            rows.append((float(2 ** int(m)), a, b, b / a))
        return EmbeddingReport(
            embedding_id, verdict,
            "second Lorentz index decreases (q_target < q_source at equal p)",
            measured_constant=max(rw[3] for rw in rows),
            witness_kind="diagonal", trajectory=tuple(rows))

    if embedding_id == "q-forward":
        verdict = lorentz_embedding_decider(2, 1, 2, math.inf, "mixed_right_fixed")
        src, tgt = lorentz(2, 1), lorentz(2, math.inf)
        if ladder is None:
            ladder = (2, 3, 4, 5, 6)
        rows = []
        for m in ladder:
            g = dyadic_profile(2 ** int(m), scale)
            a, b = ri_norm(src, g), ri_norm(tgt, g)
            rows.append((float(2 ** int(m)), a, b, b / a))
        return EmbeddingReport(
            embedding_id, verdict,
            "second Lorentz index increases at equal p",
            measured_constant=max(rw[3] for rw in rows),
            witness_kind="diagonal", trajectory=tuple(rows))

    if embedding_id == "fournier-range":
        nprime = _nprime(n)
        if not s > nprime:
            raise DomainError("sweep needs a target index s > n'")
        verdict = lorentz_embedding_decider(1, 1, s / nprime, 1, "space")
        if ladder is None:
            ladder = (0, 1, 2, 3, 4)
        wn, wm = unit_ball_measure(n), unit_ball_measure(n - 1)
        rows = []
        for m in ladder:
            a = scale * 0.1 * 8.0 ** (-int(m))
            profile = indicator(a)
            # ideal mixed norm of the ball indicator with this volume
            src = n * wm * (a / wn) ** (1.0 / nprime)
            tgt = ri_norm(lorentz(s, 1), profile)
            rows.append((a, src, tgt, tgt / src))
        return EmbeddingReport(
            embedding_id, verdict,
            f"target first index s={s:g} exceeds n'={nprime:g}",
            measured_constant=max(rw[3] for rw in rows),
            witness_kind="radial_volume", trajectory=tuple(rows))

    raise DomainError(f"unknown sweep id {embedding_id!r}; choose from {SHARPNESS_IDS}")
