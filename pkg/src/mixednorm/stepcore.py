"""Exact calculus of nonnegative piecewise-constant functions on (0, L).

A step function is stored in canonical form (adjacent equal values merged),
so structural equality is meaningful.  All integrals and distribution values
are finite sums evaluated with math.fsum, which is correctly rounded and
therefore independent of summation order; this is what makes equimeasurability
checks exact rather than tolerance games.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass

__all__ = [
    "StepFn",
    "PiecewiseHyperbolic",
    "step_fn",
    "indicator",
    "constant",
    "add",
    "scale",
    "clip_above",
    "truncate",
    "rearrangement",
    "distribution",
    "double_star",
    "hl_pairing_check",
    "compose_power",
    "load_stepfn",
    "dump_stepfn",
]

ABS_TOL = 1e-12


class DomainError(ValueError):
    """Inputs violate a documented precondition."""


@dataclass(frozen=True)
class StepFn:
    """Nonnegative step function on (0, length).

    values[i] holds on the half-open piece [breakpoints[i-1], breakpoints[i]),
    with breakpoints[-1] == length and an implicit leading breakpoint 0.
    """

    length: float
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise DomainError("length must be positive and finite")
        if len(self.breakpoints) != len(self.values) or not self.breakpoints:
            raise DomainError("breakpoints and values must be nonempty and equal length")
        prev = 0.0
        for t in self.breakpoints:
            if not (t > prev and math.isfinite(t)):
                raise DomainError("breakpoints must be strictly increasing from 0")
            prev = t
        if self.breakpoints[-1] != self.length:
            raise DomainError("last breakpoint must equal length")
        for v in self.values:
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError("values must be finite and nonnegative")
        for a, b in zip(self.values, self.values[1:]):
            if a == b:
                raise DomainError("adjacent equal values must be merged (canonical form)")

    def __call__(self, t):
        """Value at t, with half-open [t_{i-1}, t_i) pieces; 0 outside (0, length)."""
        if t < 0 or t >= self.length:
            return 0.0
        return self.values[bisect_right(self.breakpoints, t)]

    def pieces(self):
        """Yield (left, right, value) triples."""
        left = 0.0
        for right, v in zip(self.breakpoints, self.values):
            yield left, right, v
            left = right

    def piece_lengths(self):
        left = 0.0
        out = []
        for t in self.breakpoints:
            out.append(t - left)
            left = t
        return out

    def integral(self):
        return math.fsum(v * l for v, l in zip(self.values, self.piece_lengths()))

    def max_value(self):
        return max(self.values)

    def support_measure(self):
        """Measure of {f > 0}."""
        return math.fsum(l for v, l in zip(self.values, self.piece_lengths()) if v > 0)

    def is_nonincreasing(self):
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def is_zero(self):
        return all(v == 0.0 for v in self.values)


def step_fn(breakpoints, values, length=None):
    """Build a canonical StepFn, merging adjacent equal values."""
    breakpoints = [float(t) for t in breakpoints]
    values = [float(v) for v in values]
    if length is None:
        if not breakpoints:
            raise DomainError("need at least one breakpoint or an explicit length")
        length = breakpoints[-1]
    bps, vals = [], []
    for t, v in zip(breakpoints, values):
        if vals and v == vals[-1]:
            bps[-1] = t
        else:
            bps.append(t)
            vals.append(v)
    return StepFn(float(length), tuple(bps), tuple(vals))


def indicator(a, length=1.0):
    """Characteristic function of (0, a) on (0, length)."""
    if not 0 < a <= length:
        raise DomainError("indicator needs 0 < a <= length")
    if a == length:
        return step_fn([length], [1.0])
    return step_fn([a, length], [1.0, 0.0])


def constant(c, length=1.0):
    return step_fn([length], [c])


def _merged_breakpoints(f, g):
    bps = sorted(set(f.breakpoints) | set(g.breakpoints))
    return bps


def combine(f, g, op):
    """Pointwise binary operation on two step functions of equal length."""
    if f.length != g.length:
        raise DomainError("length mismatch")
    bps = _merged_breakpoints(f, g)
    vals = []
    left = 0.0
    for t in bps:
        mid = 0.5 * (left + t)
        vals.append(op(f(mid), g(mid)))
        left = t
    return step_fn(bps, vals, length=f.length)


def add(f, g):
    return combine(f, g, lambda a, b: a + b)


def scale(f, s):
    if s < 0:
        raise DomainError("scale factor must be nonnegative")
    return step_fn(f.breakpoints, [s * v for v in f.values], length=f.length)


def clip_above(f, c):
    """(f - c)_+ pointwise."""
    return step_fn(f.breakpoints, [max(v - c, 0.0) for v in f.values], length=f.length)


def truncate(f, t):
    """f * chi_(0, t): zero the function beyond t (domain length kept)."""
    if t <= 0:
        return step_fn([f.length], [0.0])
    if t >= f.length:
        return f
    bps, vals = [], []
    for left, right, v in f.pieces():
        if right <= t:
            bps.append(right)
            vals.append(v)
        else:
            if left < t:
                bps.append(t)
                vals.append(v)
            bps.append(f.length)
            vals.append(0.0)
            break
    return step_fn(bps, vals, length=f.length)


def decreasing_from_pairs(pairs, length):
    """Assemble the nonincreasing StepFn from (value, piece_measure) pairs.

    Breakpoints are correctly rounded prefix sums grouped by equal value, so
    two equimeasurable inputs produce structurally identical results.
    """
    pairs = sorted(((float(v), float(l)) for v, l in pairs if l > 0), key=lambda p: -p[0])
    if not pairs:
        return step_fn([length], [0.0])
    bps, vals = [], []
    acc = []
    i = 0
    while i < len(pairs):
        v = pairs[i][0]
        while i < len(pairs) and pairs[i][0] == v:
            acc.append(pairs[i][1])
            i += 1
        vals.append(v)
        bps.append(math.fsum(acc))
    if abs(bps[-1] - length) > 1e-9 * max(1.0, length):
        raise DomainError("piece measures do not add up to the stated length")
    bps[-1] = length
    return step_fn(bps, vals, length=length)


def rearrangement(f):
    """Decreasing rearrangement f* on (0, length).

    Accepts a StepFn, or any object exposing rearrangement() (grid functions).
    A nonincreasing StepFn is its own rearrangement and is returned unchanged.
    """
    if not isinstance(f, StepFn):
        return f.rearrangement()
    if f.is_nonincreasing():
        return f
    return decreasing_from_pairs(
        zip(f.values, f.piece_lengths()), f.length
    )


def distribution(f):
    """Distribution function: level s -> measure of {f > s}.

    Returned as a StepFn on (0, max f + 1], read off the rearrangement's
    breakpoints so that distribution(f) == distribution(rearrangement(f))
    holds structurally.
    """
    fs = rearrangement(f)
    pos = [(t, v) for (_, t, v) in fs.pieces() if v > 0]
    top = fs.values[0]
    dom = top + 1.0
    if not pos:
        return step_fn([dom], [0.0])
    # lambda(s) = t_i on [v_{i+1}, v_i), zero at and above the top value
    bps = [v for (_, v) in reversed(pos)] + [dom]
    vals = [t for (t, _) in reversed(pos)] + [0.0]
    return step_fn(bps, vals, length=dom)


@dataclass(frozen=True)
class PiecewiseHyperbolic:
    """Continuous nonincreasing function t -> a_i/t + b_i per piece.

    Houses running averages of nonincreasing step functions, which are exactly
    of this form.
    """

    length: float
    breakpoints: tuple
    coeffs: tuple  # (a_i, b_i) per piece

    def __call__(self, t):
        if t <= 0:
            # limit from the right: constant first piece (a_1 = 0)
            a, b = self.coeffs[0]
            return b if a == 0.0 else math.inf
        if t >= self.length:
            t = self.length
        i = min(bisect_right(self.breakpoints, t), len(self.coeffs) - 1)
        a, b = self.coeffs[i]
        return a / t + b

    def at_zero(self):
        return self.coeffs[0][1]


def double_star(f):
    """Maximal average f**(t) = (1/t) * integral of f* over (0, t), exactly."""
    fs = rearrangement(f)
    coeffs = []
    acc = []  # piece integrals so far
    left = 0.0
    running = 0.0
    for right, v in zip(fs.breakpoints, fs.values):
        # on [left, right): F(t) = running + v (t - left)
        coeffs.append((running - v * left, v))
        acc.append(v * (right - left))
        running = math.fsum(acc)
        left = right
    return PiecewiseHyperbolic(fs.length, fs.breakpoints, tuple(coeffs))


def hl_pairing_check(f, g):
    """(integral of f g, integral of f* g*); the first never exceeds the second."""
    if f.length != g.length:
        raise DomainError("length mismatch")

    def pair_integral(u, w):
        terms = []
        left = 0.0
        for t in _merged_breakpoints(u, w):
            mid = 0.5 * (left + t)
            terms.append(u(mid) * w(mid) * (t - left))
            left = t
        return math.fsum(terms)

    lhs = pair_integral(f, g)
    rhs = pair_integral(rearrangement(f), rearrangement(g))
    return lhs, rhs


def compose_power(f, a):
    """g(t) = f(t^a) for nonincreasing f on (0, 1): breakpoints map to t^(1/a)."""
    if a <= 0:
        raise DomainError("power must be positive")
    if abs(f.length - 1.0) > ABS_TOL:
        raise DomainError("compose_power requires domain (0, 1)")
    if not f.is_nonincreasing():
        raise DomainError("compose_power requires a nonincreasing input")
    if a == 1.0:
        return f
    bps = [t ** (1.0 / a) for t in f.breakpoints]
    bps[-1] = 1.0
    return step_fn(bps, f.values, length=1.0)


def dump_stepfn(f, path=None):
    """Serialize to the {"length","breakpoints","values"} JSON layout."""
    doc = {
        "length": f.length,
        "breakpoints": list(f.breakpoints),
        "values": list(f.values),
    }
    if path is None:
        return json.dumps(doc)
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return None


def load_stepfn(source):
    """Load and canonicalize a StepFn from a JSON file path or string."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    return step_fn(doc["breakpoints"], doc["values"], length=doc.get("length"))
