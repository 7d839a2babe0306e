"""Seeded property-check suites and the machine-readable report.

Each suite draws its inputs from numpy's default_rng (PCG64) seeded by
(config.seed, suite index), so reports are byte-identical across runs and
counterexamples replay from the seed alone.  Reports carry no timestamps or
timings for the same reason.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import stepcore
from .stepcore import StepFn, add, indicator, step_fn, truncate
from .rispace import (
    L1,
    LINF,
    PHI_SQRT,
    fundamental_function,
    a5_constant,
    format_space,
    lebesgue,
    lorentz,
    lorentz_lambda,
    ri_norm,
    subst_norm,
)
from .mixed import (
    CellSet,
    GridFn,
    MixedSpaceSpec,
    dump_gridfn,
    essential_projection,
    level_set,
    loomis_whitney_check,
    mixed_norm,
    psi,
    psi_sorted,
)
from .kfun import (
    interp_norm,
    k_exact,
    k_mixed_formula,
    k_ri_formula,
    mixed_couple,
    ri_couple,
)
from .embed import (
    fournier_check,
    fubini_check,
    optimal_range_norm,
    range_for_L1_target,
    sharpness_sweep,
    tilde_Xp_norm,
)

__all__ = ["SuiteConfig", "SUITE_IDS", "run_all", "report_json",
           "random_stepfn", "random_gridfn", "random_cellset"]

GENERATOR_ID = "numpy PCG64 (default_rng)"

_N_CAPS = {2: 64, 3: 32, 4: 12}


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 20217
    geometry_samples: int = 1000
    distribution_grids: int = 500
    k_grids: int = 200
    k_stepfns: int = 500
    interp_grids: int = 50
    fubini_grids: int = 300
    axiom_samples: int = 500
    N2: int = 16
    N3: int = 8
    N4: int = 6
    tolerances: dict = field(default_factory=dict)
    outdir: str | None = None

    def __post_init__(self):
        for name in ("geometry_samples", "distribution_grids", "k_grids",
                     "k_stepfns", "interp_grids", "fubini_grids", "axiom_samples"):
            if getattr(self, name) < 1:
                raise stepcore.DomainError(f"{name} must be at least 1")
        for n, cap in _N_CAPS.items():
            if getattr(self, f"N{n}") > cap:
                raise stepcore.DomainError(f"N for n={n} must not exceed {cap}")

    def tol(self, key, default):
        return self.tolerances.get(key, default)


def random_stepfn(rng, max_pieces=10, vmax=4.0):
    """Random nonnegative step function on (0, 1)."""
    k = int(rng.integers(2, max_pieces + 1))
    cuts = np.sort(rng.random(k - 1))
    cuts = cuts[(np.diff(np.concatenate(([0.0], cuts))) > 1e-6)]
    bps = list(cuts) + [1.0]
    vals = rng.random(len(bps)) * vmax
    if rng.random() < 0.3:  # inject some zeros for support variety
        vals[rng.integers(0, len(vals))] = 0.0
    return step_fn(bps, vals, length=1.0)


def random_gridfn(rng, n, N, vmax=3.0):
    vals = rng.random((N,) * n) ** 2 * vmax
    if rng.random() < 0.3:
        vals *= rng.random((N,) * n) < 0.5
    return GridFn(n, N, vals)


def random_cellset(rng, n, N):
    p = rng.uniform(0.1, 0.7)
    return CellSet(n, N, rng.random((N,) * n) < p)


def _axis_box(rng, n, N):
    """Random axis-aligned box of cells (Loomis-Whitney equality case)."""
    mask = np.ones((N,) * n, dtype=bool)
    for ax in range(n):
        lo = int(rng.integers(0, N - 1))
        hi = int(rng.integers(lo + 1, N + 1))
        sel = np.zeros(N, dtype=bool)
        sel[lo:hi] = True
        shape = [1] * n
        shape[ax] = N
        mask &= sel.reshape(shape)
    return CellSet(n, N, mask)


def _fail(result, description, payload=None):
    result["passed"] = False
    result["violations"] += 1
    if len(result["counterexamples"]) < 5:
        entry = {"description": description}
        if payload is not None:
            entry["input"] = payload
        result["counterexamples"].append(entry)


def _new_result(statement):
    return {"statement": statement, "passed": True, "checks": 0,
            "violations": 0, "constants": {}, "counterexamples": []}


# ---------------------------------------------------------------------------


def suite_geometry(cfg, rng):
    res = _new_result(
        "the measure of a cell set is at most the product of its essential "
        "projection measures to the power 1/(n-1), with equality on axis "
        "boxes; projections of level sets equal level sets of section-sup maps")
    tol = cfg.tol("geometry", 1e-12)
    for i in range(cfg.geometry_samples):
        n = 2 if i % 2 == 0 else 3
        N = cfg.N2 if n == 2 else cfg.N3
        E = random_cellset(rng, n, N)
        lhs, rhs = loomis_whitney_check(E)
        res["checks"] += 1
        if lhs > rhs * (1 + tol) + tol:
            _fail(res, f"projection product bound violated: {lhs} > {rhs}")
        B = _axis_box(rng, n, N)
        bl, br = loomis_whitney_check(B)
        res["checks"] += 1
        if abs(bl - br) > tol * max(1.0, bl):
            _fail(res, f"axis box equality off: {bl} vs {br}")
        f = random_gridfn(rng, n, N)
        alpha = float(rng.uniform(0.0, f.max_value() + 0.1))
        E2 = level_set(f, alpha)
        for k in range(1, n + 1):
            res["checks"] += 1
            proj = essential_projection(E2, k)
            via_psi = level_set(psi(f, k, LINF), alpha)
            if not proj.same_as(via_psi):
                _fail(res, f"projection/level-set mismatch on axis {k}",
                      dump_gridfn(f))
    return res


def suite_distribution(cfg, rng):
    res = _new_result(
        "the distribution of f is bounded by the product of the section-sup "
        "distributions^(1/(n-1)), and f*(s) is at most the sum over axes of "
        "psi*_k(s^{1/n'}), at every rearrangement breakpoint")
    tol = cfg.tol("distribution", 1e-12)
    for i in range(cfg.distribution_grids):
        n = 2 if i % 2 == 0 else 3
        N = cfg.N2 if n == 2 else cfg.N3
        f = random_gridfn(rng, n, N)
        cell = f.cell_measure
        base = f.h ** (n - 1)
        flat = np.sort(f.values, axis=None)  # ascending
        M = flat.size
        levels = np.unique(flat)
        psis = [np.sort(psi_sorted(f, k, LINF)) for k in range(1, n + 1)]
        lhs_counts = M - np.searchsorted(flat, levels, side="right")
        rhs = np.ones_like(levels)
        for pa in psis:
            rhs *= (pa.size - np.searchsorted(pa, levels, side="right")) * base
        rhs = rhs ** (1.0 / (n - 1))
        res["checks"] += levels.size
        bad = lhs_counts * cell > rhs * (1 + tol) + tol
        if bad.any():
            _fail(res, f"distribution product bound violated at level "
                       f"{levels[bad][0]}", dump_gridfn(f))
        # pointwise bound at every breakpoint s = m * cell
        desc = flat[::-1]
        m = np.arange(1, M + 1)
        u = (m * cell) ** ((n - 1.0) / n)
        idx = np.minimum(np.floor(u / base).astype(int), psis[0].size)
        total = np.zeros(M)
        for pa in psis:
            padded = np.concatenate((pa[::-1], [0.0]))
            total += padded[idx]
        fstar = np.concatenate((desc[1:], [0.0]))  # f* just right of each breakpoint
        res["checks"] += M
        if (fstar > total + tol).any():
            _fail(res, "pointwise section bound violated", dump_gridfn(f))
    return res


def suite_fournier(cfg, rng):
    res = _new_result(
        "the L^{n',1} norm of f is at most n' times its mixed (L1, Linf) "
        "norm; the half-cube indicator attains ratio 1")
    tol = cfg.tol("fournier", 1e-9)
    worst = 0.0
    for i in range(cfg.distribution_grids):
        n = 2 if i % 2 == 0 else 3
        N = cfg.N2 if n == 2 else cfg.N3
        f = random_gridfn(rng, n, N)
        lor, mixed, ratio = fournier_check(f)
        res["checks"] += 1
        nprime = n / (n - 1.0)
        worst = max(worst, ratio / nprime)
        if ratio > nprime + tol:
            _fail(res, f"ratio {ratio} exceeds n'={nprime}", dump_gridfn(f))
    N = cfg.N2 - cfg.N2 % 2
    vals = np.zeros((N, N))
    vals[: N // 2, : N // 2] = 1.0
    _, _, ratio = fournier_check(GridFn(2, N, vals))
    res["checks"] += 1
    if abs(ratio - 1.0) > cfg.tol("fournier_square", 1e-12):
        _fail(res, f"half-cube indicator ratio {ratio} != 1")
    res["constants"]["worst_ratio_over_nprime"] = worst
    return res


_K_SPACES = None


def _k_spaces():
    global _K_SPACES
    if _K_SPACES is None:
        _K_SPACES = (L1, lorentz(2, 1), lebesgue(2))
    return _K_SPACES


def suite_k_sandwich(cfg, rng):
    res = _new_result(
        "the K-functional of (mixed(X, Linf), Linf) lies between 1/n and 2 "
        "times the sum of the cut-off section-sup norms; the square indicator "
        "with X = L1 gives exactly min(2a, t)")
    rel = cfg.tol("k_sandwich", 1e-9)
    ts = np.geomspace(1e-3, 0.9, 20)
    for i in range(cfg.k_grids):
        n = 2 if i % 3 else 3
        N = cfg.N2 if n == 2 else cfg.N3
        f = random_gridfn(rng, n, N)
        X = _k_spaces()[i % 3]
        phi = fundamental_function(X)
        couple = mixed_couple(X)
        for t in ts:
            # K is matched at the parameter phi_X(t) against the cut at t
            K, _ = k_exact(f, phi(float(t)), couple)
            km = k_mixed_formula(f, X, float(t))
            res["checks"] += 1
            if km / n > K * (1 + rel) + 1e-12 or K > 2 * km * (1 + rel) + 1e-12:
                _fail(res, f"sandwich violated at t={t}: K={K}, sum={km}",
                      dump_gridfn(f))
    N = cfg.N2 - cfg.N2 % 4
    a = 0.25
    vals = np.zeros((N, N))
    vals[: N // 4, : N // 4] = 1.0
    square = GridFn(2, N, vals)
    for t in np.geomspace(1e-3, 5.0, 20):
        K, _ = k_exact(square, float(t), mixed_couple(L1))
        want = min(2 * a, float(t))
        res["checks"] += 1
        if abs(K - want) > rel * max(1.0, want):
            _fail(res, f"square closed form off at t={t}: {K} vs {want}")
    return res


def suite_k_classical(cfg, rng):
    res = _new_result(
        "for the couple (L1, Linf) the K-functional equals the integral of "
        "f* over (0, t)")
    rel = cfg.tol("k_classical", 1e-9)
    ts = np.geomspace(1e-3, 2.0, 20)
    couple = ri_couple(L1)
    for _ in range(cfg.k_stepfns):
        f = random_stepfn(rng)
        for t in ts:
            K, _ = k_exact(f, float(t), couple)
            want = k_ri_formula(f, L1, float(t))
            res["checks"] += 1
            if abs(K - want) > rel * max(1e-12, want):
                _fail(res, f"classical identity off at t={t}: {K} vs {want}",
                      stepcore.dump_stepfn(f))
    return res


def suite_substitution(cfg, rng):
    res = _new_result(
        "norms of f*(t^a) match their Lorentz change-of-variables closed "
        "forms for the range constructions a = 1/n', n', (n-1)', (p(n-1))'")
    rel = cfg.tol("substitution", 1e-9)

    def close(a, b):
        return abs(a - b) <= rel * max(1e-12, abs(a), abs(b))

    for _ in range(200):
        f = stepcore.rearrangement(random_stepfn(rng))
        n = 2
        nprime = 2.0
        for r, s in ((3.0, 1.0), (4.0, 2.0)):
            got = subst_norm(lorentz(r, s), f, 1.0 / nprime)
            want = nprime ** (1.0 / s) * ri_norm(lorentz(r / nprime, s), f)
            res["checks"] += 1
            if not close(got, want):
                _fail(res, f"a=1/n' identity off for (r,s)=({r},{s})",
                      stepcore.dump_stepfn(f))
        for p, q in ((1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 2.0)):
            got = optimal_range_norm(lorentz(p, q), n, f)
            want = (1.0 / nprime) ** (1.0 / q) * ri_norm(lorentz(nprime * p, q), f)
            res["checks"] += 1
            if not close(got, want):
                _fail(res, f"range identity off for (p,q)=({p},{q})",
                      stepcore.dump_stepfn(f))
        got = range_for_L1_target(lorentz(2, 1), 3, f)
        want = (1.0 / 2.0) ** (1.0) * ri_norm(lorentz(4, 1), f)
        res["checks"] += 1
        if not close(got, want):
            _fail(res, "three-index L1-target range identity off",
                  stepcore.dump_stepfn(f))
        got = tilde_Xp_norm(L1, 2.0, 2, f)
        want = 0.5 * ri_norm(lorentz(2, 1), f)
        res["checks"] += 1
        if not close(got, want):
            _fail(res, "tilde range identity off", stepcore.dump_stepfn(f))
    return res


def suite_interpolation(cfg, rng):
    res = _new_result(
        "the (1/2, 2) real-interpolation norm of the couple "
        "(mixed(L1,Linf), Linf) is uniformly equivalent to the mixed "
        "(L2, Linf) norm; the interval indicator for (L1, Linf) gives "
        "sqrt(2b)")
    spread_cap = cfg.tol("interp_spread", 100.0)
    ratios = []
    target = MixedSpaceSpec(lebesgue(2), LINF)
    couple = mixed_couple(L1)
    for _ in range(cfg.interp_grids):
        f = random_gridfn(rng, 2, 8)
        if f.max_value() == 0.0:
            continue
        num = interp_norm(f, couple, 0.5, 2.0)
        den = mixed_norm(f, target)
        ratios.append(num / den)
        res["checks"] += 1
    lo, hi = min(ratios), max(ratios)
    res["constants"]["ratio_min"] = lo
    res["constants"]["ratio_max"] = hi
    res["constants"]["ratio_spread"] = hi / lo
    if hi / lo > spread_cap:
        _fail(res, f"ratio spread {hi / lo} exceeds {spread_cap}")
    for b in (0.1, 0.25, 0.5):
        got = interp_norm(indicator(b), ri_couple(L1), 0.5, 2.0)
        want = math.sqrt(2.0 * b)
        res["checks"] += 1
        if abs(got - want) > cfg.tol("interp_oracle", 5e-3) * want:
            _fail(res, f"interval-indicator oracle off: {got} vs {want}")
    return res


def suite_fubini(cfg, rng):
    res = _new_result(
        "for planar grids the mixed (X, L1) norm is at most twice the mixed "
        "(L1, X) norm")
    tol = cfg.tol("fubini", 1e-12)
    spaces = (lebesgue(2), lorentz(3, 1))
    for i in range(cfg.fubini_grids):
        f = random_gridfn(rng, 2, cfg.N2)
        X = spaces[i % 2]
        lhs, rhs = fubini_check(f, X)
        res["checks"] += 1
        if lhs > 2 * rhs * (1 + tol) + tol:
            _fail(res, f"order-exchange bound violated for {format_space(X)}",
                  dump_gridfn(f))
    return res


def suite_sharpness(cfg, rng):
    res = _new_result(
        "for the rejected embeddings (second Lorentz index reversed; target "
        "first index above n') witness-ladder ratios grow by at least 1.5x "
        "per dyadic step; the holding direction stays bounded")
    growth = cfg.tol("sharpness_growth", 1.5)
    for sweep_id in ("q-reversal", "fournier-range"):
        rep = sharpness_sweep(sweep_id)
        ratios = [row[3] for row in rep.trajectory]
        res["constants"][sweep_id] = ratios
        res["checks"] += len(ratios) - 1
        if rep.verdict != "fails":
            _fail(res, f"{sweep_id}: decider unexpectedly returned {rep.verdict}")
        for a, b in zip(ratios, ratios[1:]):
            if b < growth * a:
                _fail(res, f"{sweep_id}: step growth {b / a} below {growth}")
    rep = sharpness_sweep("q-forward")
    res["checks"] += 1
    if rep.verdict != "holds" or not math.isfinite(rep.measured_constant):
        _fail(res, "holding direction did not report a finite constant")
    res["constants"]["q-forward"] = rep.measured_constant
    return res


def suite_axioms(cfg, rng):
    res = _new_result(
        "each supported functional is subadditive on rearrangements, "
        "monotone, rearrangement invariant, and dominates the integral up to "
        "its associate fundamental constant")
    tol = cfg.tol("axioms", 1e-12)
    spaces = (L1, LINF, lebesgue(2), lorentz(2, 1), lorentz(3, 2),
              lorentz_lambda(PHI_SQRT))
    for _ in range(cfg.axiom_samples):
        f = random_stepfn(rng)
        g = random_stepfn(rng)
        fg = add(f, g)
        fmin = stepcore.combine(f, g, min)
        perm = _permuted(rng, f)
        for X in spaces:
            nf, ng = ri_norm(X, f), ri_norm(X, g)
            scale = max(1.0, nf + ng)
            res["checks"] += 4
            if ri_norm(X, fg) > nf + ng + tol * scale:
                _fail(res, f"triangle inequality failed for {format_space(X)}",
                      stepcore.dump_stepfn(f))
            if ri_norm(X, fmin) > min(nf, ng) + tol * scale:
                _fail(res, f"monotonicity failed for {format_space(X)}")
            if abs(ri_norm(X, perm) - nf) > tol * scale:
                _fail(res, f"rearrangement invariance failed for {format_space(X)}")
            if X.kind != "Lambda":
                if f.integral() > a5_constant(X) * nf + tol * scale:
                    _fail(res, f"integral bound failed for {format_space(X)}")
    return res


def _permuted(rng, f):
    """Equimeasurable shuffle of f's pieces."""
    pieces = list(zip(f.values, f.piece_lengths()))
    order = rng.permutation(len(pieces))
    bps, vals = [], []
    acc = 0.0
    for j in order:
        v, l = pieces[j]
        acc += l
        bps.append(acc)
        vals.append(v)
    bps[-1] = f.length
    return step_fn(bps, vals, length=f.length)


SUITE_IDS = (
    "01-geometry",
    "02-distribution-bounds",
    "03-fournier-constant",
    "04-k-sandwich",
    "05-k-classical",
    "06-substitution",
    "07-interpolation",
    "08-fubini",
    "09-sharpness",
    "10-norm-axioms",
)

_SUITES = {
    "01-geometry": suite_geometry,
    "02-distribution-bounds": suite_distribution,
    "03-fournier-constant": suite_fournier,
    "04-k-sandwich": suite_k_sandwich,
    "05-k-classical": suite_k_classical,
    "06-substitution": suite_substitution,
    "07-interpolation": suite_interpolation,
    "08-fubini": suite_fubini,
    "09-sharpness": suite_sharpness,
    "10-norm-axioms": suite_axioms,
}


def run_all(config=None, only=None):
    """Run the suites; returns the report dict (report['passed'] overall)."""
    cfg = config or SuiteConfig()
    suites = {}
    for idx, sid in enumerate(SUITE_IDS):
        if only is not None and sid not in only:
            continue
        rng = np.random.default_rng([cfg.seed, idx])
        suites[sid] = _SUITES[sid](cfg, rng)
    report = {
        "generator": GENERATOR_ID,
        "seed": cfg.seed,
        "config": {k: v for k, v in asdict(cfg).items() if k != "outdir"},
        "suites": suites,
        "passed": all(s["passed"] for s in suites.values()),
    }
    return report


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
