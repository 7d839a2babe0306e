import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixednorm.stepcore import (
    DomainError,
    add,
    clip_above,
    combine,
    compose_power,
    constant,
    distribution,
    double_star,
    dump_stepfn,
    hl_pairing_check,
    indicator,
    load_stepfn,
    rearrangement,
    scale,
    step_fn,
    truncate,
)


def stepfns(max_pieces=8, vmax=5.0):
    @st.composite
    def build(draw):
        k = draw(st.integers(2, max_pieces))
        cuts = sorted(draw(st.lists(
            st.floats(0.01, 0.99), min_size=k - 1, max_size=k - 1, unique=True)))
        cuts = [c for i, c in enumerate(cuts) if i == 0 or c - cuts[i - 1] > 1e-4]
        vals = draw(st.lists(st.floats(0.0, vmax), min_size=len(cuts) + 1,
                             max_size=len(cuts) + 1))
        return step_fn(cuts + [1.0], vals, length=1.0)

    return build()


def test_canonical_merge_and_call():
    f = step_fn([0.25, 0.5, 1.0], [2.0, 2.0, 1.0])
    assert f.breakpoints == (0.5, 1.0)
    assert f(0.0) == 2.0
    assert f(0.49) == 2.0
    assert f(0.5) == 1.0  # half-open pieces
    assert f(1.0) == 0.0
    assert f(-0.1) == 0.0


def test_constructor_rejects_bad_input():
    with pytest.raises(DomainError):
        step_fn([0.5, 0.25, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        step_fn([1.0], [-1.0])
    with pytest.raises(DomainError):
        step_fn([0.5], [1.0], length=1.0)  # last breakpoint != length


def test_indicator_and_constant():
    f = indicator(0.5)
    assert f.integral() == 0.5
    assert f.support_measure() == 0.5
    assert indicator(1.0).values == (1.0,)
    assert constant(3.0).max_value() == 3.0
    with pytest.raises(DomainError):
        indicator(1.5)


def test_rearrangement_simple():
    f = step_fn([0.25, 0.75, 1.0], [1.0, 3.0, 2.0])
    fs = rearrangement(f)
    assert fs.is_nonincreasing()
    assert fs.values == (3.0, 2.0, 1.0)
    assert fs.breakpoints == (0.5, 0.75, 1.0)
    assert fs.integral() == f.integral()


def test_rearrangement_groups_equal_values():
    f = step_fn([0.2, 0.5, 0.7, 1.0], [2.0, 1.0, 2.0, 0.0])
    fs = rearrangement(f)
    assert fs.values == (2.0, 1.0, 0.0)
    assert fs.breakpoints[0] == pytest.approx(0.4, rel=1e-15)


def test_distribution_reads_off_rearrangement():
    f = step_fn([0.25, 1.0], [3.0, 1.0])
    lam = distribution(f)
    assert lam(0.5) == 1.0  # measure of {f > 0.5}
    assert lam(2.0) == 0.25
    assert lam(3.0) == 0.0


@settings(max_examples=100, deadline=None)
@given(stepfns())
def test_distribution_invariant_under_rearrangement(f):
    assert distribution(f) == distribution(rearrangement(f))


@settings(max_examples=100, deadline=None)
@given(stepfns())
def test_rearrangement_preserves_integral_and_max(f):
    fs = rearrangement(f)
    assert fs.is_nonincreasing()
    assert fs.max_value() == f.max_value()
    assert fs.integral() == pytest.approx(f.integral(), rel=1e-12, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(stepfns(), stepfns())
def test_hardy_littlewood_pairing(f, g):
    lhs, rhs = hl_pairing_check(f, g)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


def test_double_star_exact():
    f = step_fn([0.5, 1.0], [2.0, 0.0])
    ds = double_star(f)
    assert ds(0.25) == 2.0
    assert ds(0.5) == 2.0
    assert ds(1.0) == pytest.approx(1.0, abs=0)  # (1/1) * integral = 1
    assert ds.at_zero() == 2.0


@settings(max_examples=50, deadline=None)
@given(stepfns(), st.floats(0.01, 0.99))
def test_double_star_dominates_fstar(f, t):
    fs = rearrangement(f)
    assert double_star(f)(t) >= fs(t) - 1e-12


def test_clip_truncate_scale_add():
    f = step_fn([0.5, 1.0], [3.0, 1.0])
    assert clip_above(f, 1.0).values == (2.0, 0.0)
    g = truncate(f, 0.25)
    assert g(0.1) == 3.0 and g(0.3) == 0.0
    assert scale(f, 2.0).values == (6.0, 2.0)
    s = add(f, indicator(0.5))
    assert s(0.1) == 4.0 and s(0.7) == 1.0
    m = combine(f, indicator(0.75), min)
    assert m(0.1) == 1.0 and m(0.6) == 1.0 and m(0.8) == 0.0


def test_compose_power():
    f = indicator(0.25)
    g = compose_power(f, 2.0)  # g(t) = f(t^2), support (0, 1/2)
    assert g.breakpoints[0] == pytest.approx(0.5, abs=1e-15)
    assert g(0.4) == 1.0 and g(0.6) == 0.0
    with pytest.raises(DomainError):
        compose_power(step_fn([0.5, 1.0], [1.0, 2.0]), 2.0)  # not nonincreasing
    with pytest.raises(DomainError):
        compose_power(f, -1.0)


def test_json_roundtrip(tmp_path):
    f = step_fn([0.3, 1.0], [2.0, 0.5])
    assert load_stepfn(dump_stepfn(f)) == f
    path = tmp_path / "f.json"
    dump_stepfn(f, str(path))
    assert load_stepfn(str(path)) == f
