import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixednorm.stepcore import indicator, rearrangement, step_fn
from mixednorm.rispace import (
    L1,
    LINF,
    PHI_SQRT,
    RiSpaceSpec,
    UnsupportedSpaceError,
    a5_constant,
    associate_space,
    boyd_indices,
    dilate,
    format_space,
    fundamental_function,
    lambda_norm,
    lebesgue,
    lorentz,
    lorentz_lambda,
    parse_space,
    ri_norm,
    subst_norm,
)
from mixednorm.stepcore import DomainError

SPACES = (L1, LINF, lebesgue(2), lorentz(2, 1), lorentz(3, 2),
          lorentz(2, math.inf), lorentz_lambda(PHI_SQRT))


def test_space_validation():
    with pytest.raises(DomainError):
        RiSpaceSpec("Lpq", p=1.0, q=2.0)  # not a norm
    with pytest.raises(DomainError):
        RiSpaceSpec("Lp", p=0.5)
    with pytest.raises(DomainError):
        RiSpaceSpec("Lambda")
    assert not lorentz(2, 3).is_norm()  # q > p: quasi-norm only
    assert lorentz(3, 2).is_norm()


def test_endpoint_factories():
    assert lebesgue(1) == L1
    assert lebesgue(math.inf) == LINF
    assert lorentz(1, 1) == L1
    assert lorentz(math.inf, math.inf) == LINF


def test_basic_norms():
    half = indicator(0.5)
    assert ri_norm(L1, half) == 0.5
    assert ri_norm(LINF, half) == 1.0
    assert ri_norm(lebesgue(2), half) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert ri_norm(lorentz(2, 1), half) == pytest.approx(2 * math.sqrt(0.5), rel=1e-15)
    assert ri_norm(lorentz(2, math.inf), half) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert ri_norm(lorentz_lambda(PHI_SQRT), half) == pytest.approx(math.sqrt(0.5), rel=1e-15)


def test_norm_rearranges_input():
    f = step_fn([0.5, 1.0], [1.0, 3.0])
    assert ri_norm(L1, f) == pytest.approx(2.0, abs=1e-15)
    assert ri_norm(LINF, f) == 3.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 1.0))
def test_fundamental_function_matches_indicator_norm(a):
    for X in SPACES:
        phi = fundamental_function(X)
        assert phi(a) == pytest.approx(ri_norm(X, indicator(a)), rel=1e-12)


def test_associate_space_table():
    assert associate_space(L1) == LINF
    assert associate_space(LINF) == L1
    assert associate_space(lebesgue(2)) == lebesgue(2)
    assert associate_space(lorentz(3, 2)) == lorentz(1.5, 2.0)
    assert associate_space(lorentz(2, 1)) == lorentz(2, math.inf)
    with pytest.raises(UnsupportedSpaceError):
        associate_space(lorentz_lambda(PHI_SQRT))


def test_boyd_indices_table():
    assert boyd_indices(L1) == (1.0, 1.0)
    assert boyd_indices(LINF) == (0.0, 0.0)
    assert boyd_indices(lorentz(4, 1)) == (0.25, 0.25)


def test_a5_constant_is_sharp_on_constants():
    for X in (L1, LINF, lebesgue(2), lorentz(2, 1)):
        f = step_fn([1.0], [2.0])
        assert f.integral() <= a5_constant(X) * ri_norm(X, f) + 1e-12


def test_lambda_norm_stieltjes():
    f = step_fn([0.25, 1.0], [2.0, 1.0])
    # 2*sqrt(1/4) + 1*(1 - sqrt(1/4)) = 1.5
    assert lambda_norm(PHI_SQRT, f) == pytest.approx(1.5, rel=1e-15)


def test_dilate():
    f = indicator(0.5)
    g = dilate(f, 0.5)
    assert g.support_measure() == pytest.approx(0.25, abs=1e-15)
    h = dilate(f, 4.0)  # support would be 2, truncated at 1
    assert h.support_measure() == 1.0
    assert dilate(f, 1.0) is f


def test_subst_norm_change_of_variables():
    f = indicator(0.25)
    # |f*(t^2)|_{L1} = integral over (0, 1/2) = 1/2 = (1/2) * |f|_{L^{2,1}}
    got = subst_norm(L1, f, 2.0)
    assert got == pytest.approx(0.5 * ri_norm(lorentz(2, 1), f), rel=1e-12)


def test_parse_format_roundtrip():
    for X in (L1, LINF, lebesgue(2), lorentz(2, 1), lorentz(3, math.inf),
              lorentz_lambda(PHI_SQRT)):
        assert parse_space(format_space(X)) == X
    with pytest.raises(DomainError):
        parse_space("nope")
