import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mixednorm.stepcore import DomainError
from mixednorm.rispace import L1, LINF, lebesgue, lorentz
from mixednorm.mixed import (
    CellSet,
    GridFn,
    MixedSpaceSpec,
    bp_norm,
    distribution_product_check,
    dump_gridfn,
    essential_projection,
    level_set,
    load_gridfn,
    loomis_whitney_check,
    mixed_norm,
    pointwise_fournier_bound,
    psi,
    section,
)

# the 2x2 grid with f(1,1)=1, f(1,2)=2, f(2,1)=3, f(2,2)=4
EX = GridFn(2, 2, np.array([[1.0, 2.0], [3.0, 4.0]]))


def gridfns(n=2, N=4, vmax=3.0):
    return arrays(float, (N,) * n,
                  elements=st.floats(0.0, vmax)).map(lambda v: GridFn(n, N, v))


def test_section_reads_along_axis():
    s = section(EX, 2, (1,))
    assert s(0.25) == 1.0 and s(0.75) == 2.0
    s = section(EX, 1, (2,))
    assert s(0.25) == 2.0 and s(0.75) == 4.0
    with pytest.raises(DomainError):
        section(EX, 3, (1,))


def test_psi_column_maxima():
    p = psi(EX, 1, LINF)
    assert list(p.values) == [3.0, 4.0]
    p = psi(EX, 2, L1)
    assert list(p.values) == [1.5, 3.5]


def test_bp_and_mixed_norm_example():
    assert bp_norm(EX, 1, L1, LINF) == pytest.approx(3.5, abs=1e-15)
    assert bp_norm(EX, 2, L1, LINF) == pytest.approx(3.0, abs=1e-15)
    assert mixed_norm(EX, MixedSpaceSpec(L1, LINF)) == pytest.approx(6.5, abs=1e-15)
    assert mixed_norm(EX, MixedSpaceSpec(L1, LINF, mode=1)) == pytest.approx(3.5)


def test_square_indicator_mixed_norm():
    vals = np.zeros((8, 8))
    vals[:4, :4] = 1.0
    f = GridFn(2, 8, vals)
    assert mixed_norm(f, MixedSpaceSpec(L1, LINF)) == pytest.approx(1.0, abs=1e-15)
    assert f.rearrangement().support_measure() == pytest.approx(0.25, abs=1e-15)


def test_constant_mixed_norm():
    f = GridFn(3, 2, np.full((2, 2, 2), 1.5))
    assert mixed_norm(f, MixedSpaceSpec(L1, LINF)) == pytest.approx(4.5, abs=1e-14)


def test_level_set_and_projection_example():
    E = level_set(EX, 2.5)
    assert E.indices() == [(2, 1), (2, 2)]
    P = essential_projection(E, 2)
    assert P.indices() == [(2,)]
    diag = CellSet(2, 2, np.eye(2, dtype=bool))
    for k in (1, 2):
        assert essential_projection(diag, k).measure == pytest.approx(1.0)


def test_loomis_whitney_diagonal_and_empty():
    diag = CellSet(2, 2, np.eye(2, dtype=bool))
    lhs, rhs = loomis_whitney_check(diag)
    assert (lhs, rhs) == (0.5, 1.0)
    empty = CellSet(2, 2, np.zeros((2, 2), dtype=bool))
    assert loomis_whitney_check(empty) == (0.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(gridfns())
def test_projection_identity_exact(f):
    for alpha in (0.0, 0.5, 1.5, f.max_value()):
        E = level_set(f, alpha)
        for k in (1, 2):
            assert essential_projection(E, k).same_as(
                level_set(psi(f, k, LINF), alpha))


@settings(max_examples=60, deadline=None)
@given(gridfns(), st.floats(0.0, 3.0))
def test_distribution_product_bound(f, t):
    lhs, rhs = distribution_product_check(f, t)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@settings(max_examples=60, deadline=None)
@given(gridfns(n=3, N=3), st.floats(0.01, 0.99))
def test_pointwise_bound(f, s):
    lhs, rhs = pointwise_fournier_bound(f, s)
    assert lhs <= rhs + 1e-12


def test_rearrangement_value_agrees_with_stepfn():
    fs = EX.rearrangement()
    for s in (0.1, 0.3, 0.6, 0.9):
        assert EX.rearrangement_value(s) == fs(s)


def test_refine_preserves_norms():
    spec = MixedSpaceSpec(lorentz(2, 1), lebesgue(2))
    g = EX.refine(3)
    assert mixed_norm(g, spec) == pytest.approx(mixed_norm(EX, spec), rel=1e-12)
    assert g.rearrangement().integral() == pytest.approx(
        EX.rearrangement().integral(), rel=1e-12)


def test_gridfn_validation():
    with pytest.raises(DomainError):
        GridFn(2, 2, np.ones((2, 3)))
    with pytest.raises(DomainError):
        GridFn(2, 2, -np.ones((2, 2)))
    with pytest.raises(DomainError):
        GridFn(5, 2, np.ones((2,) * 5))


def test_json_roundtrip(tmp_path):
    doc = dump_gridfn(EX)
    g = load_gridfn(doc)
    assert g.allclose(EX)
    path = tmp_path / "g.json"
    dump_gridfn(EX, str(path))
    assert load_gridfn(str(path)).allclose(EX)
