import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlimax import (
    GrowthReport,
    LInfinityYoung,
    PowerYoung,
    TabulatedYoung,
    check_delta2,
    check_nabla2,
    check_young_pair,
    tabulated_conjugate,
)


def numeric_legendre(phi, r, lo=1e-10, hi=1e10, n=400001):
    """Independent supremum oracle: dense log-grid scan of r*s - phi(s)."""
    s = np.geomspace(lo, hi, n)
    vals = np.asarray(phi(s), dtype=float)
    return max(0.0, float(np.max(r * s - vals)))


def test_power_eval():
    assert PowerYoung(2.0)(3.0) == 9.0
    for t in (0.0, 1.0, 5.0):
        assert PowerYoung(1.0)(t) == t


def test_linfty_eval():
    phi = LInfinityYoung()
    assert phi(0.7) == 0.0
    assert phi(1.2) == np.inf
    assert phi(1.0) == 0.0


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        PowerYoung(2.0)(-1.0)
    with pytest.raises(ValueError):
        PowerYoung(2.0).inverse(-1.0)


def test_power_inverse():
    assert PowerYoung(2.0).inverse(4.0) == 2.0
    for p in (1.0, 1.5, 4.0):
        phi = PowerYoung(p)
        for r in (1e-3, 1.0, 1e3):
            assert np.isclose(phi.inverse(phi(r)), r, rtol=1e-10)
            assert np.isclose(phi(phi.inverse(r)), r, rtol=1e-10)


def test_linfty_generalized_inverse():
    phi = LInfinityYoung()
    for s in (0.0, 0.5, 1.0, 7.0, 1e9):
        assert phi.inverse(s) == 1.0
    assert phi.inverse(np.inf) == np.inf


def test_conjugate_power_one_is_sup_norm_family():
    conj = PowerYoung(1.0).conjugate()
    assert isinstance(conj, LInfinityYoung)
    # oracle: sup(rs - s) is 0 for r <= 1 and unbounded for r > 1
    assert numeric_legendre(PowerYoung(1.0), 0.7) == 0.0
    assert numeric_legendre(PowerYoung(1.0), 1.5) > 1e8


def test_conjugate_power_closed_form():
    conj = PowerYoung(2.0).conjugate()
    assert np.isclose(conj(2.0), 1.0, rtol=1e-14)  # (1/4) * 2**2
    for p in (1.5, 2.0, 4.0):
        phi = PowerYoung(p)
        conj = phi.conjugate()
        for r in (0.1, 1.0, 30.0):
            assert np.isclose(conj(r), numeric_legendre(phi, r), rtol=1e-6)


def test_biconjugation_recovers_power():
    phi = PowerYoung(1.5)
    back = phi.conjugate().conjugate()
    t = np.geomspace(1e-3, 1e3, 30)
    assert np.allclose(back(t), phi(t), rtol=1e-6)
    # oracle by direct double maximization
    conj = phi.conjugate()
    for t0 in (0.05, 1.0, 8.0):
        assert np.isclose(numeric_legendre(conj, t0), phi(t0), rtol=1e-4)


def test_conjugate_linfty_roundtrip():
    conj = LInfinityYoung(threshold=1.0).conjugate()
    assert isinstance(conj, PowerYoung) and conj.p == 1.0
    back = conj.conjugate()
    assert isinstance(back, LInfinityYoung) and back.threshold == 1.0


def test_numeric_tabulated_conjugate_matches_closed_form():
    phi = PowerYoung(1.5)
    tab = tabulated_conjugate(phi, 1e-4, 1e4, 4096)
    closed = phi.conjugate()
    r = np.geomspace(1e-3, 1e3, 64)
    assert np.allclose(tab(r), closed(r), rtol=1e-4)
    # log-log slope of the table matches the conjugate exponent within 1e-3
    slopes = np.diff(np.log(tab.values)) / np.diff(np.log(tab.breakpoints))
    assert np.max(np.abs(slopes - 3.0)) < 1e-3


def test_young_pair_bounds():
    # p = 2 sits at the upper boundary: conj(t**2)(r) = r**2/4, so the
    # inverse product is exactly 2r (value confirmed by numeric_legendre)
    res = check_young_pair(PowerYoung(2.0), [1.0])
    assert res.ok
    assert np.isclose(res.ratio_max, 2.0, rtol=1e-12)
    res = check_young_pair(PowerYoung(1.0), np.geomspace(1e-5, 1e5, 50))
    assert res.ok and np.isclose(res.ratio_min, 1.0) and np.isclose(res.ratio_max, 1.0)
    res = check_young_pair(PowerYoung(3.0), np.geomspace(1e-6, 1e6, 100))
    assert res.ok and 1.0 - 1e-6 <= res.ratio_min <= res.ratio_max <= 2.0 + 1e-6


def test_delta2_constants():
    rep = check_delta2(PowerYoung(2.0))
    assert np.isclose(rep.delta2_constant, 4.0, rtol=1e-9)
    rep = check_delta2(PowerYoung(1.0))
    assert np.isclose(rep.delta2_constant, 2.0, rtol=1e-9)
    rep = check_delta2(LInfinityYoung())
    assert rep.delta2_constant is None


def test_nabla2_constants():
    grid = np.array([1.1, 1.2, 1.26, 1.5, 2.0, 4.0])
    rep = check_nabla2(PowerYoung(2.0), C_grid=grid)
    assert rep.nabla2_constant == 2.0  # threshold 2**(1/(p-1)) = 2
    rep = check_nabla2(PowerYoung(4.0), C_grid=grid)
    assert rep.nabla2_constant == 1.26  # threshold 2**(1/3) ~ 1.2599
    rep = check_nabla2(PowerYoung(1.0), C_grid=grid)
    assert rep.nabla2_constant is None


def test_growth_report_invariants():
    with pytest.raises(ValueError):
        GrowthReport(None, None, (1.0, 10.0), 100)  # narrower than 6 decades
    with pytest.raises(ValueError):
        GrowthReport(0.5, None, (1e-3, 1e3), 100)
    with pytest.raises(ValueError):
        check_delta2(PowerYoung(2.0), samples=10)


@given(st.floats(1.0, 6.0), st.floats(0.01, 50.0), st.floats(0.01, 50.0))
@settings(max_examples=80)
def test_eval_and_inverse_monotone(p, t1, t2):
    phi = PowerYoung(p)
    lo, hi = sorted((t1, t2))
    assert phi(lo) <= phi(hi)
    assert phi.inverse(lo) <= phi.inverse(hi)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        TabulatedYoung([1.0, 2.0], [1.0, 1.0], tail_exponent=2.0)  # flat values
    with pytest.raises(ValueError):
        TabulatedYoung([1.0, 2.0], [1.0, 2.0], tail_exponent=0.5)  # sublinear tail
    with pytest.raises(ValueError):
        TabulatedYoung([2.0, 1.0], [1.0, 2.0], tail_exponent=2.0)  # disordered
    with pytest.raises(ValueError):
        # concave data: slopes drop from 10 to 0.1
        TabulatedYoung([1.0, 2.0, 3.0], [1.0, 11.0, 11.1], tail_exponent=2.0)


def test_tabulated_roundtrip_and_extrapolation():
    t = np.geomspace(0.1, 10.0, 40)
    tab = TabulatedYoung(t, t**3, tail_exponent=3.0, head_exponent=3.0)
    assert tab(0.0) == 0.0
    probe = np.geomspace(1e-3, 1e3, 50)  # spans head, table, tail
    assert np.allclose(tab(probe[probe < 0.1]), probe[probe < 0.1] ** 3, rtol=1e-12)
    assert np.allclose(tab(probe[probe > 10]), probe[probe > 10] ** 3, rtol=1e-12)
    vals = np.asarray(tab(probe), dtype=float)
    assert np.allclose(tab.inverse(vals), probe, rtol=1e-10)
    assert tab.in_class_Y
