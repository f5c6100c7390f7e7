import mpmath
import numpy as np
import pytest
from scipy.stats import studentized_range

from cefrkit.stats.distributions import (
    DistributionError,
    dist_cdf,
    f_cdf,
    student_t_cdf,
    studentized_range_cdf,
    studentized_range_ppf,
)


def mp_t_cdf(df, x):
    """High-precision t CDF via mpmath's hypergeometric machinery."""
    df = mpmath.mpf(df)
    x = mpmath.mpf(x)
    z = df / (df + x * x)
    tail = mpmath.betainc(df / 2, mpmath.mpf(1) / 2, 0, z, regularized=True) / 2
    return float(1 - tail if x > 0 else tail)


def mp_f_cdf(d1, d2, x):
    d1, d2, x = mpmath.mpf(d1), mpmath.mpf(d2), mpmath.mpf(x)
    return float(
        mpmath.betainc(d1 / 2, d2 / 2, 0, d1 * x / (d1 * x + d2), regularized=True)
    )


def test_t_cdf_symmetry_at_zero():
    for df in (1, 2.5, 7, 100):
        assert student_t_cdf(df, 0.0) == 0.5


def test_t_cdf_against_high_precision_reference():
    for df in (1, 2, 5.5, 12, 200):
        for x in (-6.0, -1.3, -0.2, 0.4, 2.7, 9.0):
            assert student_t_cdf(df, x) == pytest.approx(mp_t_cdf(df, x), abs=1e-8)


def test_f_cdf_against_high_precision_reference():
    for d1 in (1, 3, 10):
        for d2 in (2, 8, 60):
            for x in (0.05, 0.8, 2.5, 15.0):
                assert f_cdf(d1, d2, x) == pytest.approx(mp_f_cdf(d1, d2, x), abs=1e-8)


def test_f_t_cross_identity(rng):
    # F(1, d) at t^2 equals 2*T_d(|t|) - 1
    for _ in range(25):
        d = float(rng.uniform(1.0, 80.0))
        t = float(rng.uniform(-4.0, 4.0))
        lhs = f_cdf(1.0, d, t * t)
        rhs = 2.0 * student_t_cdf(d, abs(t)) - 1.0
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_studentized_range_quantile_matches_published_table():
    # q_(0.95) for k=3 groups, 10 dof is 3.88 in standard tables
    assert studentized_range_ppf(0.95, 3, 10) == pytest.approx(3.88, abs=0.01)


def test_studentized_range_cdf_against_scipy():
    for k in (2, 3, 4, 8):
        for df in (2, 5, 10, 60, 500):
            for q in (0.4, 1.2, 2.8, 4.5, 7.0):
                mine = studentized_range_cdf(q, k, df)
                ref = studentized_range.cdf(q, k, df)
                assert mine == pytest.approx(ref, abs=1e-6), (k, df, q)


def test_studentized_range_edge_values():
    assert studentized_range_cdf(0.0, 3, 10) == 0.0
    assert studentized_range_cdf(-1.0, 3, 10) == 0.0
    assert 0.0 < studentized_range_cdf(1e-6, 3, 10) < 1e-3
    assert studentized_range_cdf(80.0, 3, 10) == pytest.approx(1.0, abs=1e-9)


def test_cdf_monotone_in_q():
    values = [studentized_range_cdf(q, 4, 12) for q in np.linspace(0.1, 9, 40)]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def test_dispatcher_and_parameter_validation():
    assert dist_cdf("student_t", {"df": 5}, 0.0) == 0.5
    assert dist_cdf("f", {"d1": 2, "d2": 7}, 1.0) == pytest.approx(f_cdf(2, 7, 1.0))
    assert dist_cdf("studentized_range", {"k": 3, "df": 10}, 3.88) == pytest.approx(
        0.95, abs=0.002
    )
    with pytest.raises(DistributionError):
        dist_cdf("student_t", {"df": -1}, 0.0)
    with pytest.raises(DistributionError):
        dist_cdf("studentized_range", {"k": 1, "df": 10}, 1.0)
    with pytest.raises(DistributionError):
        dist_cdf("gaussian", {}, 0.0)
