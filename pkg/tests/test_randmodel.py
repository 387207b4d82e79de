import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legsums.primes import first_primes, primes_up_to
from legsums import randmodel as rm
from legsums.randmodel import (
    CoefficientSpec,
    MultiplicativeSample,
    UnsupportedAlphaError,
    decompose_rational,
    estimate_positivity,
    euler_eval,
    euler_product,
    lambda_twist,
    moment_direct,
    sample_multiplicative,
    sample_series_matrix,
    series_eval,
    squarefree_core,
    xi_statistics,
)

SUPPORTED = list(rm._DECOMPOSITIONS)


def all_plus_sample(limit: int = 10**6) -> MultiplicativeSample:
    forced = tuple((int(p), 1) for p in primes_up_to(limit).tolist())
    return MultiplicativeSample(seed=0, forced=forced)


# --------------------------------------------------------------------------
# sampling

def test_x_trivial_values():
    s = sample_multiplicative(0)
    assert s.x_of(1) == 1
    assert s.x_of(4) == 1
    assert s.x_of(9) == 1
    assert s.x_of(12) == s.x_of(3)


@given(a=st.integers(1, 3000), b=st.integers(1, 3000), seed=st.integers(0, 5))
@settings(max_examples=200)
def test_x_multiplicative(a, b, seed):
    s = sample_multiplicative(seed)
    assert s.x_of(a * b) == s.x_of(a) * s.x_of(b)


def test_signs_up_to_matches_x_of():
    s = sample_multiplicative(42)
    arr = s.signs_up_to(300)
    assert all(int(arr[n]) == s.x_of(n) for n in range(1, 301))


def test_prime_sign_bias_small():
    s = sample_multiplicative(0)
    signs = s.signs_for_primes(first_primes(10000))
    assert abs(signs.astype(float).mean()) < 3 / math.sqrt(10000)


def test_distinct_seeds_distinct_sequences():
    primes = first_primes(100)
    a = sample_multiplicative(0).signs_for_primes(primes)
    b = sample_multiplicative(1).signs_for_primes(primes)
    assert not np.array_equal(a, b)


def test_forced_signs_respected():
    s = MultiplicativeSample(seed=0, forced=((2, -1), (5, 1)))
    assert s.sign_at_prime(2) == -1
    assert s.sign_at_prime(5) == 1


def test_lambda_twist_involution_and_sign_flip():
    s = sample_multiplicative(7)
    t = lambda_twist(s)
    assert lambda_twist(t) == s
    for p in (2, 3, 11):
        assert t.sign_at_prime(p) == -s.sign_at_prime(p)
    # X_n picks up (-1)^Omega(n)
    assert t.x_of(12) == -s.x_of(12)  # Omega(12) = 3
    assert t.x_of(36) == s.x_of(36)  # squares are invariant


# --------------------------------------------------------------------------
# decompositions

@pytest.mark.parametrize("alpha,parity", SUPPORTED)
def test_decomposition_fidelity(alpha, parity):
    d = decompose_rational(alpha, parity)
    spec = CoefficientSpec(parity, alpha)
    N = 4 * max(1, d.period_lcm)
    err = np.max(np.abs(d.coefficients(N) - spec.coefficients(N)))
    assert err < 1e-12


@pytest.mark.parametrize("alpha,parity", SUPPORTED)
def test_tables_completely_multiplicative(alpha, parity):
    for t in decompose_rational(alpha, parity).terms:
        q = t.chi.period
        for a in range(1, q):
            for b in range(1, q):
                if math.gcd(a, q) == 1 and math.gcd(b, q) == 1:
                    lhs = t.chi.at(a * b)
                    rhs = complex(t.chi.at(a)) * complex(t.chi.at(b))
                    assert abs(lhs - rhs) < 1e-12


def test_unsupported_alpha_raises():
    with pytest.raises(UnsupportedAlphaError):
        decompose_rational(Fraction(1, 7), "plus")
    with pytest.raises(UnsupportedAlphaError):
        decompose_rational(Fraction(3, 5), "minus")


def test_kappa_pinned_values():
    assert rm.KAPPA.at(2) == 1j
    assert rm.KAPPA.at(3) == -1j
    assert rm.KAPPA.at(4) == -1


def test_quarter_plus_decomposition_shape():
    d = decompose_rational(Fraction(1, 4), "plus")
    assert len(d.terms) == 1
    assert d.terms[0].chi.period == 4


# --------------------------------------------------------------------------
# evaluation

def test_series_half_plus_vanishes():
    s = sample_multiplicative(3)
    val = series_eval(CoefficientSpec("plus", Fraction(1, 2)), s, 10000)
    assert abs(val) < 1e-9


def test_series_half_minus_all_plus_is_odd_harmonic():
    N = 1000
    s = all_plus_sample(N)
    val = series_eval(CoefficientSpec("minus", Fraction(1, 2)), s, N)
    expected = 2 * sum(1 / n for n in range(1, N + 1, 2))
    assert abs(val - expected) < 1e-12


def test_euler_matches_series_for_all_supported():
    s = sample_multiplicative(11)
    N, P = 10**6, 10**3
    x = s.signs_up_to(N)[1:].astype(np.float64) / np.arange(1, N + 1)
    for alpha, parity in SUPPORTED:
        d = decompose_rational(alpha, parity)
        e = euler_eval(d, s, P)
        v = float(np.dot(CoefficientSpec(parity, alpha).coefficients(N), x))
        assert abs(e - v) <= 1e-2 * (1 + abs(e)), (alpha, parity, e, v)


def test_quarter_minus_zero_when_x2_negative():
    s = MultiplicativeSample(seed=5, forced=((2, -1),))
    d = decompose_rational(Fraction(1, 4), "minus")
    assert abs(euler_eval(d, s, 1000)) < 1e-12


def test_sixth_minus_factored_form():
    # the term sum collapses to (1 + X_2 + X_3 - X_2 X_3)/2 * sum X_n/n;
    # the prefactor is 1 unless X_2 = X_3 = -1, where it is -1 (so the
    # series is NOT nonnegative for every realization -- see the ledger)
    d = decompose_rational(Fraction(1, 6), "minus")
    for x2 in (1, -1):
        for x3 in (1, -1):
            s = MultiplicativeSample(seed=5, forced=((2, x2), (3, x3)))
            primes = primes_up_to(1000)
            signs = s.signs_for_primes(primes).astype(float)
            T = float(np.prod(1.0 / (1.0 - signs / primes)))
            factor = (1 + x2 + x3 - x2 * x3) / 2
            val = euler_eval(d, s, 1000)
            assert val == pytest.approx(factor * T, rel=1e-10)
            if x2 == x3 == -1:
                assert val < -0.1  # counterexample to the printed sign law


def test_sign_laws_sampled():
    always_nonneg = [
        (Fraction(1, 2), "minus"),
        (Fraction(1, 3), "plus"),
        (Fraction(1, 3), "minus"),
        (Fraction(1, 4), "plus"),
        (Fraction(1, 4), "minus"),
        (Fraction(1, 6), "plus"),
        (Fraction(3, 8), "minus"),
        (Fraction(2, 5), "minus"),
    ]
    for alpha, parity in always_nonneg:
        d = decompose_rational(alpha, parity)
        vals = rm.euler_values_matrix(d, 200, seed0=0, prime_cutoff=500)
        assert vals.min() >= -1e-9, (alpha, parity, vals.min())


def test_eighth_plus_nonneg_given_x2_positive():
    d = decompose_rational(Fraction(1, 8), "plus")
    seeds = np.arange(400)
    x2 = rm.prime_sign_matrix(seeds, np.array([2]))[:, 0]
    vals = rm.euler_values_matrix(d, 400, seed0=0, prime_cutoff=500)
    assert vals[x2 == 1].min() >= -1e-9


# --------------------------------------------------------------------------
# Monte Carlo engine

def test_sample_series_matrix_batch_invariance():
    c = CoefficientSpec("minus", Fraction(1, 3)).coefficients(500)
    a = sample_series_matrix(c[:, None], 500, 50, seed0=0, batch=7)
    b = sample_series_matrix(c[:, None], 500, 50, seed0=0, batch=50)
    c2 = sample_series_matrix(c[:, None], 500, 50, seed0=0, batch=7)
    assert np.array_equal(a, c2)  # bit-identical under fixed batching
    assert np.allclose(a, b, atol=1e-12)  # batching only reorders float ops


def test_sample_series_matrix_matches_series_eval():
    c = CoefficientSpec("plus", Fraction(1, 5)).coefficients(300)
    vals = sample_series_matrix(c[:, None], 300, 5, seed0=9)[:, 0]
    for i in range(5):
        direct = series_eval(
            CoefficientSpec("plus", Fraction(1, 5)), sample_multiplicative(9 + i), 300
        )
        assert abs(vals[i] - direct) < 1e-10


def test_estimate_positivity_third_minus_certain():
    d = decompose_rational(Fraction(1, 3), "minus")
    est = estimate_positivity(d, 300, prime_cutoff=500)
    assert est.strict_fraction == 1.0
    assert est.nonneg_fraction == 1.0
    assert est.ci95_strict == 0.0


def test_estimate_positivity_half_plus_all_zero():
    est = estimate_positivity(
        CoefficientSpec("plus", Fraction(1, 2)), 300, prime_cutoff=500
    )
    assert est.strict_fraction == 0.0
    assert est.nonneg_fraction == 1.0


def test_estimate_positivity_series_evaluator():
    est = estimate_positivity(
        CoefficientSpec("minus", Fraction(1, 3)),
        200,
        truncation=20000,
        evaluator="series",
    )
    assert est.nonneg_fraction == 1.0


# --------------------------------------------------------------------------
# twists and special statistics

def test_twist_products():
    s = sample_multiplicative(3)
    t = lambda_twist(s)
    P = 10**4
    H = euler_product(rm.CHI_0_5, s, P) * euler_product(rm.CHI_0_5, t, P)
    assert abs(H.real - 4 * math.pi**2 / 25) < 1e-3
    F = euler_product(rm.CHI_0_2, s, P) * euler_product(rm.CHI_0_2, t, P)
    assert abs(F.real - math.pi**2 / 8) < 1e-3
    # the twisted product is far from pi^2/9
    assert abs(F.real - math.pi**2 / 9) > 0.1


def test_xi_statistics_values():
    xi = xi_statistics(10**5)
    assert abs(xi.variance - 0.35355) < 2e-4
    assert abs(xi.phi - 0.553574) < 1e-5
    assert xi.chebyshev_bound == pytest.approx(
        (xi.variance + xi.variance_tail_bound) / (math.pi / 2 - xi.phi) ** 2
    )


def test_conditional_mean_supports_recomputed_constant():
    rep = rm.conditional_mean_1_8(samples=20000, truncation=5000, seed=1)
    assert abs(rep.mc_mean - rep.closed_form_recomputed) < 3 * rep.mc_se + 0.002
    assert abs(rep.mc_mean - rep.closed_form_printed) > 5 * rep.mc_se


def test_conditioning_matters():
    neg = rm.conditional_mean_1_8(samples=5000, truncation=2000, forced_sign=-1)
    pos = rm.conditional_mean_1_8(samples=5000, truncation=2000, forced_sign=+1)
    assert pos.mc_mean - neg.mc_mean > 10 * (pos.mc_se + neg.mc_se)


# --------------------------------------------------------------------------
# moments

def test_squarefree_core():
    core = squarefree_core(100)
    assert core[1] == 1 and core[4] == 1 and core[12] == 3
    assert core[72] == 2 and core[100] == 1 and core[60] == 15


def test_moment_k1_square_indices_only():
    c = CoefficientSpec("minus", Fraction(1, 3)).coefficients(1000)
    expected = sum(c[j * j - 1] / (j * j) for j in range(1, 32))
    assert moment_direct(c, 1) == pytest.approx(expected, rel=1e-12)


def _brute_second_moment(c: np.ndarray) -> float:
    N = len(c)
    total = 0.0
    for n in range(1, N + 1):
        for m in range(1, N + 1):
            nm = n * m
            r = math.isqrt(nm)
            if r * r == nm:
                total += c[n - 1] * c[m - 1] / nm
    return total


def test_moment_k2_brute_force():
    for parity, alpha in [("minus", Fraction(1, 2)), ("plus", Fraction(1, 3))]:
        c = CoefficientSpec(parity, alpha).coefficients(400)
        assert moment_direct(c, 2) == pytest.approx(_brute_second_moment(c), abs=1e-10)


def test_moment_k3_k4_brute_force():
    c = CoefficientSpec("minus", Fraction(1, 4)).coefficients(60)
    n = np.arange(1, 61)
    w = c / n
    # brute force with numpy: product over tuples whose index product is square
    prod2 = np.multiply.outer(n, n)
    w2 = np.multiply.outer(w, w)
    prod3 = np.multiply.outer(prod2, n)
    w3 = np.multiply.outer(w2, w)
    r3 = np.sqrt(prod3).round().astype(np.int64)
    sq3 = r3 * r3 == prod3
    assert moment_direct(c, 3) == pytest.approx(float(w3[sq3].sum()), abs=1e-9)
    prod4 = np.multiply.outer(prod3, n).astype(np.int64)
    w4 = np.multiply.outer(w3, w)
    r = np.sqrt(prod4).round().astype(np.int64)
    sq4 = r * r == prod4
    assert moment_direct(c, 4) == pytest.approx(float(w4[sq4].sum()), abs=1e-9)


def test_moment_k5_exact_small():
    # N = 10 involves only the primes 2, 3, 5, 7: enumerate all sign patterns
    N = 10
    c = CoefficientSpec("minus", Fraction(1, 3)).coefficients(N)
    total = 0.0
    for signs in itertools.product((1, -1), repeat=4):
        xp = dict(zip((2, 3, 5, 7), signs))

        def x(n):
            out = 1
            for p, s in xp.items():
                m, e = n, 0
                while m % p == 0:
                    m //= p
                    e += 1
                if e % 2:
                    out *= s
            return out

        val = sum(c[n - 1] * x(n) / n for n in range(1, N + 1))
        total += val**5
    exact = total / 16
    approx = moment_direct(c, 5, cutoff=320)
    assert approx == pytest.approx(exact, abs=1e-9)


def test_moment_order_limits():
    c = CoefficientSpec("minus", Fraction(1, 3)).coefficients(100)
    with pytest.raises(ValueError):
        moment_direct(c, 7)
    with pytest.raises(ValueError):
        moment_direct(c, 5)  # needs a cutoff
