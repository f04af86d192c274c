"""Deviation solver and closed forms, cross-checked against each other."""

import math

import numpy as np
import pytest

from kedlaya.deviation import (
    DeviationSpec,
    GeneratorSpec,
    gini,
    gini21_counterexample,
    homogeneous_deviation,
    log_generator,
    power_generator,
    power_mean,
    quasi_arithmetic,
    shifted_power,
    solve_deviation_mean,
)
from kedlaya.domain import POSITIVE, REALS
from kedlaya.errors import (
    DomainViolation,
    InvalidDeviation,
    InvalidGenerator,
    SolverFailure,
)


def diff_spec(f, label, increasing=True):
    """Deviation built from a generator difference.

    ``E(x, y) = f(x) - f(y)`` for increasing ``f``; a decreasing ``f``
    needs the opposite orientation to satisfy the sign convention (the
    root is the same).
    """
    if increasing:
        return DeviationSpec(lambda x, y: f(x) - f(y), domain=POSITIVE, label=label)
    return DeviationSpec(lambda x, y: f(y) - f(x), domain=POSITIVE, label=label)


class TestSolver:
    def test_linear_deviation_is_arithmetic(self):
        spec = DeviationSpec(lambda x, y: x - y, domain=REALS, label="linear")
        assert solve_deviation_mean(spec, (1, 3), (1, 1)) == pytest.approx(2, abs=1e-11)

    def test_log_deviation_is_geometric(self):
        spec = diff_spec(math.log, "log-diff")
        got = solve_deviation_mean(spec, (1, 4), (1, 1))
        assert got == pytest.approx(power_mean(0.0, (1, 4), (1, 1)), abs=1e-10)
        assert got == pytest.approx(2.0, abs=1e-10)

    def test_square_deviation_weighted(self):
        spec = diff_spec(lambda t: t * t, "square-diff")
        got = solve_deviation_mean(spec, (1, 2), (1, 3))
        assert got == pytest.approx(math.sqrt(3.25), abs=1e-10)

    def test_constant_short_circuit(self):
        spec = diff_spec(math.log, "log-diff")
        assert solve_deviation_mean(spec, (2.5, 2.5, 2.5), (1, 2, 3)) == 2.5

    def test_invalid_spec_rejected_at_construction(self):
        with pytest.raises(InvalidDeviation):
            DeviationSpec(lambda x, y: y - x, domain=POSITIVE, label="flipped")
        with pytest.raises(InvalidDeviation):
            DeviationSpec(lambda x, y: x - y + 1.0, domain=POSITIVE, label="shifted")

    def test_runtime_sign_failure(self):
        # increasing on the sampled window, turns around far outside it
        def f(t):
            return t if t <= 500 else 1000.0 - t

        spec = diff_spec(f, "turncoat")
        with pytest.raises(SolverFailure):
            solve_deviation_mean(spec, (2000.0, 3000.0), (1, 1))

    def test_iteration_cap(self):
        # a tolerance below float resolution can never be met (the root
        # sqrt(5) does not land on a float where the total evaluates to 0)
        from kedlaya.errors import MaxIterations
        spec = diff_spec(math.log, "log-diff")
        with pytest.raises(MaxIterations):
            solve_deviation_mean(spec, (1, 5), (1, 1), tol=1e-300)

    def test_oracle_equivalence_random(self):
        # solver with E = f(x) - f(y) against the closed form, several f
        rng = np.random.default_rng(5)
        gens = [log_generator(), power_generator(2.0), power_generator(0.5),
                power_generator(-1.0)]
        specs = [diff_spec(g.f, g.label, increasing=(g.label != "pow[-1.0]"))
                 for g in gens]
        for _ in range(300):
            n = int(rng.integers(2, 9))
            x = tuple(float(v) for v in np.exp(rng.uniform(np.log(0.1), np.log(10), n)))
            w = tuple(float(v) for v in rng.uniform(0.1, 5, n))
            k = int(rng.integers(0, len(gens)))
            direct = quasi_arithmetic(gens[k], x, w)
            solved = solve_deviation_mean(specs[k], x, w)
            assert abs(direct - solved) <= 1e-9 * (1 + abs(direct))


class TestQuasiArithmetic:
    def test_identity_generator(self):
        gen = power_generator(1.0)
        assert quasi_arithmetic(gen, (2, 4), (1, 1)) == pytest.approx(3, abs=1e-12)

    def test_log_generator(self):
        assert quasi_arithmetic(log_generator(), (1, 4), (1, 1)) == pytest.approx(2, abs=1e-12)

    def test_square_generator(self):
        got = quasi_arithmetic(power_generator(2.0), (1, 2), (3, 1))
        assert got == pytest.approx(math.sqrt(7 / 4), rel=1e-12)

    def test_domain_enforced(self):
        with pytest.raises(DomainViolation):
            quasi_arithmetic(log_generator(), (1, -1), (1, 1))

    def test_bad_inverse_rejected(self):
        with pytest.raises(InvalidGenerator):
            GeneratorSpec(math.log, lambda y: y, domain=POSITIVE, label="broken")


class TestGini:
    def test_parameters_one_zero_is_arithmetic(self):
        assert gini(1, 0, (1, 3), (1, 1)) == pytest.approx(2, rel=1e-12)

    def test_contraharmonic_point(self):
        assert gini(2, 1, (1, 2), (1, 1)) == pytest.approx(5 / 3, rel=1e-12)

    def test_equal_parameter_branch(self):
        e2 = math.e ** 2
        expected = math.exp((1 * 1 * 0 + 1 * e2 * 2) / (1 + e2))
        assert gini(1, 1, (1.0, e2), (1, 1)) == pytest.approx(expected, rel=1e-12)

    def test_symmetry_in_parameters(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            x = tuple(float(v) for v in rng.uniform(0.2, 8, n))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, n))
            p, q = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
            a, b = gini(p, q, x, w), gini(q, p, x, w)
            assert abs(a - b) <= 1e-12 * (1 + abs(a))

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainViolation):
            gini(2, 1, (0.0, 1.0), (1, 1))


class TestPowerMean:
    def test_arithmetic_point(self):
        assert power_mean(1, (1, 3), (1, 1)) == pytest.approx(2, rel=1e-12)

    def test_geometric_point(self):
        assert power_mean(0, (1, 4), (1, 1)) == pytest.approx(2, rel=1e-12)

    def test_harmonic_point(self):
        assert power_mean(-1, (1, 3), (1, 1)) == pytest.approx(1.5, rel=1e-12)

    def test_matches_two_parameter_family(self):
        rng = np.random.default_rng(3)
        for p in np.linspace(-3, 3, 25):
            x = tuple(float(v) for v in rng.uniform(0.2, 8, 4))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, 4))
            a = power_mean(float(p), x, w)
            b = gini(float(p), 0.0, x, w)
            assert abs(a - b) <= 1e-12 * (1 + abs(a))

    def test_monotone_in_exponent(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            x = tuple(float(v) for v in np.exp(rng.uniform(np.log(0.1), np.log(10), n)))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, n))
            ps = sorted(rng.uniform(-4, 4, 3))
            vals = [power_mean(float(p), x, w) for p in ps]
            assert vals[0] <= vals[1] + 1e-12
            assert vals[1] <= vals[2] + 1e-12

    def test_extreme_exponent_stable(self):
        v = power_mean(200.0, (0.5, 2.0, 1e-3), (1, 1, 1))
        assert math.isfinite(v)
        assert v <= 2.0 + 1e-9
        v = power_mean(-200.0, (0.5, 2.0, 1e-3), (1, 1, 1))
        assert math.isfinite(v)
        assert v >= 1e-3 - 1e-12

    def test_entry_homogeneity(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            x = tuple(float(v) for v in rng.uniform(0.2, 5, n))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, n))
            t = float(rng.uniform(0.2, 5))
            p, q = float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2))
            for fn in (lambda xs: power_mean(p, xs, w),
                       lambda xs: gini(p, q, xs, w),
                       lambda xs: gini21_counterexample(xs, w),
                       lambda xs: homogeneous_deviation(shifted_power(0.5), xs, w)):
                a = fn(tuple(t * xi for xi in x))
                b = t * fn(x)
                assert abs(a - b) <= 1e-10 * (1 + abs(b))


class TestHomogeneousDeviation:
    def test_log_reproduces_geometric(self):
        assert homogeneous_deviation(math.log, (1, 4), (1, 1)) == pytest.approx(2, abs=1e-10)

    def test_affine_reproduces_arithmetic(self):
        got = homogeneous_deviation(lambda t: t - 1.0, (1, 3), (1, 1))
        assert got == pytest.approx(2, abs=1e-10)

    def test_reciprocal_reproduces_harmonic(self):
        got = homogeneous_deviation(shifted_power(-1.0), (1, 3), (1, 1))
        assert got == pytest.approx(1.5, abs=1e-10)

    def test_requires_unit_root(self):
        with pytest.raises(InvalidGenerator):
            homogeneous_deviation(lambda t: t, (1, 2), (1, 1))

    def test_matches_power_means(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            x = tuple(float(v) for v in rng.uniform(0.2, 8, n))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, n))
            p = float(rng.uniform(-2, 2))
            a = homogeneous_deviation(shifted_power(p), x, w)
            b = power_mean(p, x, w)
            assert abs(a - b) <= 1e-9 * (1 + abs(b))


class TestCounterexampleMean:
    def test_zero_branch(self):
        assert gini21_counterexample((0.0, 0.0), (1, 1)) == 0.0

    def test_positive_branch(self):
        assert gini21_counterexample((1, 2), (1, 1)) == pytest.approx(5 / 3, rel=1e-15)

    def test_tail_profile(self):
        # entries (0, ..., 0, t, 1) give (w[-2] t^2 + w[-1]) / (w[-2] t + w[-1])
        w = (3, 5, 2, 7)
        for t in (0.0, 0.25, 1.0, 3.5):
            x = (0.0, 0.0, t, 1.0)
            expected = (2 * t * t + 7) / (2 * t + 7)
            assert gini21_counterexample(x, w) == pytest.approx(expected, rel=1e-15)

    def test_agrees_with_two_parameter_family_when_positive(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(2, 6))
            x = tuple(float(v) for v in rng.uniform(0.05, 9, n))
            w = tuple(float(v) for v in rng.uniform(0.1, 3, n))
            a = gini21_counterexample(x, w)
            b = gini(2, 1, x, w)
            assert abs(a - b) <= 1e-12 * (1 + abs(a))

    def test_rejects_negative(self):
        with pytest.raises(DomainViolation):
            gini21_counterexample((-1.0, 1.0), (1, 1))
