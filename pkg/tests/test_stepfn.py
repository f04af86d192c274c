"""Exact rational geometry: proportional sets, integrals, proof function."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kedlaya.errors import NonpositiveWeight, ThetaOutOfRange, WeightsNotInV
from kedlaya.inequality import partial_arithmetic_means, step_inequality
from kedlaya.means import MeanHandle, mean_from_id
from kedlaya.stepfn import (
    ProportionalSet,
    QInterval,
    QRectangle,
    SimpleFunction1D,
    SimpleFunction2D,
    build_proof_function,
    function_from_json,
    function_to_json,
    jensen_fubini_sides,
    m_integral,
    proportional_set,
    rect,
    verify_proof_construction,
    verify_proportionality,
)
from kedlaya.weights import make_weights, partial_sums

UNIT = rect(0, 1, 0, 1)
GEO = mean_from_id("power:0")
ARITH = mean_from_id("arithmetic")


def random_host(rng) -> QRectangle:
    def riv():
        a = Fraction(int(rng.integers(-12, 12)), int(rng.integers(1, 8)))
        b = a + Fraction(int(rng.integers(1, 12)), int(rng.integers(1, 8)))
        return QInterval(a, b)

    return QRectangle(riv(), riv())


class TestQTypes:
    def test_interval_needs_positive_length(self):
        with pytest.raises(ValueError):
            QInterval(1, 1)
        with pytest.raises(ValueError):
            QInterval(2, 1)

    def test_interval_length_exact(self):
        assert QInterval(Fraction(1, 3), Fraction(1, 2)).length == Fraction(1, 6)

    def test_rectangle_area(self):
        assert rect(0, 2, 0, Fraction(1, 2)).area == 1


class TestProportionalSet:
    def test_half_on_unit_square(self):
        ps = proportional_set(UNIT, Fraction(1, 2))
        expected = {
            rect(0, Fraction(1, 2), 0, Fraction(1, 2)),
            rect(Fraction(1, 2), 1, Fraction(1, 2), 1),
        }
        assert set(ps.rectangles) == expected

    def test_zero_is_empty(self):
        assert proportional_set(UNIT, 0).rectangles == ()

    def test_one_covers_host(self):
        ps = proportional_set(UNIT, 1)
        assert len(ps.rectangles) == 1
        assert ps.rectangles[0] == UNIT

    def test_out_of_range(self):
        with pytest.raises(ThetaOutOfRange):
            proportional_set(UNIT, Fraction(3, 2))
        with pytest.raises(ThetaOutOfRange):
            proportional_set(UNIT, -1)

    def test_cell_count(self):
        ps = proportional_set(UNIT, Fraction(3, 7))
        assert len(ps.rectangles) == 21  # p*q cells

    def test_construction_verifies_small_denominators(self):
        rng = np.random.default_rng(0)
        for q in range(1, 21):
            p = int(rng.integers(0, q + 1))
            host = random_host(rng)
            ps = proportional_set(host, Fraction(p, q))
            assert verify_proportionality(ps)

    def test_false_for_single_cell_claim(self):
        bad = ProportionalSet(
            (rect(0, Fraction(1, 2), 0, Fraction(1, 2)),), Fraction(1, 2), UNIT)
        ok, failures = verify_proportionality(bad, explain=True)
        assert not ok
        assert failures

    @given(st.integers(1, 30), st.data())
    @settings(max_examples=60, deadline=None)
    def test_construction_always_verifies(self, q, data):
        p = data.draw(st.integers(0, q))
        a = data.draw(st.fractions(min_value=-10, max_value=10, max_denominator=6))
        c = data.draw(st.fractions(min_value=-10, max_value=10, max_denominator=6))
        bw = data.draw(st.fractions(min_value=Fraction(1, 6), max_value=9,
                                    max_denominator=6))
        bh = data.draw(st.fractions(min_value=Fraction(1, 6), max_value=9,
                                    max_denominator=6))
        host = rect(a, a + bw, c, c + bh)
        assert verify_proportionality(proportional_set(host, Fraction(p, q)))

    def test_empty_zero_claim_true(self):
        assert verify_proportionality(ProportionalSet((), Fraction(0), UNIT))

    def test_escaping_rectangle_fails(self):
        bad = ProportionalSet((rect(0, 2, 0, 1),), Fraction(1), UNIT)
        assert not verify_proportionality(bad)


class TestSimpleFunctions:
    def test_1d_chain_validated(self):
        f = SimpleFunction1D(((QInterval(0, 1), 1.0), (QInterval(1, 2), 3.0)))
        assert f.support == QInterval(0, 2)
        with pytest.raises(ValueError):
            SimpleFunction1D(((QInterval(0, 1), 1.0), (QInterval(2, 3), 3.0)))

    def test_2d_tiling_validated(self):
        SimpleFunction2D(UNIT, [(rect(0, 1, 0, Fraction(1, 2)), 1.0),
                                (rect(0, 1, Fraction(1, 2), 1), 2.0)])
        with pytest.raises(ValueError):  # hole
            SimpleFunction2D(UNIT, [(rect(0, 1, 0, Fraction(1, 2)), 1.0)])
        with pytest.raises(ValueError):  # overlap
            SimpleFunction2D(UNIT, [(rect(0, 1, 0, Fraction(1, 2)), 1.0),
                                    (rect(0, 1, 0, 1), 2.0)])
        with pytest.raises(ValueError):  # escapes bounds
            SimpleFunction2D(UNIT, [(rect(0, 2, 0, 1), 1.0)])

    def test_point_evaluation(self):
        f = SimpleFunction2D(UNIT, [(rect(0, 1, 0, Fraction(1, 2)), 1.0),
                                    (rect(0, 1, Fraction(1, 2), 1), 2.0)])
        assert f.value_at(Fraction(1, 2), Fraction(1, 4)) == 1.0
        assert f.value_at(Fraction(1, 2), Fraction(1, 2)) == 2.0


class TestMIntegral:
    def test_constant(self):
        f = SimpleFunction1D(((QInterval(0, 1), 4.2),))
        for mean in (ARITH, GEO, MeanHandle.gini(2, 1)):
            assert m_integral(mean, f) == 4.2

    def test_arithmetic_two_pieces(self):
        f = SimpleFunction1D(((QInterval(0, Fraction(1, 2)), 1.0),
                              (QInterval(Fraction(1, 2), 1), 3.0)))
        assert m_integral(ARITH, f) == 2.0

    def test_geometric_equal_lengths(self):
        f = SimpleFunction1D(((QInterval(0, 1), 1.0), (QInterval(1, 2), 4.0)))
        assert m_integral(GEO, f) == pytest.approx(2.0, abs=1e-12)

    @given(st.integers(1, 6), st.integers(1, 11))
    @settings(max_examples=40, deadline=None)
    def test_splitting_invariance(self, num, den):
        # cutting a piece in two at a rational point never moves the value
        split = Fraction(num, den + num)  # in (0, 1)
        base = SimpleFunction1D(((QInterval(0, 1), 2.0), (QInterval(1, 3), 5.0)))
        cut = Fraction(1) + 2 * split
        refined = SimpleFunction1D(((QInterval(0, 1), 2.0),
                                    (QInterval(1, cut), 5.0),
                                    (QInterval(cut, 3), 5.0)))
        for mean in (ARITH, GEO, MeanHandle.gini(2, 1), MeanHandle.power(-1)):
            a = m_integral(mean, base)
            b = m_integral(mean, refined)
            assert abs(a - b) <= 1e-12 * (1 + abs(a))


class TestJensenFubini:
    def test_constant_function(self):
        f = SimpleFunction2D(UNIT, [(UNIT, 3.3)])
        assert jensen_fubini_sides(GEO, f) == (3.3, 3.3)

    def test_arithmetic_always_equal(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            f = _random_grid_function(rng)
            lhs, rhs = jensen_fubini_sides(ARITH, f)
            assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))

    def test_proof_function_sides(self):
        f = build_proof_function((1.0, 4.0), (1, 1), 2)
        lhs, rhs = jensen_fubini_sides(GEO, f)
        assert lhs == pytest.approx(1.5, abs=1e-12)
        assert rhs == pytest.approx(math.sqrt(2.5), abs=1e-12)

    def test_concave_direction_randomized(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            f = _random_grid_function(rng)
            lhs, rhs = jensen_fubini_sides(GEO, f)
            assert lhs <= rhs + 1e-9


def _random_grid_function(rng) -> SimpleFunction2D:
    nx, ny = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    xs = [Fraction(i, nx) for i in range(nx + 1)]
    ys = [Fraction(j, ny) for j in range(ny + 1)]
    pieces = []
    for i in range(nx):
        for j in range(ny):
            pieces.append((rect(xs[i], xs[i + 1], ys[j], ys[j + 1]),
                           float(rng.uniform(0.2, 5.0))))
    return SimpleFunction2D(UNIT, pieces)


class TestProofFunction:
    def test_two_entry_block_layout(self):
        f = build_proof_function((1.0, 4.0), (1, 1), 2)
        assert f.bounding == rect(0, 2, 0, 2)
        # proportionality 0 in the first left block, 1 in the second: the
        # whole left column carries the first prefix mean
        assert f.value_at(Fraction(1, 2), Fraction(1, 2)) == 1.0
        assert f.value_at(Fraction(1, 2), Fraction(3, 2)) == 1.0
        # right blocks carry the raw entries
        assert f.value_at(Fraction(3, 2), Fraction(1, 2)) == 1.0
        assert f.value_at(Fraction(3, 2), Fraction(3, 2)) == 4.0

    def test_constant_entries_constant_function(self):
        f = build_proof_function((2.5, 2.5, 2.5), (1, 2, 3), 3)
        assert set(v for _, v in f.pieces) == {2.5}

    def test_row_slice_property(self):
        # the average over x of any horizontal slice is the prefix mean of
        # the strip it belongs to
        rng = np.random.default_rng(21)
        for _ in range(25):
            n = int(rng.integers(2, 5))
            w = make_weights(sorted((int(v) for v in rng.integers(1, 4, n)),
                                    reverse=True), "W0")
            x = [float(v) for v in rng.uniform(0.3, 5.0, n)]
            j = int(rng.integers(2, n + 1))
            f = build_proof_function(x, w, j)
            m = partial_arithmetic_means(x, w)
            sums = [Fraction(0)] + list(partial_sums(w))
            grid = f.value_grid()
            wx = [float(v) for v in f.x_lengths()]
            total = math.fsum(wx)
            for jdx in range(grid.shape[1]):
                y_mid = (f.ys[jdx] + f.ys[jdx + 1]) / 2
                strip = next(k for k in range(1, j + 1)
                             if sums[k - 1] <= y_mid < sums[k])
                row_mean = math.fsum(g * wxi for g, wxi in zip(grid[:, jdx], wx)) / total
                assert abs(row_mean - m[strip - 1]) <= 1e-12 * (1 + abs(row_mean))

    def test_first_strip_is_first_entry(self):
        # rows in the lowest strip average to the first entry
        x = [3.7, 1.1, 2.9]
        w = make_weights([1, 1, 1], "W0")
        f = build_proof_function(x, w, 2)
        grid = f.value_grid()
        wx = [float(v) for v in f.x_lengths()]
        row = grid[:, 0]
        avg = math.fsum(g * wxi for g, wxi in zip(row, wx)) / math.fsum(wx)
        assert avg == pytest.approx(3.7, rel=1e-12)

    def test_column_slice_profile(self):
        # left-column slices carry the prefix means with measures scaled by
        # the cumulative-weight ratio, accounted exactly
        rng = np.random.default_rng(22)
        for _ in range(25):
            n = int(rng.integers(2, 5))
            w = make_weights(sorted((int(v) for v in rng.integers(1, 4, n)),
                                    reverse=True), "W0")
            x = [float(v) for v in rng.uniform(0.3, 5.0, n)]
            j = int(rng.integers(2, n + 1))
            f = build_proof_function(x, w, j)
            m = partial_arithmetic_means(x, w)
            sums = [Fraction(0)] + list(partial_sums(w))
            s_left, s_full = sums[j - 1], sums[j]
            expected: dict = {}
            for k in range(1, j):
                key = m[k - 1]
                expected[key] = (expected.get(key, Fraction(0))
                                 + (s_full / s_left) * w.entries[k - 1])
            for i, x_cell in enumerate(zip(f.xs, f.xs[1:])):
                if x_cell[1] > s_left:
                    continue
                assert f.column_profile(i) == expected

    def test_rejects_inadmissible_weights(self):
        # ratios increase at the last step
        w = make_weights([1, 1, 4], "W0")
        with pytest.raises(WeightsNotInV):
            build_proof_function([1.0, 2.0, 3.0], w, 3)

    def test_rejects_zero_weight(self):
        w = make_weights([1, 0, 1], "W0")
        with pytest.raises(NonpositiveWeight):
            build_proof_function([1.0, 2.0, 3.0], w, 3)

    def test_rejects_float_weights(self):
        with pytest.raises(ValueError):
            build_proof_function([1.0, 2.0], make_weights([1.0, 1.0], "W0"), 2)


class TestVerifyProofConstruction:
    def test_geometric_anchor(self):
        assert verify_proof_construction(GEO, (1.0, 4.0), (1, 1), 2, tol=1e-9)

    def test_arithmetic_equality_everywhere(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            n = int(rng.integers(2, 5))
            w = make_weights(sorted((int(v) for v in rng.integers(1, 4, n)),
                                    reverse=True), "W0")
            x = [float(v) for v in rng.uniform(0.3, 5.0, n)]
            j = int(rng.integers(2, n + 1))
            assert verify_proof_construction(ARITH, x, w, j, tol=1e-9)
            f = build_proof_function(x, w, j)
            lhs, rhs = jensen_fubini_sides(ARITH, f)
            slhs, srhs = step_inequality(ARITH, x, w, j)
            s = float(sum(w.entries[:j]))
            quadruple = [lhs, rhs, slhs / s, srhs / s]
            assert max(quadruple) - min(quadruple) <= 1e-12 * (1 + abs(lhs))

    def test_two_parameter_arithmetic_crosscheck(self):
        mean = mean_from_id("gini:1:0")
        assert verify_proof_construction(mean, (2.0, 3.0, 5.0), (4, 2, 1), 3,
                                         tol=1e-9)


class TestWireFormat:
    def test_round_trip(self):
        f = build_proof_function((1.0, 4.0, 2.0), (2, 1, 1), 3)
        doc = function_to_json(f)
        assert doc["schema"] == 1
        again = function_from_json(doc)
        assert again.pieces == f.pieces
        assert again.bounding == f.bounding

    def test_rationals_as_strings(self):
        f = build_proof_function((1.0, 4.0), (Fraction(1, 2), Fraction(1, 3)), 2)
        doc = function_to_json(f)
        assert doc["domain"]["x"] == ["0", "5/6"]
        for piece in doc["pieces"]:
            for field in (piece["x"], piece["y"]):
                Fraction(field[0]), Fraction(field[1])  # parseable
