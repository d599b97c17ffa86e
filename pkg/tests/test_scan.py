import numpy as np
import pytest

from spurplan.core import FrequencyBand, PlanConfig, Sign, SpurLevel
from spurplan.scan import (
    ChartData,
    SpurClass,
    build_chart,
    chart_to_dict,
    classify,
    enumerate_spurs,
    identify_coefficients,
    iter_orders,
    spur_band,
)

MHZ = 1e6


def line_y_at(line, x: float) -> float:
    """Interpolate a polyline at input frequency x."""
    vs = line.vertices
    for (x1, y1), (x2, y2) in zip(vs, vs[1:]):
        if x1 <= x <= x2:
            return y1 + (y2 - y1) * (x - x1) / (x2 - x1)
    raise AssertionError(f"x={x} outside line domain")


def find_line(chart: ChartData, m: int, n: int, sign=Sign.DIFFERENCE):
    for line in chart.lines:
        if (line.m, line.n, line.sign) == (m, n, sign):
            return line
    raise AssertionError(f"line ({m},{n},{sign}) not in chart")


class TestSpurBand:
    def test_paper_second_stage_spur(self):
        band = spur_band(2, 2, Sign.DIFFERENCE,
                         FrequencyBand(1799 * MHZ, 1800 * MHZ), 1860 * MHZ)
        assert band.low_hz == pytest.approx(120 * MHZ)
        assert band.high_hz == pytest.approx(122 * MHZ)

    def test_desired_first_stage(self):
        band = spur_band(1, 1, Sign.DIFFERENCE,
                         FrequencyBand(2700 * MHZ, 3100 * MHZ), 4700 * MHZ)
        assert (band.low_hz, band.high_hz) == (1600 * MHZ, 2000 * MHZ)

    def test_lo_feedthrough_is_a_point(self):
        band = spur_band(0, 1, Sign.DIFFERENCE,
                         FrequencyBand(100 * MHZ, 900 * MHZ), 4700 * MHZ)
        assert band.low_hz == band.high_hz == 4700 * MHZ

    def test_fold_clamps_to_zero(self):
        # 2f - 4700 changes sign inside [2300, 2400] MHz
        band = spur_band(2, 1, Sign.DIFFERENCE,
                         FrequencyBand(2300 * MHZ, 2400 * MHZ), 4700 * MHZ)
        assert band.low_hz == 0.0
        assert band.high_hz == pytest.approx(100 * MHZ)

    def test_sum_band(self):
        band = spur_band(3, 1, Sign.SUM, FrequencyBand(10 * MHZ, 20 * MHZ), 100 * MHZ)
        assert (band.low_hz, band.high_hz) == (130 * MHZ, 160 * MHZ)

    def test_monotone_in_rf_band(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            m = int(rng.integers(0, 6))
            n = int(rng.integers(0, 6))
            sign = Sign.SUM if rng.random() < 0.5 else Sign.DIFFERENCE
            lo = float(rng.uniform(0.1e9, 5e9))
            f1 = float(rng.uniform(0.1e9, 4e9))
            w_inner = float(rng.uniform(1e6, 200e6))
            w_extra = float(rng.uniform(0, 300e6))
            inner = FrequencyBand(f1, f1 + w_inner)
            outer = FrequencyBand(max(0.0, f1 - w_extra), f1 + w_inner + w_extra)
            b_in = spur_band(m, n, sign, inner, lo)
            b_out = spur_band(m, n, sign, outer, lo)
            assert b_out.low_hz <= b_in.low_hz + 1e-6
            assert b_out.high_hz >= b_in.high_hz - 1e-6

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            spur_band(-1, 0, Sign.DIFFERENCE, FrequencyBand(1, 2), 100.0)
        with pytest.raises(ValueError):
            spur_band(1, 1, Sign.DIFFERENCE, FrequencyBand(1, 2), 0.0)


class TestClassify:
    @pytest.mark.parametrize("level,expected", [
        (SpurLevel.exact(46), SpurClass.CRITICAL),
        (SpurLevel.at_least(69), SpurClass.MODERATE),
        (SpurLevel.desired(), SpurClass.DESIRED),
        (SpurLevel.unknown(), SpurClass.CRITICAL),
        (SpurLevel.exact(70), SpurClass.MODERATE),   # boundary goes down
        (SpurLevel.exact(50), SpurClass.CRITICAL),   # boundary goes down
        (SpurLevel.exact(70.01), SpurClass.NON_IMPACT),
        (SpurLevel.at_least(86), SpurClass.NON_IMPACT),
    ])
    def test_examples(self, level, expected):
        assert classify(level) is expected

    def test_floor_does_not_move_thresholds(self):
        assert classify(SpurLevel.exact(60), floor_db=99.0) is SpurClass.MODERATE
        assert classify(SpurLevel.exact(60), floor_db=10.0) is SpurClass.MODERATE

    def test_floor_must_be_positive(self):
        with pytest.raises(ValueError):
            classify(SpurLevel.exact(60), floor_db=0.0)

    def test_order_preserving(self):
        severity = {SpurClass.NON_IMPACT: 0, SpurClass.MODERATE: 1, SpurClass.CRITICAL: 2}
        previous = None
        for s in np.linspace(100.0, 0.0, 401):
            current = severity[classify(SpurLevel.exact(float(s)))]
            if previous is not None:
                assert current >= previous
            previous = current


class TestEnumerate:
    def test_mca_products(self, mca_table):
        config = PlanConfig(table=mca_table, rf_center_hz=2900 * MHZ,
                            rf_bw_hz=400 * MHZ, if_bw_hz=30 * MHZ, max_order=10)
        products = enumerate_spurs(mca_table, config.rf_band, 4700 * MHZ, config)
        by_key = {(p.m, p.n, p.sign): p for p in products}
        p21 = by_key[(2, 1, Sign.DIFFERENCE)]
        # |2f - 4700| over [2700, 3100] MHz sweeps 700..1500 MHz
        assert p21.out_band.low_hz == pytest.approx(700 * MHZ)
        assert p21.out_band.high_hz == pytest.approx(1500 * MHZ)
        assert p21.level.suppression_db == 52.0
        assert p21.spur_class is SpurClass.MODERATE

    def test_exactly_one_desired(self, mca_table, ade_table):
        for table in (mca_table, ade_table):
            config = PlanConfig(table=table, rf_center_hz=1e9, rf_bw_hz=100 * MHZ,
                                if_bw_hz=10 * MHZ, max_order=5)
            products = enumerate_spurs(table, config.rf_band, 1.2e9, config)
            assert sum(p.desired for p in products) == 1

    def test_order_one_no_sums(self, mca_table):
        config = PlanConfig(table=mca_table, rf_center_hz=1e9, rf_bw_hz=100 * MHZ,
                            if_bw_hz=10 * MHZ, max_order=1,
                            include_sum_products=False)
        products = enumerate_spurs(mca_table, config.rf_band, 1.2e9, config)
        assert {(p.m, p.n) for p in products} == {(0, 0), (0, 1), (1, 0), (1, 1)}

    @pytest.mark.parametrize("max_order", [1, 2, 5])
    def test_cardinality(self, mca_table, max_order):
        assert len(iter_orders(max_order, False)) == (max_order + 1) ** 2
        assert len(iter_orders(max_order, True)) == (max_order + 1) ** 2 + max_order ** 2

    def test_sum_sharing_desired_cell_is_critical(self, mca_table):
        config = PlanConfig(table=mca_table, rf_center_hz=1e9, rf_bw_hz=100 * MHZ,
                            if_bw_hz=10 * MHZ, max_order=1)
        products = enumerate_spurs(mca_table, config.rf_band, 1.2e9, config)
        sum11 = next(p for p in products if (p.m, p.n, p.sign) == (1, 1, Sign.SUM))
        assert not sum11.desired
        assert sum11.spur_class is SpurClass.CRITICAL


class TestBuildChart:
    def chart(self, table, lo_hz, rf_lo, rf_hi, **kwargs):
        config = PlanConfig(table=table, rf_center_hz=(rf_lo + rf_hi) / 2,
                            rf_bw_hz=rf_hi - rf_lo, if_bw_hz=1.0,
                            max_order=kwargs.pop("max_order", 10),
                            include_sum_products=kwargs.pop("sums", False))
        return build_chart(table, lo_hz, FrequencyBand(rf_lo, rf_hi), config, **kwargs)

    def test_second_stage_chart(self, ade_table):
        chart = self.chart(ade_table, 1860 * MHZ, 1785 * MHZ, 1815 * MHZ)
        desired = find_line(chart, 1, 1)
        assert desired.spur_class is SpurClass.DESIRED
        assert line_y_at(desired, 1799 * MHZ) == pytest.approx(61 * MHZ)
        spur22 = find_line(chart, 2, 2)
        assert line_y_at(spur22, 1799 * MHZ) == pytest.approx(122 * MHZ)
        assert spur22.spur_class is SpurClass.CRITICAL
        assert spur22.suppression_db == 43.0

    def test_first_stage_desired_is_descending(self, mca_table):
        chart = self.chart(mca_table, 4700 * MHZ, 2700 * MHZ, 3100 * MHZ)
        desired = find_line(chart, 1, 1)
        xs = [x for x, _ in desired.vertices]
        ys = [y for _, y in desired.vertices]
        assert ys == [4700 * MHZ - x for x in xs]
        assert all(y2 < y1 for y1, y2 in zip(ys, ys[1:]))

    def test_vertices_satisfy_product_equation(self, mca_table, ade_table):
        for table, lo in ((mca_table, 4700 * MHZ), (ade_table, 1860 * MHZ)):
            chart = self.chart(table, lo, 0.4 * lo, 0.8 * lo, sums=True,
                               include_non_impact=True)
            for line in chart.lines:
                for x, y in line.vertices:
                    if line.sign is Sign.DIFFERENCE:
                        assert abs(abs(line.m * x - line.n * lo) - y) <= 1.0
                    else:
                        assert abs(line.m * x + line.n * lo - y) <= 1.0

    def test_fold_vertex_inserted(self, mca_table):
        chart = self.chart(mca_table, 4700 * MHZ, 2300 * MHZ, 2400 * MHZ)
        line = find_line(chart, 2, 1)
        assert len(line.vertices) == 3
        fold_x, fold_y = line.vertices[1]
        assert fold_y == 0.0
        assert fold_x == pytest.approx(2350 * MHZ)

    def test_normalized_divides_by_lo(self, ade_table):
        lo = 1860 * MHZ
        plain = self.chart(ade_table, lo, 1785 * MHZ, 1815 * MHZ)
        norm = self.chart(ade_table, lo, 1785 * MHZ, 1815 * MHZ, normalized=True)
        assert norm.normalized
        for pl, nl in zip(plain.lines, norm.lines):
            for (px, py), (nx, ny) in zip(pl.vertices, nl.vertices):
                assert nx == pytest.approx(px / lo)
                assert ny == pytest.approx(py / lo)

    def test_non_impact_lines_hidden_by_default(self, ade_table):
        shown = self.chart(ade_table, 1860 * MHZ, 1785 * MHZ, 1815 * MHZ)
        everything = self.chart(ade_table, 1860 * MHZ, 1785 * MHZ, 1815 * MHZ,
                                include_non_impact=True)
        assert all(l.spur_class is not SpurClass.NON_IMPACT for l in shown.lines)
        assert len(everything.lines) > len(shown.lines)
        # (3, 2) is an 84 dB product: NonImpact, so hidden by default
        with pytest.raises(AssertionError):
            find_line(shown, 3, 2)

    def test_desired_always_present(self, ade_table):
        chart = self.chart(ade_table, 1860 * MHZ, 1785 * MHZ, 1815 * MHZ)
        assert find_line(chart, 1, 1).spur_class is SpurClass.DESIRED

    def test_wire_format_field_names(self, ade_table):
        chart = self.chart(ade_table, 1860 * MHZ, 1785 * MHZ, 1815 * MHZ)
        doc = chart_to_dict(chart)
        assert set(doc) == {"lo_hz", "rf_range", "normalized", "lines"}
        assert doc["rf_range"] == [1785 * MHZ, 1815 * MHZ]
        line = doc["lines"][0]
        assert {"m", "n", "sign", "class", "vertices", "suppression_db"} <= set(line)
        assert line["sign"] in ("difference", "sum")
        assert isinstance(line["vertices"][0], list)


class TestIdentify:
    def test_paper_backsolve(self):
        result = identify_coefficients(
            [(1799 * MHZ, 122 * MHZ), (1800 * MHZ, 120 * MHZ)], 1860 * MHZ, 10)
        assert result[0] == (2, 2, Sign.DIFFERENCE)

    def test_desired_product(self):
        result = identify_coefficients(
            [(1799 * MHZ, 61 * MHZ), (1800 * MHZ, 60 * MHZ)], 1860 * MHZ, 10)
        assert result[0] == (1, 1, Sign.DIFFERENCE)

    def test_sum_round_trip(self):
        lo = 913 * MHZ
        f1, f2 = 400 * MHZ, 427 * MHZ
        pts = [(f1, 3 * f1 + lo), (f2, 3 * f2 + lo)]
        assert identify_coefficients(pts, lo, 6) == [(3, 1, Sign.SUM)]

    def test_round_trip_over_enumeration(self, ade_table):
        config = PlanConfig(table=ade_table, rf_center_hz=1800 * MHZ,
                            rf_bw_hz=30 * MHZ, if_bw_hz=5 * MHZ, max_order=4)
        products = enumerate_spurs(ade_table, config.rf_band, 1860 * MHZ, config)
        for p in products:
            if p.m == 0:
                continue  # horizontal lines need distinct f_in, not f_out
            f1, f2 = 1790 * MHZ, 1807 * MHZ
            def out(f):
                if p.sign is Sign.SUM:
                    return p.m * f + p.n * 1860 * MHZ
                return abs(p.m * f - p.n * 1860 * MHZ)
            found = identify_coefficients([(f1, out(f1)), (f2, out(f2))], 1860 * MHZ, 4)
            assert (p.m, p.n, p.sign) in found

    def test_sorted_by_total_order(self):
        lo = 1000 * MHZ
        # the desired line: (1,1) fits, and so do higher multiples on the fold
        result = identify_coefficients([(900 * MHZ, 100 * MHZ), (950 * MHZ, 50 * MHZ)], lo, 10)
        orders = [m + n for m, n, _ in result]
        assert orders == sorted(orders)
        assert result[0] == (1, 1, Sign.DIFFERENCE)

    def test_no_match_is_empty(self):
        assert identify_coefficients([(10 * MHZ, 7.1234 * MHZ), (11 * MHZ, 7.9876 * MHZ)],
                                     1000 * MHZ, 3) == []

    def test_identical_inputs_rejected(self):
        with pytest.raises(ValueError):
            identify_coefficients([(1e9, 1e8), (1e9, 2e8)], 2e9, 5)
