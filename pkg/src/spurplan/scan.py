"""Mixer spur enumeration, classification, spur charts, coefficient back-solve.

All functions are pure over immutable inputs; products for a chart or an
enumeration come back in deterministic (m, n, sign) order.
"""
from __future__ import annotations

from dataclasses import dataclass
import enum

from .core import (
    FrequencyBand,
    LevelKind,
    PlanConfig,
    Sign,
    SpurLevel,
    SpurTable,
    lookup_level,
)


class SpurClass(enum.Enum):
    DESIRED = "Desired"
    CRITICAL = "Critical"
    MODERATE = "Moderate"
    NON_IMPACT = "NonImpact"


#: display classification boundaries, dB below the desired product
MODERATE_THRESHOLD_DB = 50.0
NON_IMPACT_THRESHOLD_DB = 70.0


def classify(level: SpurLevel, floor_db: float = 70.0) -> SpurClass:
    """Display class of a spur level.

    The class boundaries are fixed: suppression > 70 dB is NonImpact,
    50 < suppression <= 70 is Moderate, suppression <= 50 is Critical
    (boundaries assigned downward).  ``floor_db`` is the planner's
    admissibility knob and does not move these display thresholds.
    """
    if floor_db <= 0:
        raise ValueError("floor_db must be > 0")
    if level.kind is LevelKind.DESIRED:
        return SpurClass.DESIRED
    if level.kind is LevelKind.UNKNOWN:
        return SpurClass.CRITICAL
    s = level.worst_case_db
    if s > NON_IMPACT_THRESHOLD_DB:
        return SpurClass.NON_IMPACT
    if s > MODERATE_THRESHOLD_DB:
        return SpurClass.MODERATE
    return SpurClass.CRITICAL


def spur_band(m: int, n: int, sign: Sign, rf_band: FrequencyBand, lo_hz: float) -> FrequencyBand:
    """Image of the RF band under f -> |m f - n lo| (difference) or
    f -> m f + n lo (sum).

    If the difference argument changes sign inside the band the image folds
    at zero and the result's low edge is 0.
    """
    if m < 0 or n < 0:
        raise ValueError("harmonic orders must be >= 0")
    if lo_hz <= 0:
        raise ValueError("lo_hz must be > 0")
    if sign is Sign.SUM:
        return FrequencyBand(m * rf_band.low_hz + n * lo_hz, m * rf_band.high_hz + n * lo_hz)
    e1 = m * rf_band.low_hz - n * lo_hz
    e2 = m * rf_band.high_hz - n * lo_hz
    if e1 >= 0:
        return FrequencyBand(e1, e2)
    if e2 <= 0:
        return FrequencyBand(-e2, -e1)
    return FrequencyBand(0.0, max(-e1, e2))


@dataclass(frozen=True)
class SpurProduct:
    m: int
    n: int
    sign: Sign
    out_band: FrequencyBand
    level: SpurLevel
    spur_class: SpurClass
    desired: bool = False


def iter_orders(max_order: int, include_sums: bool) -> list[tuple[int, int, Sign]]:
    """All (m, n, sign) up to max_order.  Sum products exist only for
    m >= 1 and n >= 1; with m or n zero the sum band equals the difference
    band and would only duplicate the entry."""
    combos: list[tuple[int, int, Sign]] = []
    for m in range(max_order + 1):
        for n in range(max_order + 1):
            combos.append((m, n, Sign.DIFFERENCE))
            if include_sums and m >= 1 and n >= 1:
                combos.append((m, n, Sign.SUM))
    return combos


def enumerate_spurs(table: SpurTable, rf_band: FrequencyBand, lo_hz: float,
                    config: PlanConfig) -> list[SpurProduct]:
    """One SpurProduct per (m, n, sign) within config.max_order, classified
    from the table level.  The (1, 1) difference product is the desired one."""
    products: list[SpurProduct] = []
    for m, n, sign in iter_orders(config.max_order, config.include_sum_products):
        level = lookup_level(table, m, n)
        desired = (m, n, sign) == (1, 1, Sign.DIFFERENCE)
        spur_class = SpurClass.DESIRED if desired else classify(level)
        if not desired and level.kind is LevelKind.DESIRED:
            # A sum product sharing the desired cell is as strong as the
            # desired signal itself; report it as critical.
            spur_class = SpurClass.CRITICAL
        products.append(SpurProduct(
            m=m, n=n, sign=sign,
            out_band=spur_band(m, n, sign, rf_band, lo_hz),
            level=level,
            spur_class=spur_class,
            desired=desired,
        ))
    return products


# ---------------------------------------------------------------------------
# Spur charts (f_out vs f_in polylines)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartLine:
    m: int
    n: int
    sign: Sign
    spur_class: SpurClass
    vertices: tuple[tuple[float, float], ...]
    suppression_db: float | None


@dataclass(frozen=True)
class ChartData:
    lo_hz: float
    rf_range: FrequencyBand
    normalized: bool
    lines: tuple[ChartLine, ...]


def _line_vertices(m: int, n: int, sign: Sign, rf_range: FrequencyBand,
                   lo_hz: float) -> tuple[tuple[float, float], ...]:
    x1, x2 = rf_range.low_hz, rf_range.high_hz
    if sign is Sign.SUM:
        return ((x1, m * x1 + n * lo_hz), (x2, m * x2 + n * lo_hz))
    pts = [(x1, abs(m * x1 - n * lo_hz))]
    if m >= 1:
        fold = n * lo_hz / m
        if x1 < fold < x2:
            pts.append((fold, 0.0))
    pts.append((x2, abs(m * x2 - n * lo_hz)))
    return tuple(pts)


def build_chart(table: SpurTable, lo_hz: float, rf_range: FrequencyBand,
                config: PlanConfig, normalized: bool = False,
                include_non_impact: bool = False) -> ChartData:
    """Spur chart: one polyline per enumerated product, the desired line
    always present; NonImpact lines are dropped unless requested.

    Every fold of a difference line is an explicit vertex at
    (n lo / m, 0).  With ``normalized`` both vertex coordinates are divided
    by the LO frequency, as in the classic H/L spur diagram.
    """
    if rf_range.low_hz >= rf_range.high_hz:
        raise ValueError("rf_range must have low < high")
    lines: list[ChartLine] = []
    for product in enumerate_spurs(table, rf_range, lo_hz, config):
        if product.spur_class is SpurClass.NON_IMPACT and not include_non_impact:
            continue
        vertices = _line_vertices(product.m, product.n, product.sign, rf_range, lo_hz)
        if normalized:
            vertices = tuple((x / lo_hz, y / lo_hz) for x, y in vertices)
        supp = None
        if product.level.kind in (LevelKind.EXACT, LevelKind.AT_LEAST):
            supp = product.level.suppression_db
        lines.append(ChartLine(
            m=product.m, n=product.n, sign=product.sign,
            spur_class=product.spur_class,
            vertices=vertices,
            suppression_db=supp,
        ))
    return ChartData(lo_hz=lo_hz, rf_range=rf_range, normalized=normalized,
                     lines=tuple(lines))


def chart_to_dict(chart: ChartData) -> dict:
    """JSON-ready form with the wire field names used by the explorer UI
    and the SVG emitter."""
    return {
        "lo_hz": chart.lo_hz,
        "rf_range": [chart.rf_range.low_hz, chart.rf_range.high_hz],
        "normalized": chart.normalized,
        "lines": [
            {
                "m": line.m,
                "n": line.n,
                "sign": line.sign.value,
                "class": line.spur_class.value,
                "vertices": [[x, y] for x, y in line.vertices],
                "suppression_db": line.suppression_db,
            }
            for line in chart.lines
        ],
    }


# ---------------------------------------------------------------------------
# Coefficient back-solve
# ---------------------------------------------------------------------------

def identify_coefficients(points: list[tuple[float, float]], lo_hz: float,
                          max_order: int, tol_hz: float = 1.0
                          ) -> list[tuple[int, int, Sign]]:
    """Recover (m, n, sign) candidates from two observed (f_in, f_out) pairs.

    A candidate fits when both points satisfy its product equation within
    ``tol_hz``.  Results are sorted by total order m + n ascending, so the
    lowest-order explanation ranks first.  An empty list means no product of
    order <= max_order fits.
    """
    if len(points) != 2:
        raise ValueError("exactly two (f_in, f_out) points are required")
    (f1, g1), (f2, g2) = points
    if f1 == f2:
        raise ValueError("the two f_in values must differ")
    if max_order < 1:
        raise ValueError("max_order must be >= 1")

    matches: list[tuple[int, int, Sign]] = []
    for m in range(max_order + 1):
        for n in range(max_order + 1):
            if abs(abs(m * f1 - n * lo_hz) - g1) <= tol_hz and \
               abs(abs(m * f2 - n * lo_hz) - g2) <= tol_hz:
                matches.append((m, n, Sign.DIFFERENCE))
            if m >= 1 and n >= 1 and \
               abs(m * f1 + n * lo_hz - g1) <= tol_hz and \
               abs(m * f2 + n * lo_hz - g2) <= tol_hz:
                matches.append((m, n, Sign.SUM))
    matches.sort(key=lambda t: (t[0] + t[1], t[0], t[1], t[2].value))
    return matches
