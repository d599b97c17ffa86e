"""Spurious-free IF-center region search, sweep oracle, and frequency plans.

The analytic path treats the candidate IF center x as the unknown: the LO
tracks it (LO = rf_center + x for high-side injection, rf_center - x for
low-side), so every product's output band is piecewise linear in x and the
set of x whose IF band [x - if_bw/2, x + if_bw/2] collides with the product
is an exact union of intervals with rational endpoints.  No sampling is
involved; the sweep oracle below re-derives the same answer by brute force
so the two can cross-check each other.

All functions are pure; per-product interval work is independent and merges
deterministically by sorted endpoints.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    FrequencyBand,
    Injection,
    LevelKind,
    PlanConfig,
    Sign,
    SpurLevel,
    SpurTable,
    format_mhz,
    lookup_level,
)
from .scan import SpurClass, classify, iter_orders, spur_band

logger = logging.getLogger(__name__)

#: attribution tolerance for region-edge binding products
EDGE_TOL_HZ = Fraction(1)

_Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SpurFreeRegion:
    """Interval of admissible IF-center frequencies.

    ``binding_products`` lists the (m, n, sign) products whose forbidden
    intervals coincide (within 1 Hz) with this region's edges; empty for
    edges set by the search band itself or for sweep-derived regions.
    """
    if_center_band: FrequencyBand
    binding_products: tuple[tuple[int, int, Sign], ...] = ()


class PlanError(ValueError):
    """Invalid frequency-plan request."""


class PlanViolationError(PlanError):
    """A chosen IF center collides with disqualifying products."""

    def __init__(self, message: str, products: list[tuple[int, int, Sign]]):
        super().__init__(message)
        self.products = products


def is_disqualifying(level: SpurLevel, floor_db: float) -> bool:
    """A product disqualifies IF centers when its guaranteed suppression is
    below the floor.  Unknown cells and products as strong as the desired
    signal disqualify at any floor; suppression exactly equal to the floor
    is admissible."""
    if level.kind in (LevelKind.UNKNOWN, LevelKind.DESIRED):
        return True
    return level.worst_case_db < floor_db


# ---------------------------------------------------------------------------
# Exact per-product forbidden intervals
# ---------------------------------------------------------------------------

def _solve_le(coeff: Fraction, rhs: Fraction, seg: _Interval) -> _Interval | None:
    """Intersect {x : coeff*x <= rhs} with seg."""
    lo, hi = seg
    if coeff == 0:
        return seg if rhs >= 0 else None
    bound = rhs / coeff
    if coeff > 0:
        hi = min(hi, bound)
    else:
        lo = max(lo, bound)
    return (lo, hi) if lo <= hi else None


def _solve_ge(coeff: Fraction, rhs: Fraction, seg: _Interval) -> _Interval | None:
    """Intersect {x : coeff*x >= rhs} with seg."""
    lo, hi = seg
    if coeff == 0:
        return seg if rhs <= 0 else None
    bound = rhs / coeff
    if coeff > 0:
        lo = max(lo, bound)
    else:
        hi = min(hi, bound)
    return (lo, hi) if lo <= hi else None


def _merge_intervals(intervals: list[_Interval]) -> list[_Interval]:
    if not intervals:
        return []
    intervals = sorted(intervals)
    merged = [intervals[0]]
    for lo, hi in intervals[1:]:
        mlo, mhi = merged[-1]
        if lo <= mhi:  # closed intervals: touching merges
            merged[-1] = (mlo, max(mhi, hi))
        else:
            merged.append((lo, hi))
    return merged


def _product_intervals(m: int, n: int, sign: Sign, center: Fraction,
                       rf_half: Fraction, if_half: Fraction, inj_sign: int,
                       search: _Interval) -> list[_Interval]:
    """Exact x-intervals where product (m, n, sign) collides with the IF band.

    With LO(x) = center + inj_sign*x the band edges of |m f - n LO| over
    f in [r1, r2] are piecewise affine in x; each affine regime contributes
    the solution of two linear inequalities (band_low <= x + w and
    band_high >= x - w).  Closed-interval overlap: a band touching the IF
    band edge, including a fold touching 0 Hz, counts as a collision.
    """
    r1, r2 = center - rf_half, center + rf_half
    w = if_half
    # Band edge trackers E1(x) = m r1 - n LO(x), E2(x) = m r2 - n LO(x).
    a1 = m * r1 - n * center
    a2 = m * r2 - n * center
    b = Fraction(-n * inj_sign)

    out: list[_Interval] = []

    def add_regime(seg: _Interval, low_a: Fraction, low_b: Fraction,
                   high_a: Fraction, high_b: Fraction) -> None:
        # band_low <= x + w  <=>  (low_b - 1) x <= w - low_a
        part = _solve_le(low_b - 1, w - low_a, seg)
        if part is None:
            return
        # band_high >= x - w  <=>  (high_b - 1) x >= -w - high_a
        part = _solve_ge(high_b - 1, -w - high_a, part)
        if part is not None:
            out.append(part)

    if sign is Sign.SUM:
        add_regime(search, a1 + 2 * n * center, -b, a2 + 2 * n * center, -b)
        # Sum band edges are m r + n LO = (m r + n C) + n*inj_sign*x; reuse
        # the affine machinery with slope -b = n*inj_sign.
        return _merge_intervals(out)

    # Split the search interval where an edge crosses zero or where the two
    # folded edges swap roles (E1 + E2 = 0); regimes are constant between.
    cuts = {search[0], search[1]}
    if b != 0:
        for root in (-a1 / b, -a2 / b, -(a1 + a2) / (2 * b)):
            if search[0] < root < search[1]:
                cuts.add(root)
    points = sorted(cuts)

    for seg_lo, seg_hi in zip(points, points[1:]):
        seg = (seg_lo, seg_hi)
        mid = (seg_lo + seg_hi) / 2
        e1 = a1 + b * mid
        e2 = a2 + b * mid
        if e1 >= 0:
            add_regime(seg, a1, b, a2, b)
        elif e2 <= 0:
            add_regime(seg, -a2, -b, -a1, -b)
        elif -e1 >= e2:
            add_regime(seg, Fraction(0), Fraction(0), -a1, -b)
        else:
            add_regime(seg, Fraction(0), Fraction(0), a2, b)

    return _merge_intervals(out)


def _resolve_search(rf_center: Fraction, if_bw: Fraction, injection: Injection,
                    search_band: FrequencyBand | None) -> _Interval:
    w = if_bw / 2
    if search_band is None:
        if injection is Injection.HIGH_SIDE:
            lo, hi = w, 3 * rf_center
        else:
            lo, hi = w, rf_center - w
    else:
        lo = Fraction(search_band.low_hz)
        hi = Fraction(search_band.high_hz)
    if injection is Injection.LOW_SIDE and hi > rf_center:
        logger.warning(
            "low-side search band truncated at rf_center (%s MHz): "
            "IF centers at or above it would need a non-positive LO",
            format_mhz(float(rf_center)))
        hi = rf_center
    if lo >= hi:
        raise ValueError("empty search band")
    return lo, hi


def resolve_search_band(config: PlanConfig,
                        search_band: FrequencyBand | None = None) -> FrequencyBand:
    """Effective search interval: the caller's band (low-side truncated at
    rf_center) or the injection-dependent default."""
    lo, hi = _resolve_search(Fraction(config.rf_center_hz),
                             Fraction(config.if_bw_hz), config.injection,
                             search_band)
    return FrequencyBand(float(lo), float(hi))


def forbidden_intervals(table: SpurTable, rf_center_hz: float, rf_bw_hz: float,
                        if_bw_hz: float, injection: Injection, floor_db: float,
                        m: int, n: int, sign: Sign,
                        search_band: FrequencyBand | None = None
                        ) -> list[FrequencyBand]:
    """IF-center intervals forbidden by one product; empty when the product's
    table suppression meets the floor."""
    if (m, n, sign) == (1, 1, Sign.DIFFERENCE):
        raise ValueError("(1, 1) difference is the desired product, not a spur")
    level = lookup_level(table, m, n)
    if not is_disqualifying(level, floor_db):
        return []
    center = Fraction(rf_center_hz)
    search = _resolve_search(center, Fraction(if_bw_hz), injection, search_band)
    inj_sign = 1 if injection is Injection.HIGH_SIDE else -1
    ivals = _product_intervals(m, n, sign, center, Fraction(rf_bw_hz) / 2,
                               Fraction(if_bw_hz) / 2, inj_sign, search)
    return [FrequencyBand(float(lo), float(hi)) for lo, hi in ivals]


def find_spur_free_regions(config: PlanConfig,
                           search_band: FrequencyBand | None = None
                           ) -> list[SpurFreeRegion]:
    """Maximal IF-center intervals where no disqualifying product collides
    with the IF band, sorted ascending, each annotated with the products
    that bind its edges."""
    center = Fraction(config.rf_center_hz)
    search = _resolve_search(center, Fraction(config.if_bw_hz),
                             config.injection, search_band)
    inj_sign = 1 if config.injection is Injection.HIGH_SIDE else -1
    rf_half = Fraction(config.rf_bw_hz) / 2
    if_half = Fraction(config.if_bw_hz) / 2

    per_product: list[tuple[tuple[int, int, Sign], list[_Interval]]] = []
    for m, n, sign in iter_orders(config.max_order, config.include_sum_products):
        if (m, n, sign) == (1, 1, Sign.DIFFERENCE):
            continue
        if not is_disqualifying(lookup_level(config.table, m, n), config.spur_floor_db):
            continue
        ivals = _product_intervals(m, n, sign, center, rf_half, if_half,
                                   inj_sign, search)
        if ivals:
            per_product.append(((m, n, sign), ivals))

    blocked = _merge_intervals([iv for _, ivals in per_product for iv in ivals])

    # Complement of the blocked set within the search band.
    gaps: list[_Interval] = []
    cursor = search[0]
    for lo, hi in blocked:
        if lo > cursor:
            gaps.append((cursor, lo))
        cursor = max(cursor, hi)
        if cursor >= search[1]:
            break
    if cursor < search[1]:
        gaps.append((cursor, search[1]))

    regions: list[SpurFreeRegion] = []
    for lo, hi in gaps:
        if lo >= hi:
            continue
        binding: set[tuple[int, int, Sign]] = set()
        for product, ivals in per_product:
            for ilo, ihi in ivals:
                if abs(ihi - lo) <= EDGE_TOL_HZ or abs(ilo - hi) <= EDGE_TOL_HZ:
                    binding.add(product)
        ordered = tuple(sorted(binding, key=lambda t: (t[0] + t[1], t[0], t[1], t[2].value)))
        regions.append(SpurFreeRegion(FrequencyBand(float(lo), float(hi)), ordered))
    return regions


# ---------------------------------------------------------------------------
# Brute-force sweep oracle (independent code path)
# ---------------------------------------------------------------------------

def sweep_oracle(config: PlanConfig, search_band: FrequencyBand | None = None,
                 step_hz: float = 50e3) -> list[SpurFreeRegion]:
    """Sample IF centers at ``step_hz`` and test every product's band overlap
    directly.  Shares no interval machinery with the analytic search; region
    edges land on grid samples, so they may differ from the exact answer by
    up to one step.  Sweep regions carry no binding-product attribution."""
    if step_hz <= 0:
        raise ValueError("step_hz must be > 0")
    center = Fraction(config.rf_center_hz)
    lo_f, hi_f = _resolve_search(center, Fraction(config.if_bw_hz),
                                 config.injection, search_band)
    lo, hi = float(lo_f), float(hi_f)

    count = int(np.floor((hi - lo) / step_hz)) + 1
    xs = lo + step_hz * np.arange(count)
    c = config.rf_center_hz
    lo_freqs = c + xs if config.injection is Injection.HIGH_SIDE else c - xs
    w = config.if_bw_hz / 2.0
    r1 = c - config.rf_bw_hz / 2.0
    r2 = c + config.rf_bw_hz / 2.0

    blocked = np.zeros(xs.shape, dtype=bool)
    for m, n, sign in iter_orders(config.max_order, config.include_sum_products):
        if (m, n, sign) == (1, 1, Sign.DIFFERENCE):
            continue
        if not is_disqualifying(lookup_level(config.table, m, n), config.spur_floor_db):
            continue
        if sign is Sign.SUM:
            band_lo = m * r1 + n * lo_freqs
            band_hi = m * r2 + n * lo_freqs
        else:
            e1 = m * r1 - n * lo_freqs
            e2 = m * r2 - n * lo_freqs
            band_lo = np.where(e1 >= 0, e1, np.where(e2 <= 0, -e2, 0.0))
            band_hi = np.where(e1 >= 0, e2, np.where(e2 <= 0, -e1, np.maximum(-e1, e2)))
        blocked |= (band_lo <= xs + w) & (band_hi >= xs - w)

    regions: list[SpurFreeRegion] = []
    free = np.flatnonzero(~blocked)
    if free.size == 0:
        return regions
    run_starts = np.flatnonzero(np.diff(free) > 1)
    starts = np.concatenate(([0], run_starts + 1))
    ends = np.concatenate((run_starts, [free.size - 1]))
    for s, e in zip(starts, ends):
        regions.append(SpurFreeRegion(FrequencyBand(float(xs[free[s]]), float(xs[free[e]]))))
    return regions


# ---------------------------------------------------------------------------
# Image band
# ---------------------------------------------------------------------------

def image_band(rf_band: FrequencyBand, lo_hz: float, injection: Injection) -> FrequencyBand:
    """Reflection of the RF band about the LO: {2 lo - f}.  The image folds
    onto the same IF, so it must be filtered ahead of the mixer."""
    if injection is Injection.HIGH_SIDE:
        if lo_hz <= rf_band.high_hz:
            raise ValueError("high-side injection requires lo above the RF band")
    else:
        if lo_hz >= rf_band.low_hz:
            raise ValueError("low-side injection requires lo below the RF band")
    lo_edge = 2 * lo_hz - rf_band.high_hz
    hi_edge = 2 * lo_hz - rf_band.low_hz
    return FrequencyBand(min(lo_edge, hi_edge), max(lo_edge, hi_edge))


# ---------------------------------------------------------------------------
# Multi-stage frequency plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageChoice:
    """A planner config plus the engineer's chosen IF center for that stage."""
    config: PlanConfig
    if_center_hz: float


@dataclass(frozen=True)
class PermittedSpur:
    """Non-disqualifying product that still lands inside the chosen IF band;
    margin_db = suppression - floor."""
    m: int
    n: int
    sign: Sign
    suppression_db: float
    margin_db: float
    spur_class: SpurClass


@dataclass(frozen=True)
class PlannedStage:
    rf_band: FrequencyBand
    lo_hz: float
    injection: Injection
    if_band: FrequencyBand
    permitted: tuple[PermittedSpur, ...]


@dataclass(frozen=True)
class FrequencyPlan:
    stages: tuple[PlannedStage, ...]


def _stage_violations(choice: StageChoice) -> list[tuple[int, int, Sign]]:
    cfg = choice.config
    x = Fraction(choice.if_center_hz)
    center = Fraction(cfg.rf_center_hz)
    inj_sign = 1 if cfg.injection is Injection.HIGH_SIDE else -1
    search = (x - 1, x + 1)  # only membership at x is needed
    violators: list[tuple[int, int, Sign]] = []
    for m, n, sign in iter_orders(cfg.max_order, cfg.include_sum_products):
        if (m, n, sign) == (1, 1, Sign.DIFFERENCE):
            continue
        if not is_disqualifying(lookup_level(cfg.table, m, n), cfg.spur_floor_db):
            continue
        for lo, hi in _product_intervals(m, n, sign, center,
                                         Fraction(cfg.rf_bw_hz) / 2,
                                         Fraction(cfg.if_bw_hz) / 2,
                                         inj_sign, search):
            if lo <= x <= hi:
                violators.append((m, n, sign))
                break
    return violators


def make_frequency_plan(stage_choices: list[StageChoice]) -> FrequencyPlan:
    """Assemble a multi-stage plan from chosen IF centers.

    Every chosen center must sit in a spur-free region of its stage; stage
    k+1's RF band must equal stage k's IF band.  Each planned stage reports
    the permitted (non-disqualifying) products that land inside its IF band
    together with their suppression margins over the floor.
    """
    if not stage_choices:
        raise PlanError("at least one stage is required")
    planned: list[PlannedStage] = []
    for idx, choice in enumerate(stage_choices):
        cfg = choice.config
        x = choice.if_center_hz
        if idx > 0:
            prev = stage_choices[idx - 1]
            if abs(cfg.rf_center_hz - prev.if_center_hz) > 1.0 or \
               abs(cfg.rf_bw_hz - prev.config.if_bw_hz) > 1.0:
                raise PlanError(
                    f"stage {idx}: rf band {format_mhz(cfg.rf_center_hz)} MHz "
                    f"+- {format_mhz(cfg.rf_bw_hz / 2)} does not chain from the "
                    f"previous stage's IF band")
        violators = _stage_violations(choice)
        if violators:
            names = ", ".join(f"({m},{n},{s.value})" for m, n, s in violators)
            raise PlanViolationError(
                f"stage {idx}: IF center {format_mhz(x)} MHz collides with "
                f"disqualifying products {names}", violators)

        if cfg.injection is Injection.HIGH_SIDE:
            lo_hz = cfg.rf_center_hz + x
        else:
            if x >= cfg.rf_center_hz:
                raise PlanError(
                    f"stage {idx}: low-side IF center {format_mhz(x)} MHz "
                    f"requires a non-positive LO")
            lo_hz = cfg.rf_center_hz - x
        if_band = FrequencyBand(x - cfg.if_bw_hz / 2, x + cfg.if_bw_hz / 2)

        permitted: list[PermittedSpur] = []
        for m, n, sign in iter_orders(cfg.max_order, cfg.include_sum_products):
            if (m, n, sign) == (1, 1, Sign.DIFFERENCE):
                continue
            level = lookup_level(cfg.table, m, n)
            if is_disqualifying(level, cfg.spur_floor_db):
                continue
            band = spur_band(m, n, sign, cfg.rf_band, lo_hz)
            if band.overlaps(if_band):
                supp = level.worst_case_db
                permitted.append(PermittedSpur(
                    m=m, n=n, sign=sign, suppression_db=supp,
                    margin_db=supp - cfg.spur_floor_db,
                    spur_class=classify(level)))
        planned.append(PlannedStage(
            rf_band=cfg.rf_band, lo_hz=lo_hz, injection=cfg.injection,
            if_band=if_band, permitted=tuple(permitted)))
    return FrequencyPlan(stages=tuple(planned))


# ---------------------------------------------------------------------------
# Wire formats
# ---------------------------------------------------------------------------

def regions_to_dict(regions: list[SpurFreeRegion],
                    violations: list[tuple[int, int, Sign]] | None = None) -> dict:
    return {
        "regions": [
            {
                "low_hz": r.if_center_band.low_hz,
                "high_hz": r.if_center_band.high_hz,
                "binding": [[m, n, s.value] for m, n, s in r.binding_products],
            }
            for r in regions
        ],
        "violations": [[m, n, s.value] for m, n, s in (violations or [])],
    }


def plan_to_dict(plan: FrequencyPlan) -> dict:
    return {
        "stages": [
            {
                "rf_band": [st.rf_band.low_hz, st.rf_band.high_hz],
                "lo_hz": st.lo_hz,
                "injection": st.injection.value,
                "if_band": [st.if_band.low_hz, st.if_band.high_hz],
                "permitted": [
                    {
                        "m": p.m, "n": p.n, "sign": p.sign.value,
                        "suppression_db": p.suppression_db,
                        "margin_db": p.margin_db,
                        "class": p.spur_class.value,
                    }
                    for p in st.permitted
                ],
            }
            for st in plan.stages
        ],
    }
