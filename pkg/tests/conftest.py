from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from spurplan.core import (
    Injection,
    PlanConfig,
    SpurLevel,
    SpurTable,
    TestConditions,
    parse_chain,
    parse_spur_table,
)

ROOT = Path(__file__).resolve().parent.parent
TABLES = ROOT / "tables"
CHAINS = ROOT / "chains"
PLANS = ROOT / "plans"


@pytest.fixture(scope="session")
def mca_table() -> SpurTable:
    return parse_spur_table((TABLES / "mca1-60.spur").read_text())


@pytest.fixture(scope="session")
def ade_table() -> SpurTable:
    return parse_spur_table((TABLES / "ade-mh35.spur").read_text())


@pytest.fixture(scope="session")
def sband_stages():
    return parse_chain((CHAINS / "sband.chain").read_text())


DUMMY_CONDITIONS = TestConditions(
    rf_freq_hz=1e9, rf_power_dbm=-10.0,
    lo_freq_hz=1.03e9, lo_power_dbm=7.0,
    if_freq_hz=30e6, if_power_dbm=-17.0,
)


def table_from_levels(levels: dict[tuple[int, int], SpurLevel], max_order: int,
                      mixer_id: str = "synthetic") -> SpurTable:
    """Build a table programmatically; unlisted cells default to AtLeast(100)
    so they never disqualify anything."""
    rows = []
    for m in range(max_order + 1):
        row = []
        for n in range(max_order + 1):
            if (m, n) == (1, 1):
                row.append(SpurLevel.desired())
            else:
                row.append(levels.get((m, n), SpurLevel.at_least(100.0)))
        rows.append(tuple(row))
    return SpurTable(mixer_id, max_order, max_order, tuple(rows), DUMMY_CONDITIONS)


def random_table(rng: np.random.Generator) -> SpurTable:
    """Random Exact levels in [0, 100] dB on a grid of order 2..5."""
    order = int(rng.integers(2, 6))
    rows = []
    for m in range(order + 1):
        row = []
        for n in range(order + 1):
            if (m, n) == (1, 1):
                row.append(SpurLevel.desired())
            else:
                row.append(SpurLevel.exact(round(float(rng.uniform(0.0, 100.0)), 1)))
        rows.append(tuple(row))
    return SpurTable("synthetic", order, order, tuple(rows), DUMMY_CONDITIONS)


def random_config(rng: np.random.Generator, table: SpurTable,
                  floor_db: float | None = None) -> PlanConfig:
    """Random plan geometry on an integer-hertz grid (keeps the float sweep
    arithmetic exact, so oracle boundaries land deterministically)."""
    khz = 1e3
    rf_center = float(rng.integers(500_000, 2_500_000)) * khz
    rf_bw = float(rng.integers(20_000, 400_000)) * khz
    if_bw = float(rng.integers(1_000, 40_000)) * khz
    return PlanConfig(
        table=table,
        rf_center_hz=rf_center,
        rf_bw_hz=rf_bw,
        if_bw_hz=if_bw,
        injection=Injection.HIGH_SIDE if rng.random() < 0.5 else Injection.LOW_SIDE,
        spur_floor_db=floor_db if floor_db is not None else round(float(rng.uniform(20.0, 90.0)), 1),
        max_order=table.max_rf_order,
        include_sum_products=bool(rng.random() < 0.5),
    )
