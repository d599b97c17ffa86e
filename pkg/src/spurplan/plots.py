"""Matplotlib figure rendering for the CLI report paths (written to files
next to the delimited output; headless Agg backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .cascade import CascadeResult
from .planner import SpurFreeRegion
from .scan import ChartData
from .svg import CLASS_COLORS


def save_chart_figure(chart: ChartData, path: str,
                      if_band: tuple[float, float] | None = None) -> None:
    unit = 1.0 if chart.normalized else 1e6
    fig, ax = plt.subplots(figsize=(9, 6))
    seen = set()
    for line in chart.lines:
        xs = [x / unit for x, _ in line.vertices]
        ys = [y / unit for _, y in line.vertices]
        name = line.spur_class.value
        ax.plot(xs, ys, color=CLASS_COLORS[name],
                lw=2.2 if name == "Desired" else 1.2,
                label=name if name not in seen else None)
        seen.add(name)
    if if_band is not None:
        ax.axhspan(if_band[0] / unit, if_band[1] / unit, color="#2ca02c", alpha=0.15)
    if chart.normalized:
        ax.set_xlabel("f_in / f_LO")
        ax.set_ylabel("f_out / f_LO")
    else:
        ax.set_xlabel("mixer input (MHz)")
        ax.set_ylabel("mixer output (MHz)")
    ax.legend(loc="upper right", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_regions_figure(regions: list[SpurFreeRegion], search_lo_hz: float,
                        search_hi_hz: float, path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 2.8))
    ax.axhspan(0, 1, xmin=0, xmax=1, color="#d62728", alpha=0.25)
    for region in regions:
        lo = region.if_center_band.low_hz / 1e6
        hi = region.if_center_band.high_hz / 1e6
        ax.axvspan(lo, hi, color="#2ca02c", alpha=0.9)
    ax.set_xlim(search_lo_hz / 1e6, search_hi_hz / 1e6)
    ax.set_yticks([])
    ax.set_xlabel("candidate IF center (MHz)")
    ax.set_title("spur-free IF-center regions (green)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_response_figure(freqs_hz: np.ndarray, s21_db: np.ndarray, path: str,
                         f0_hz: float, bw_hz: float) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(freqs_hz / 1e6, s21_db, color="#1f77b4")
    ax.axvline(f0_hz / 1e6, color="#999999", ls=":")
    ax.axvspan((f0_hz - bw_hz / 2) / 1e6, (f0_hz + bw_hz / 2) / 1e6,
               color="#2ca02c", alpha=0.12)
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("|S21| (dB)")
    ax.set_ylim(max(min(s21_db) - 5, -120), 2)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_cascade_figure(result: CascadeResult, path: str) -> None:
    names = [row.stage_name for row in result.per_stage_running]
    gains = [row.gain_db for row in result.per_stage_running]
    nfs = [row.nf_db for row in result.per_stage_running]
    x = np.arange(len(names))
    fig, ax1 = plt.subplots(figsize=(9, 5))
    ax1.step(x, gains, where="mid", color="#1f77b4", label="running gain (dB)")
    ax1.set_ylabel("gain (dB)", color="#1f77b4")
    ax2 = ax1.twinx()
    ax2.step(x, nfs, where="mid", color="#d62728", label="running NF (dB)")
    ax2.set_ylabel("NF (dB)", color="#d62728")
    ax1.set_xticks(x)
    ax1.set_xticklabels(names, rotation=30, ha="right", fontsize=9)
    ax1.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
