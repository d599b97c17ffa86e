"""Chain budgets: cascaded gain, noise figure, OIP3, OP1dB, MDS, dynamic range.

Noise cascades by the Friis formula evaluated entirely in linear power
units; third-order intercepts cascade by the input-referred reciprocal sum.
P1dB has no exact cascade rule, so the same reciprocal form is applied to
the input-referred compression points and the result is labeled approximate
in reports.  Pure functions throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import ChainStage, StageKind

#: thermal noise floor at 290 K, dBm per Hz of bandwidth
THERMAL_FLOOR_DBM_HZ = -174.0


@dataclass(frozen=True)
class RunningTotals:
    """Cascade totals after the named stage."""
    stage_name: str
    gain_db: float
    nf_db: float
    oip3_dbm: float | None
    op1db_dbm: float | None


@dataclass(frozen=True)
class CascadeResult:
    gain_db: float
    nf_db: float
    oip3_dbm: float | None
    iip3_dbm: float | None
    op1db_dbm: float | None
    ip1db_dbm: float | None
    per_stage_running: tuple[RunningTotals, ...]
    #: stages without an OIP3 spec, treated as perfectly linear
    no_oip3_stages: tuple[str, ...]
    #: stages without an OP1dB spec, excluded from the compression estimate
    no_op1db_stages: tuple[str, ...]


def _db(linear: float) -> float:
    return 10.0 * math.log10(linear)


def _lin(db: float) -> float:
    return 10.0 ** (db / 10.0)


def cascade(stages: list[ChainStage]) -> CascadeResult:
    """Cascade the chain in signal order.

    Gain is the plain dB sum.  Noise figure: F = F1 + (F2-1)/G1 + ... in
    linear units.  IIP3: 1/ip3 = sum(G_preceding / ip3_k), stages with no
    OIP3 skipped and reported; the identical reciprocal form estimates the
    input-referred P1dB.  Output-referred numbers follow from
    oip3 = iip3 + G and op1 = ip1 + (G - 1).
    """
    if not stages:
        raise ValueError("cascade of an empty chain")
    for stage in stages:
        for label, value in (("gain_db", stage.gain_db), ("nf_db", stage.nf_db)):
            if not math.isfinite(value):
                raise ValueError(f"stage {stage.name!r}: non-finite {label}")

    gain_db = 0.0
    g_lin = 1.0
    f_lin = 0.0
    inv_iip3 = 0.0
    inv_ip1 = 0.0
    any_ip3 = False
    any_p1 = False
    no_ip3: list[str] = []
    no_p1: list[str] = []
    running: list[RunningTotals] = []

    for k, stage in enumerate(stages):
        f_stage = _lin(stage.nf_db)
        if k == 0:
            f_lin = f_stage
        else:
            f_lin += (f_stage - 1.0) / g_lin

        if stage.oip3_dbm is None:
            no_ip3.append(stage.name)
        else:
            any_ip3 = True
            inv_iip3 += g_lin / _lin(stage.oip3_dbm - stage.gain_db)
        if stage.op1db_dbm is None:
            no_p1.append(stage.name)
        else:
            any_p1 = True
            inv_ip1 += g_lin / _lin(stage.op1db_dbm - (stage.gain_db - 1.0))

        gain_db += stage.gain_db
        g_lin *= _lin(stage.gain_db)

        oip3 = _db(1.0 / inv_iip3) + gain_db if any_ip3 else None
        op1 = _db(1.0 / inv_ip1) + (gain_db - 1.0) if any_p1 else None
        running.append(RunningTotals(
            stage_name=stage.name,
            gain_db=gain_db,
            nf_db=_db(f_lin),
            oip3_dbm=oip3,
            op1db_dbm=op1,
        ))

    iip3 = _db(1.0 / inv_iip3) if any_ip3 else None
    ip1 = _db(1.0 / inv_ip1) if any_p1 else None
    return CascadeResult(
        gain_db=gain_db,
        nf_db=_db(f_lin),
        oip3_dbm=None if iip3 is None else iip3 + gain_db,
        iip3_dbm=iip3,
        op1db_dbm=None if ip1 is None else ip1 + (gain_db - 1.0),
        ip1db_dbm=ip1,
        per_stage_running=tuple(running),
        no_oip3_stages=tuple(no_ip3),
        no_op1db_stages=tuple(no_p1),
    )


@dataclass(frozen=True)
class SensitivityInputs:
    nf_db: float
    bandwidth_hz: float
    snr_min_db: float = 0.0

    def __post_init__(self) -> None:
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be > 0")


def mds(inputs: SensitivityInputs) -> float:
    """Minimum detectable signal: -174 dBm + NF + 10 log10(BW) + SNR_min."""
    return (THERMAL_FLOOR_DBM_HZ + inputs.nf_db
            + 10.0 * math.log10(inputs.bandwidth_hz) + inputs.snr_min_db)


def dynamic_range(op1_dbm: float, gain_db: float, mds_dbm: float) -> float:
    """IP1 - MDS with IP1 = OP1 - (G - 1); the 1 dB term is the compression
    offset between input- and output-referred P1dB."""
    return op1_dbm - (gain_db - 1.0) - mds_dbm


def retune_vga(stages: list[ChainStage], target_gain_db: float
               ) -> tuple[list[ChainStage], CascadeResult]:
    """Shift the single VGA stage so the chain total hits target_gain_db.

    With the VGA as the final stage the Friis sum ahead of it is untouched,
    so the chain NF is unchanged.
    """
    vgas = [i for i, s in enumerate(stages) if s.kind is StageKind.VGA]
    if not vgas:
        raise ValueError("chain has no VGA stage to retune")
    if len(vgas) > 1:
        names = ", ".join(stages[i].name for i in vgas)
        raise ValueError(f"chain has multiple VGA stages ({names}); retune is ambiguous")
    idx = vgas[0]
    current_total = sum(s.gain_db for s in stages)
    new_gain = stages[idx].gain_db + (target_gain_db - current_total)
    grange = stages[idx].gain_range_db
    if grange is not None and not (grange[0] <= new_gain <= grange[1]):
        raise ValueError(
            f"VGA gain {new_gain:.2f} dB outside its declared range "
            f"[{grange[0]:g}, {grange[1]:g}] dB")
    adjusted = list(stages)
    adjusted[idx] = replace(stages[idx], gain_db=new_gain)
    return adjusted, cascade(adjusted)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def cascade_result_to_dict(result: CascadeResult) -> dict:
    return {
        "gain_db": result.gain_db,
        "nf_db": result.nf_db,
        "oip3_dbm": result.oip3_dbm,
        "iip3_dbm": result.iip3_dbm,
        "op1db_dbm": result.op1db_dbm,
        "ip1db_dbm": result.ip1db_dbm,
        "per_stage_running": [
            {
                "stage_name": row.stage_name,
                "gain_db": row.gain_db,
                "nf_db": row.nf_db,
                "oip3_dbm": row.oip3_dbm,
                "op1db_dbm": row.op1db_dbm,
            }
            for row in result.per_stage_running
        ],
        "no_oip3_stages": list(result.no_oip3_stages),
        "no_op1db_stages": list(result.no_op1db_stages),
    }


def narrowest_bandwidth_hz(stages: list[ChainStage]) -> float:
    """Chain bandwidth for sensitivity: the narrowest stage band."""
    return min(s.band.width_hz for s in stages)


def cascade_report(result: CascadeResult, mds_dbm: float | None = None,
                   dynamic_range_db: float | None = None) -> dict:
    """Report fields named after the link-budget convention."""
    report = {
        "SystemPGain_dB": result.gain_db,
        "SystemNF_dB": result.nf_db,
        "SystemOutP1dB_dBm": result.op1db_dbm,
        "SystemInP1dB_dBm": result.ip1db_dbm,
        "SystemOutTOI_dBm": result.oip3_dbm,
        "SystemInTOI_dBm": result.iip3_dbm,
        "MDS_dBm": mds_dbm,
        "DynamicRange_dB": dynamic_range_db,
        "P1dBApproximate": True,
        "LinearOnlyStages": list(result.no_oip3_stages),
    }
    return report


def format_cascade_text(result: CascadeResult, mds_dbm: float | None = None,
                        dynamic_range_db: float | None = None) -> str:
    """Aligned two-column text report plus the per-stage running table."""
    report = cascade_report(result, mds_dbm, dynamic_range_db)
    lines = []
    for key in ("SystemPGain_dB", "SystemNF_dB", "SystemOutP1dB_dBm",
                "SystemInP1dB_dBm", "SystemOutTOI_dBm", "SystemInTOI_dBm",
                "MDS_dBm", "DynamicRange_dB"):
        value = report[key]
        text = "n/a" if value is None else f"{value:.2f}"
        lines.append(f"{key:<22}{text}")
    if result.no_oip3_stages:
        lines.append("linear-only stages    " + ", ".join(result.no_oip3_stages))
    lines.append("note                  P1dB cascade uses the reciprocal-sum "
                 "approximation")
    lines.append("")
    lines.append(f"{'stage':<16}{'gain_dB':>10}{'NF_dB':>10}{'OIP3_dBm':>10}{'OP1dB_dBm':>11}")
    for row in result.per_stage_running:
        oip3 = "n/a" if row.oip3_dbm is None else f"{row.oip3_dbm:.2f}"
        op1 = "n/a" if row.op1db_dbm is None else f"{row.op1db_dbm:.2f}"
        lines.append(f"{row.stage_name:<16}{row.gain_db:>10.2f}{row.nf_db:>10.2f}"
                     f"{oip3:>10}{op1:>11}")
    return "\n".join(lines) + "\n"
