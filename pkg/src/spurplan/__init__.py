"""spurplan: frequency planning and RF-chain budgets for superheterodyne
receivers driven by mixer spur tables."""

from .core import (
    ChainStage,
    FrequencyBand,
    Injection,
    LevelKind,
    PlanConfig,
    Sign,
    SpurLevel,
    SpurTable,
    StageKind,
    lookup_level,
    parse_chain,
    parse_frequency,
    parse_spur_table,
    serialize_spur_table,
)
from .scan import (
    ChartData,
    SpurClass,
    SpurProduct,
    build_chart,
    classify,
    enumerate_spurs,
    identify_coefficients,
    spur_band,
)
from .planner import (
    FrequencyPlan,
    SpurFreeRegion,
    StageChoice,
    find_spur_free_regions,
    forbidden_intervals,
    image_band,
    make_frequency_plan,
    sweep_oracle,
)
from .cascade import (
    CascadeResult,
    SensitivityInputs,
    cascade,
    dynamic_range,
    mds,
    retune_vga,
)
from .filtersynth import (
    CoupledSection,
    LcLadder,
    PrototypeCoeffs,
    chebyshev_prototype,
    even_odd,
    ideal_bandpass_s21,
    j_inverters,
    lc_bandpass,
    snap_to_series,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
