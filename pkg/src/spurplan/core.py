"""Data model and parsers: mixer spur tables, RF chain specs, plan configs.

Everything here is immutable after parsing and safe to share across threads.
The internal frequency unit is hertz; input files accept unit suffixes
(Hz/kHz/MHz/GHz).
"""
from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass, field

import yaml

logger = logging.getLogger(__name__)

_FREQ_RE = re.compile(r"^\s*([+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*(hz|khz|mhz|ghz)?\s*$", re.IGNORECASE)
_FREQ_SCALE = {None: 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}


def parse_frequency(value: str | int | float) -> float:
    """Parse a frequency given in Hz or with a kHz/MHz/GHz suffix into Hz."""
    if isinstance(value, (int, float)):
        return float(value)
    m = _FREQ_RE.match(value)
    if m is None:
        raise ValueError(f"cannot parse frequency {value!r}")
    unit = m.group(2).lower() if m.group(2) else None
    return float(m.group(1)) * _FREQ_SCALE[unit]


def format_mhz(hz: float) -> str:
    """Fixed human formatting: MHz with three decimals."""
    return f"{hz / 1e6:.3f}"


class SpurTableError(ValueError):
    """Malformed spur-table file."""


class ChainError(ValueError):
    """Malformed chain file."""


# ---------------------------------------------------------------------------
# Frequency bands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyBand:
    low_hz: float
    high_hz: float

    def __post_init__(self) -> None:
        if self.low_hz < 0:
            raise ValueError(f"band low must be >= 0, got {self.low_hz}")
        if self.low_hz > self.high_hz:
            raise ValueError(f"band low {self.low_hz} exceeds high {self.high_hz}")

    @property
    def width_hz(self) -> float:
        return self.high_hz - self.low_hz

    @property
    def center_hz(self) -> float:
        return 0.5 * (self.low_hz + self.high_hz)

    def contains(self, f_hz: float) -> bool:
        return self.low_hz <= f_hz <= self.high_hz

    def overlaps(self, other: "FrequencyBand") -> bool:
        # Closed-interval overlap: touching endpoints count.
        return self.low_hz <= other.high_hz and self.high_hz >= other.low_hz


# ---------------------------------------------------------------------------
# Spur levels and spur tables
# ---------------------------------------------------------------------------

class LevelKind(enum.Enum):
    DESIRED = "desired"
    EXACT = "exact"
    AT_LEAST = "at_least"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SpurLevel:
    """Suppression of one mixer product, in dB below the desired product.

    Positive values mean weaker than the desired output.  ``AT_LEAST`` is a
    datasheet lower bound (true suppression >= suppression_db); ``UNKNOWN``
    is a blank cell and is treated as 0 dB (as strong as the desired signal)
    by every consumer, so an unspecified spur can never be assumed harmless.
    ``extrapolated`` marks levels synthesized for lookups beyond the grid.
    """
    kind: LevelKind
    suppression_db: float | None = None
    extrapolated: bool = False

    @staticmethod
    def desired() -> "SpurLevel":
        return SpurLevel(LevelKind.DESIRED)

    @staticmethod
    def exact(db: float) -> "SpurLevel":
        return SpurLevel(LevelKind.EXACT, float(db))

    @staticmethod
    def at_least(db: float, extrapolated: bool = False) -> "SpurLevel":
        return SpurLevel(LevelKind.AT_LEAST, float(db), extrapolated)

    @staticmethod
    def unknown() -> "SpurLevel":
        return SpurLevel(LevelKind.UNKNOWN)

    @property
    def worst_case_db(self) -> float:
        """Pessimistic suppression: AtLeast(x) counts as exactly x, blanks
        and desired-strength entries as 0 dB."""
        if self.kind in (LevelKind.UNKNOWN, LevelKind.DESIRED):
            return 0.0
        assert self.suppression_db is not None
        return self.suppression_db


@dataclass(frozen=True)
class TestConditions:
    rf_freq_hz: float
    rf_power_dbm: float
    lo_freq_hz: float
    lo_power_dbm: float
    if_freq_hz: float
    if_power_dbm: float


@dataclass(frozen=True)
class SpurTable:
    """Harmonic grid of suppression levels for one mixer.

    ``cells[m][n]`` is the product with RF harmonic m and LO harmonic n.
    Cell (1, 1) is always the desired product.
    """
    mixer_id: str
    max_rf_order: int
    max_lo_order: int
    cells: tuple[tuple[SpurLevel, ...], ...]
    test_conditions: TestConditions

    def __post_init__(self) -> None:
        if self.max_rf_order < 1 or self.max_lo_order < 1:
            raise SpurTableError("harmonic orders must be >= 1")
        if len(self.cells) != self.max_rf_order + 1:
            raise SpurTableError("grid row count does not match max_rf_order")
        for m, row in enumerate(self.cells):
            if len(row) != self.max_lo_order + 1:
                raise SpurTableError(f"grid row {m} length does not match max_lo_order")
        if self.cells[1][1].kind is not LevelKind.DESIRED:
            raise SpurTableError("cell (1, 1) must be the desired product (+0)")


def lookup_level(table: SpurTable, m: int, n: int,
                 extrapolation_floor_db: float = 100.0) -> SpurLevel:
    """Level of product (m, n).  Lookups beyond the declared grid return
    AtLeast(extrapolation_floor_db) flagged as extrapolated, so high-order
    products never disqualify a plan silently."""
    if m < 0 or n < 0:
        raise ValueError(f"harmonic orders must be >= 0, got ({m}, {n})")
    if m > table.max_rf_order or n > table.max_lo_order:
        return SpurLevel.at_least(extrapolation_floor_db, extrapolated=True)
    return table.cells[m][n]


def _parse_cell_token(token: str, m: int, n: int) -> SpurLevel:
    if token == "-":
        return SpurLevel.unknown()
    if token.startswith(">"):
        try:
            return SpurLevel.at_least(float(token[1:]))
        except ValueError:
            raise SpurTableError(f"malformed cell token {token!r} at row m={m}, column n={n}") from None
    if token == "+0" and (m, n) == (1, 1):
        return SpurLevel.desired()
    try:
        return SpurLevel.exact(float(token))
    except ValueError:
        raise SpurTableError(f"malformed cell token {token!r} at row m={m}, column n={n}") from None


def _parse_freq_power(value: str, key: str) -> tuple[float, float]:
    parts = value.split()
    if len(parts) < 2:
        raise SpurTableError(f"{key} must be '<freq> <dBm>', got {value!r}")
    try:
        power = float(parts[-1])
    except ValueError:
        raise SpurTableError(f"{key}: bad power level {parts[-1]!r}") from None
    freq = parse_frequency(" ".join(parts[:-1]))
    return freq, power


def parse_spur_table(text: str) -> SpurTable:
    """Parse the spur-table text format.

    Header lines are ``key = value`` (mixer, max_rf_order, max_lo_order and
    the three ``test.*`` condition lines); the grid follows, one line per RF
    order m: ``m: c0 c1 ...`` with cell tokens ``-`` | ``>N`` | ``+N`` | ``N``.
    """
    header: dict[str, str] = {}
    rows: dict[int, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line and not line.split(":", 1)[0].strip().isdigit():
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
            continue
        if ":" not in line:
            raise SpurTableError(f"line {lineno}: expected 'm: cells...' or 'key = value'")
        mtok, _, cells = line.partition(":")
        try:
            m = int(mtok.strip())
        except ValueError:
            raise SpurTableError(f"line {lineno}: bad RF order {mtok.strip()!r}") from None
        if m in rows:
            raise SpurTableError(f"line {lineno}: duplicate grid row m={m}")
        rows[m] = cells.split()

    for key in ("mixer", "max_rf_order", "max_lo_order"):
        if key not in header:
            raise SpurTableError(f"missing header line '{key} = ...'")
    for key in ("test.rf", "test.lo", "test.if"):
        if key not in header:
            raise SpurTableError(f"missing test-conditions header '{key} = ...'")

    try:
        max_rf = int(header["max_rf_order"])
        max_lo = int(header["max_lo_order"])
    except ValueError:
        raise SpurTableError("max_rf_order / max_lo_order must be integers") from None

    rf_freq, rf_pow = _parse_freq_power(header["test.rf"], "test.rf")
    lo_freq, lo_pow = _parse_freq_power(header["test.lo"], "test.lo")
    if_freq, if_pow = _parse_freq_power(header["test.if"], "test.if")

    grid: list[tuple[SpurLevel, ...]] = []
    for m in range(max_rf + 1):
        if m not in rows:
            raise SpurTableError(f"missing grid row m={m}")
        tokens = rows[m]
        if len(tokens) != max_lo + 1:
            raise SpurTableError(
                f"grid row m={m} has {len(tokens)} cells, expected {max_lo + 1}")
        grid.append(tuple(_parse_cell_token(tok, m, n) for n, tok in enumerate(tokens)))
    extra = sorted(set(rows) - set(range(max_rf + 1)))
    if extra:
        raise SpurTableError(f"grid rows beyond max_rf_order: {extra}")

    return SpurTable(
        mixer_id=header["mixer"],
        max_rf_order=max_rf,
        max_lo_order=max_lo,
        cells=tuple(grid),
        test_conditions=TestConditions(rf_freq, rf_pow, lo_freq, lo_pow, if_freq, if_pow),
    )


def _cell_token(level: SpurLevel) -> str:
    if level.kind is LevelKind.UNKNOWN:
        return "-"
    if level.kind is LevelKind.DESIRED:
        return "+0"
    value = level.suppression_db
    assert value is not None
    text = f"{value:g}"
    return f">{text}" if level.kind is LevelKind.AT_LEAST else text


def serialize_spur_table(table: SpurTable) -> str:
    """Canonical text form; parse(serialize(t)) reproduces grid and
    test conditions exactly."""
    tc = table.test_conditions
    lines = [
        f"mixer = {table.mixer_id}",
        f"max_rf_order = {table.max_rf_order}",
        f"max_lo_order = {table.max_lo_order}",
        f"test.rf = {tc.rf_freq_hz:g} {tc.rf_power_dbm:g}",
        f"test.lo = {tc.lo_freq_hz:g} {tc.lo_power_dbm:g}",
        f"test.if = {tc.if_freq_hz:g} {tc.if_power_dbm:g}",
        "",
    ]
    for m, row in enumerate(table.cells):
        lines.append(f"{m}: " + " ".join(_cell_token(level) for level in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Chain stages
# ---------------------------------------------------------------------------

class StageKind(enum.Enum):
    LNA = "LNA"
    AMPLIFIER = "Amplifier"
    VGA = "VGA"
    MIXER = "Mixer"
    FILTER = "Filter"


@dataclass(frozen=True)
class ChainStage:
    """One component of the signal chain.

    Lossy stages carry negative gain (mixer conversion loss included); a
    passive stage with no stated noise figure gets nf_db = -gain_db.
    """
    name: str
    kind: StageKind
    gain_db: float
    nf_db: float
    band: FrequencyBand
    oip3_dbm: float | None = None
    op1db_dbm: float | None = None
    gain_range_db: tuple[float, float] | None = None


def _stage_from_mapping(data: dict, index: int) -> ChainStage:
    where = f"stage {index}"
    if not isinstance(data, dict):
        raise ChainError(f"{where}: expected a mapping")
    name = str(data.get("name", f"stage{index}"))
    where = f"stage {index} ({name})"

    kind_raw = data.get("kind")
    if kind_raw is None:
        raise ChainError(f"{where}: missing kind")
    try:
        kind = StageKind(str(kind_raw))
    except ValueError:
        valid = ", ".join(k.value for k in StageKind)
        raise ChainError(f"{where}: unknown stage kind {kind_raw!r} (expected one of {valid})") from None

    if "gain_db" not in data:
        raise ChainError(f"{where}: missing gain_db")
    gain_db = float(data["gain_db"])

    nf_db = data.get("nf_db")
    if nf_db is None:
        if gain_db < 0:
            nf_db = -gain_db  # passive rule: loss equals noise figure
        else:
            raise ChainError(f"{where}: missing nf_db for active stage")
    nf_db = float(nf_db)
    if nf_db < 0:
        raise ChainError(f"{where}: nf_db must be >= 0")

    band_raw = data.get("band")
    if not isinstance(band_raw, (list, tuple)) or len(band_raw) != 2:
        raise ChainError(f"{where}: band must be [low, high]")
    band = FrequencyBand(parse_frequency(band_raw[0]), parse_frequency(band_raw[1]))

    oip3 = data.get("oip3_dbm")
    op1 = data.get("op1db_dbm")
    grange = data.get("gain_range_db")
    if grange is not None:
        if not isinstance(grange, (list, tuple)) or len(grange) != 2:
            raise ChainError(f"{where}: gain_range_db must be [min, max]")
        grange = (float(grange[0]), float(grange[1]))

    return ChainStage(
        name=name,
        kind=kind,
        gain_db=gain_db,
        nf_db=nf_db,
        band=band,
        oip3_dbm=None if oip3 is None else float(oip3),
        op1db_dbm=None if op1 is None else float(op1),
        gain_range_db=grange,
    )


def chain_from_obj(data: dict | list) -> list[ChainStage]:
    """Build a chain from an already-deserialized mapping (YAML or JSON)."""
    if isinstance(data, dict):
        stages_raw = data.get("stages")
        if stages_raw is None:
            raise ChainError("chain document must contain a 'stages' list")
    else:
        stages_raw = data
    if not isinstance(stages_raw, list) or not stages_raw:
        raise ChainError("'stages' must be a non-empty list")

    stages = [_stage_from_mapping(s, i) for i, s in enumerate(stages_raw)]

    for prev, cur in zip(stages, stages[1:]):
        if prev.kind is StageKind.MIXER or cur.kind is StageKind.MIXER:
            continue  # frequency translation happens across mixers
        if not prev.band.overlaps(cur.band):
            logger.warning(
                "chain stages %r and %r have non-overlapping bands "
                "(%s..%s MHz vs %s..%s MHz)",
                prev.name, cur.name,
                format_mhz(prev.band.low_hz), format_mhz(prev.band.high_hz),
                format_mhz(cur.band.low_hz), format_mhz(cur.band.high_hz))
    return stages


def parse_chain(text: str) -> list[ChainStage]:
    """Parse a YAML chain file into stages in signal order."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ChainError(f"invalid chain file: {exc}") from exc
    if data is None:
        raise ChainError("empty chain file")
    return chain_from_obj(data)


# ---------------------------------------------------------------------------
# Plan configuration
# ---------------------------------------------------------------------------

class Injection(enum.Enum):
    HIGH_SIDE = "high"
    LOW_SIDE = "low"


class Sign(enum.Enum):
    DIFFERENCE = "difference"
    SUM = "sum"


@dataclass(frozen=True)
class PlanConfig:
    """Inputs for one mixer stage's frequency-plan search."""
    table: SpurTable
    rf_center_hz: float
    rf_bw_hz: float
    if_bw_hz: float
    injection: Injection = Injection.HIGH_SIDE
    spur_floor_db: float = 70.0
    max_order: int = 10
    include_sum_products: bool = True

    def __post_init__(self) -> None:
        if self.rf_bw_hz <= 0:
            raise ValueError("rf_bw_hz must be > 0")
        if self.if_bw_hz <= 0:
            raise ValueError("if_bw_hz must be > 0")
        if self.spur_floor_db < 0:
            raise ValueError("spur_floor_db must be >= 0")
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")

    @property
    def rf_band(self) -> FrequencyBand:
        half = 0.5 * self.rf_bw_hz
        return FrequencyBand(self.rf_center_hz - half, self.rf_center_hz + half)
