"""Chebyshev bandpass synthesis: prototype g-values, J-inverters, coupled
even/odd-mode impedances, the ideal equiripple response, and the lumped LC
realization with preferred-value snapping.

Physical microstrip dimensioning is out of scope; coupled-line synthesis
stops at one (Z0e, Z0o) pair per quarter-wave section.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LN10 = math.log(10.0)


@dataclass(frozen=True)
class PrototypeCoeffs:
    """Equiripple low-pass prototype: g[0]..g[n+1] with g[0] = 1."""
    order: int
    ripple_db: float
    g: tuple[float, ...]


def chebyshev_prototype(n: int, ripple_db: float) -> PrototypeCoeffs:
    """Closed-form Chebyshev prototype recursion (matches the published
    design tables; for odd n the ladder is symmetric and g[n+1] = 1)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if ripple_db <= 0:
        raise ValueError("ripple_db must be > 0")
    # beta = ln coth(ripple / (40 log10 e)); 17.37 in the usual shorthand
    beta = math.log(1.0 / math.tanh(ripple_db * LN10 / 40.0))
    gamma = math.sinh(beta / (2.0 * n))
    a = [math.sin((2 * k - 1) * math.pi / (2 * n)) for k in range(1, n + 1)]
    b = [gamma ** 2 + math.sin(k * math.pi / n) ** 2 for k in range(1, n + 1)]

    g = [1.0, 2.0 * a[0] / gamma]
    for k in range(2, n + 1):
        g.append(4.0 * a[k - 2] * a[k - 1] / (b[k - 2] * g[k - 1]))
    if n % 2 == 1:
        g.append(1.0)
    else:
        g.append(1.0 / math.tanh(beta / 4.0) ** 2)
    return PrototypeCoeffs(order=n, ripple_db=ripple_db, g=tuple(g))


def j_inverters(proto: PrototypeCoeffs, delta: float) -> list[float]:
    """Dimensionless Z0*J products for the n+1 coupled sections of a
    bandpass filter with fractional bandwidth delta = BW / f_center."""
    if not 0 < delta < 1:
        raise ValueError("fractional bandwidth must be in (0, 1)")
    g = proto.g
    n = proto.order
    z0j = [math.sqrt(math.pi * delta / (2.0 * g[1]))]
    for k in range(2, n + 1):
        z0j.append(math.pi * delta / (2.0 * math.sqrt(g[k - 1] * g[k])))
    z0j.append(math.sqrt(math.pi * delta / (2.0 * g[n] * g[n + 1])))
    return z0j


@dataclass(frozen=True)
class CoupledSection:
    """Even/odd-mode impedances of one quarter-wave coupled-line section.
    z0e equals z0o only in the uncoupled z0j = 0 limit."""
    index: int
    z0j: float
    z0e_ohm: float
    z0o_ohm: float

    def __post_init__(self) -> None:
        if self.z0o_ohm <= 0 or self.z0e_ohm < self.z0o_ohm:
            raise ValueError("coupled section requires z0e >= z0o > 0")


def even_odd(z0_ohm: float, z0j_list: list[float]) -> list[CoupledSection]:
    """Z0e = Z0 (1 + JZ0 + (JZ0)^2), Z0o = Z0 (1 - JZ0 + (JZ0)^2)."""
    if z0_ohm <= 0:
        raise ValueError("z0_ohm must be > 0")
    sections = []
    for i, jz in enumerate(z0j_list, start=1):
        if not 0 <= jz < 1:
            raise ValueError(f"section {i}: Z0*J must be in [0, 1), got {jz}")
        sections.append(CoupledSection(
            index=i,
            z0j=jz,
            z0e_ohm=z0_ohm * (1.0 + jz + jz * jz),
            z0o_ohm=z0_ohm * (1.0 - jz + jz * jz),
        ))
    return sections


# ---------------------------------------------------------------------------
# Ideal equiripple bandpass response
# ---------------------------------------------------------------------------

def _chebyshev_attenuation_db(n: int, eps_sq: float, x: float) -> float:
    """-10 log10(1 + eps^2 T_n(x)^2), stable for large |x|."""
    ax = abs(x)
    if ax <= 1.0:
        t = math.cos(n * math.acos(ax))
        return -10.0 * math.log10(1.0 + eps_sq * t * t)
    acosh = math.log(ax + math.sqrt(ax * ax - 1.0))
    # ln|T_n| = n*acosh + ln((1 + e^(-2 n acosh)) / 2)
    ln_t = n * acosh + math.log1p(math.exp(-2.0 * n * acosh)) - math.log(2.0)
    if 2.0 * ln_t < 700.0:
        return -10.0 * math.log1p(eps_sq * math.exp(2.0 * ln_t)) / LN10
    return -10.0 * (math.log(eps_sq) + 2.0 * ln_t) / LN10


def ideal_bandpass_s21(n: int, ripple_db: float, f0_hz: float, bw_hz: float,
                       f_hz: float) -> float:
    """|S21| in dB of the ideal Chebyshev bandpass via the low-pass map
    w' = (1/delta)(f/f0 - f0/f) with delta = bw/f0.

    The response is geometrically symmetric about f0: the equiripple edges
    (w' = +-1) sit at sqrt((bw/2)^2 + f0^2) -/+ bw/2, a hair outside/inside
    f0 -/+ bw/2 for narrow fractional bandwidths.
    """
    if f_hz <= 0:
        raise ValueError("f_hz must be > 0")
    if not 0 < bw_hz < f0_hz:
        raise ValueError("need 0 < bw < f0")
    delta = bw_hz / f0_hz
    x = (f_hz / f0_hz - f0_hz / f_hz) / delta
    eps_sq = 10.0 ** (ripple_db / 10.0) - 1.0
    return _chebyshev_attenuation_db(n, eps_sq, x)


def equiripple_band_edges(f0_hz: float, bw_hz: float) -> tuple[float, float]:
    """Frequencies mapping to w' = -1 and +1 (the exact -ripple points)."""
    half = bw_hz / 2.0
    root = math.sqrt(half * half + f0_hz * f0_hz)
    return root - half, root + half


def sample_response(n: int, ripple_db: float, f0_hz: float, bw_hz: float,
                    freqs_hz: np.ndarray) -> np.ndarray:
    return np.array([ideal_bandpass_s21(n, ripple_db, f0_hz, bw_hz, float(f))
                     for f in freqs_hz])


# ---------------------------------------------------------------------------
# Lumped LC realization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LcElement:
    position: int
    kind: str  # "series" or "shunt"
    inductance_h: float
    capacitance_f: float


@dataclass(frozen=True)
class LcLadder:
    f0_hz: float
    bw_hz: float
    z0_ohm: float
    source_ohm: float
    load_ohm: float
    elements: tuple[LcElement, ...]
    topology: str = "series-first"


def lc_bandpass(proto: PrototypeCoeffs, f0_hz: float, bw_hz: float,
                z0_ohm: float) -> LcLadder:
    """Low-pass to bandpass element transformation, series resonator first.

    Series branch k: L = g Z0 / (delta w0), C = delta / (g Z0 w0); shunt
    branch: C = g / (delta Z0 w0), L = delta Z0 / (g w0).  Every branch
    resonates at f0 by construction.  For even order the Chebyshev load is
    g[n+1] * Z0; odd orders terminate in Z0.
    """
    if not 0 < bw_hz < f0_hz:
        raise ValueError("need 0 < bw < f0")
    if z0_ohm <= 0:
        raise ValueError("z0_ohm must be > 0")
    delta = bw_hz / f0_hz
    w0 = 2.0 * math.pi * f0_hz
    elements = []
    for k in range(1, proto.order + 1):
        g = proto.g[k]
        if k % 2 == 1:
            elements.append(LcElement(
                position=k, kind="series",
                inductance_h=g * z0_ohm / (delta * w0),
                capacitance_f=delta / (g * z0_ohm * w0)))
        else:
            elements.append(LcElement(
                position=k, kind="shunt",
                inductance_h=delta * z0_ohm / (g * w0),
                capacitance_f=g / (delta * z0_ohm * w0)))
    load = z0_ohm if proto.order % 2 == 1 else z0_ohm * proto.g[proto.order + 1]
    return LcLadder(f0_hz=f0_hz, bw_hz=bw_hz, z0_ohm=z0_ohm,
                    source_ohm=z0_ohm, load_ohm=load,
                    elements=tuple(elements))


# ---------------------------------------------------------------------------
# Preferred-value snapping
# ---------------------------------------------------------------------------

E12 = (1.0, 1.2, 1.5, 1.8, 2.2, 2.7, 3.3, 3.9, 4.7, 5.6, 6.8, 8.2)
E24 = tuple(sorted(E12 + (1.1, 1.3, 1.6, 2.0, 2.4, 3.0, 3.6, 4.3, 5.1, 6.2, 7.5, 9.1)))
E96 = tuple(round(10.0 ** (i / 96.0), 2) for i in range(96))

_SERIES = {"E12": E12, "E24": E24, "E96": E96}


def snap_to_series(value: float, series: str = "E24") -> float:
    """Geometrically nearest preferred value (decade-normalized); exact
    log-distance ties round up."""
    if value <= 0:
        raise ValueError("value must be > 0")
    try:
        mantissas = _SERIES[series]
    except KeyError:
        raise ValueError(f"unknown series {series!r}; expected one of {sorted(_SERIES)}") from None
    exponent = math.floor(math.log10(value))
    best: float | None = None
    best_dist = math.inf
    for e in (exponent - 1, exponent, exponent + 1):
        for m in mantissas:
            candidate = m * 10.0 ** e
            dist = abs(math.log10(value) - math.log10(candidate))
            if dist < best_dist or (dist == best_dist and best is not None and candidate > best):
                best, best_dist = candidate, dist
    assert best is not None
    return best


def snap_ladder(ladder: LcLadder, series: str = "E24") -> LcLadder:
    """Snap every element to the series; resonance error then reflects the
    preferred-value grid, not the synthesis."""
    snapped = tuple(LcElement(
        position=el.position, kind=el.kind,
        inductance_h=snap_to_series(el.inductance_h, series),
        capacitance_f=snap_to_series(el.capacitance_f, series))
        for el in ladder.elements)
    return LcLadder(f0_hz=ladder.f0_hz, bw_hz=ladder.bw_hz, z0_ohm=ladder.z0_ohm,
                    source_ohm=ladder.source_ohm, load_ohm=ladder.load_ohm,
                    elements=snapped, topology=ladder.topology)


def synthesis_report(proto: PrototypeCoeffs, f0_hz: float, bw_hz: float,
                     z0_ohm: float, snapped_series: str | None = None) -> dict:
    """JSON-ready synthesis report: coupled sections plus the LC ladder."""
    sections = even_odd(z0_ohm, j_inverters(proto, bw_hz / f0_hz))
    ladder = lc_bandpass(proto, f0_hz, bw_hz, z0_ohm)

    def ladder_dict(lad: LcLadder) -> dict:
        return {
            "topology": lad.topology,
            "source_ohm": lad.source_ohm,
            "load_ohm": lad.load_ohm,
            "elements": [
                {
                    "position": el.position,
                    "kind": el.kind,
                    "inductance_h": el.inductance_h,
                    "capacitance_f": el.capacitance_f,
                }
                for el in lad.elements
            ],
        }

    report = {
        "order": proto.order,
        "ripple_db": proto.ripple_db,
        "f0_hz": f0_hz,
        "bw_hz": bw_hz,
        "z0_ohm": z0_ohm,
        "g": list(proto.g),
        "sections": [
            {"z0j": s.z0j, "z0e_ohm": s.z0e_ohm, "z0o_ohm": s.z0o_ohm}
            for s in sections
        ],
        "lc": ladder_dict(ladder),
    }
    if snapped_series is not None:
        report["lc_snapped"] = ladder_dict(snap_ladder(ladder, snapped_series))
        report["lc_snapped"]["series"] = snapped_series
    return report
