"""Pulse schedules: representation, synthesis, export.

A schedule is a Rabi-frequency trapezoid (linear ramp up, plateau,
linear ramp down) plus a detuning breakpoint table with linear
interpolation.  Three synthesis routes are provided:

* ``standard_schedule``: linear detuning sweep between the ramps;
* ``adglb_schedule``: detuning reparameterized so that d(delta)/dt is
  proportional to gap(t)^j within each half of the sweep, slowing the
  sweep where the spectral gap is small (the two halves meet at the gap
  minimum and are normalized independently, so the proportionality
  constant differs between them);
* ``transfer_schedule``: the polynomial approximation of the reference
  chain's engineered sweep, re-scaled to pass through a shifted waypoint
  detuning delta_min0 + nu_d, for carrying a schedule tuned on a small
  instance over to a harder one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING
import json

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .geometry import TWO_PI, PhysicalParams, from_mhz, to_mhz

if TYPE_CHECKING:
    from .spectrum import GapProfile

# Waypoint of the reference-chain engineered schedule, used by
# transfer_schedule: delta_min0 = 2pi x 1.38 MHz reached at t = 3.60 us.
TRANSFER_DELTA_MIN0 = from_mhz(1.38)
TRANSFER_T_MIN = 3.60


@dataclass(frozen=True, eq=False)
class PulseSchedule:
    """Rabi trapezoid plus detuning breakpoint table on [0, T].

    Invariants checked at construction: omega(0) = omega(T) = 0 with the
    plateau at omega0; delta continuous, constant on the ramp windows,
    and nondecreasing up to a 0.1%-of-range waveform tolerance (the
    transfer-schedule polynomials have a sub-0.05% seam residual at the
    waypoint).
    """

    ramp_time: float
    total_time: float
    omega0: float
    delta_times: np.ndarray
    delta_values: np.ndarray
    kind: str = "standard"
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        t = np.asarray(self.delta_times, dtype=float)
        v = np.asarray(self.delta_values, dtype=float)
        object.__setattr__(self, "delta_times", t)
        object.__setattr__(self, "delta_values", v)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("breakpoint table must be two equal-length 1D arrays")
        if not (self.total_time > 2 * self.ramp_time > 0):
            raise ValueError("need T > 2*t_r > 0")
        if abs(t[0]) > 1e-12 or abs(t[-1] - self.total_time) > 1e-9:
            raise ValueError("breakpoints must span [0, T]")
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoint times must be strictly increasing")
        tol = max(1e-9, 1e-3 * (v.max() - v.min()))
        if np.any(np.diff(v) < -tol):
            raise ValueError("delta(t) must be nondecreasing")
        hold_lo = v[t <= self.ramp_time + 1e-12]
        hold_hi = v[t >= self.total_time - self.ramp_time - 1e-12]
        if hold_lo.size == 0 or hold_hi.size == 0:
            raise ValueError("table must include breakpoints at the ramp edges")
        if np.max(np.abs(hold_lo - v[0])) > tol or np.max(np.abs(hold_hi - v[-1])) > tol:
            raise ValueError("delta must be constant during the Rabi ramps")

    @property
    def delta_i(self) -> float:
        return float(self.delta_values[0])

    @property
    def delta_f(self) -> float:
        return float(self.delta_values[-1])

    @property
    def sweep_window(self) -> tuple[float, float]:
        return self.ramp_time, self.total_time - self.ramp_time

    def omega(self, t):
        knots = [0.0, self.ramp_time, self.total_time - self.ramp_time, self.total_time]
        return np.interp(t, knots, [0.0, self.omega0, self.omega0, 0.0])

    def omega_dot(self, t):
        """Right-hand derivative of omega (left-hand at t = T)."""
        t = np.asarray(t, dtype=float)
        slope_up = self.omega0 / self.ramp_time
        out = np.zeros_like(t)
        out = np.where(t < self.ramp_time, slope_up, out)
        out = np.where(t >= self.total_time - self.ramp_time, -slope_up, out)
        out = np.where(t >= self.total_time, -slope_up, out)
        return out if out.ndim else float(out)

    def delta(self, t):
        return np.interp(t, self.delta_times, self.delta_values)

    def delta_dot(self, t):
        """Right-hand derivative of delta (left-hand at t = T)."""
        t = np.asarray(t, dtype=float)
        slopes = np.diff(self.delta_values) / np.diff(self.delta_times)
        idx = np.searchsorted(self.delta_times, t, side="right") - 1
        idx = np.clip(idx, 0, slopes.size - 1)
        out = slopes[idx]
        return out if out.ndim else float(out)

    def with_delta_offset(self, offset: float) -> "PulseSchedule":
        """Globally shifted detuning (models a static detuning error)."""
        return PulseSchedule(
            ramp_time=self.ramp_time,
            total_time=self.total_time,
            omega0=self.omega0,
            delta_times=self.delta_times.copy(),
            delta_values=self.delta_values + offset,
            kind=self.kind,
            meta={**self.meta, "delta_offset": offset},
        )

    def kind_label(self) -> str:
        if self.kind == "adglb" and "j" in self.meta:
            return f"adglb(j={self.meta['j']:g})"
        if self.kind == "transfer" and "nu_d" in self.meta:
            return f"transfer(nu_d_mhz={to_mhz(self.meta['nu_d']):g})"
        return self.kind

    def to_json(self) -> dict:
        return {
            "t_r_us": self.ramp_time,
            "T_us": self.total_time,
            "omega0_over_2pi_MHz": to_mhz(self.omega0),
            "points": [
                {"t_us": float(t), "delta_over_2pi_MHz": to_mhz(float(d))}
                for t, d in zip(self.delta_times, self.delta_values)
            ],
            "kind": self.kind_label(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PulseSchedule":
        pts = data["points"]
        return cls(
            ramp_time=float(data["t_r_us"]),
            total_time=float(data["T_us"]),
            omega0=from_mhz(float(data["omega0_over_2pi_MHz"])),
            delta_times=np.array([p["t_us"] for p in pts], dtype=float),
            delta_values=np.array(
                [from_mhz(p["delta_over_2pi_MHz"]) for p in pts], dtype=float
            ),
            kind=str(data.get("kind", "custom")),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "PulseSchedule":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_hardware_program(self) -> dict:
        """Piecewise-linear amplitude/detuning time series in SI units."""
        omega_t = [0.0, self.ramp_time, self.total_time - self.ramp_time, self.total_time]
        return {
            "amplitude": {
                "times_s": [t * 1e-6 for t in omega_t],
                "values_rad_per_s": [0.0, self.omega0 * 1e6, self.omega0 * 1e6, 0.0],
                "interpolation": "piecewise_linear",
            },
            "detuning": {
                "times_s": [float(t) * 1e-6 for t in self.delta_times],
                "values_rad_per_s": [float(v) * 1e6 for v in self.delta_values],
                "interpolation": "piecewise_linear",
            },
        }


def standard_schedule(p: PhysicalParams) -> PulseSchedule:
    """Three-stage schedule: Rabi ramp, linear detuning sweep, ramp down."""
    t_r, t_end = p.ramp_time, p.total_time
    return PulseSchedule(
        ramp_time=t_r,
        total_time=t_end,
        omega0=p.omega0,
        delta_times=np.array([0.0, t_r, t_end - t_r, t_end]),
        delta_values=np.array([p.delta_i, p.delta_i, p.delta_f, p.delta_f]),
        kind="standard",
    )


class ZetaInterpolant:
    """Normalized gap-power time reparameterization on [t0, t1].

    zeta_j(t) = int_t0^t gap^j dt' / int_t0^t1 gap^j dt', evaluated by
    composite trapezoid with the gap linearly interpolated between the
    profile samples.  Strictly increasing from 0 to 1.
    """

    def __init__(self, profile: "GapProfile", j: float, t0: float, t1: float,
                 resolution: int = 2048):
        if j <= 0:
            raise ValueError("need j > 0")
        if not (t0 < t1):
            raise ValueError("need t0 < t1")
        times = np.asarray(profile.times, dtype=float)
        gaps = np.asarray(profile.gaps, dtype=float)
        if t0 < times[0] - 1e-9 or t1 > times[-1] + 1e-9:
            raise ValueError("profile does not cover the requested interval")
        inside = times[(times > t0) & (times < t1)]
        grid = np.union1d(np.linspace(t0, t1, resolution + 1), inside)
        integrand = np.interp(grid, times, gaps) ** j
        cum = cumulative_trapezoid(integrand, grid, initial=0.0)
        if cum[-1] <= 0.0:
            raise ValueError("gap vanishes on the whole interval")
        self.j = j
        self.t0 = t0
        self.t1 = t1
        self._grid = grid
        self._zeta = cum / cum[-1]

    def __call__(self, t):
        return np.interp(t, self._grid, self._zeta)


def zeta_interpolant(profile: "GapProfile", j: float, t0: float, t1: float) -> ZetaInterpolant:
    return ZetaInterpolant(profile, j, t0, t1)


def adglb_schedule(
    p: PhysicalParams,
    profile: "GapProfile",
    j: float,
    table_points: int = 1000,
) -> PulseSchedule:
    """Gap-guided detuning schedule through the profile's gap minimum.

    The sweep window splits at t_min; each half rises via its own
    zeta_j, so delta passes exactly through (t_min, delta_min) and ends
    at delta_f.  The Rabi trapezoid is unchanged.  The profile must have
    been computed along the standard schedule for the same parameters.
    """
    t_r, t_hi = p.ramp_time, p.total_time - p.ramp_time
    times = np.asarray(profile.times, dtype=float)
    if abs(times[0] - t_r) > 1e-6 or abs(times[-1] - t_hi) > 1e-6:
        raise ValueError(
            "gap profile does not match the schedule window of these parameters"
        )
    t_min, d_min = profile.t_min, profile.delta_min
    if not (t_r < t_min < t_hi):
        raise ValueError("gap minimum must lie inside the sweep window")
    if not (p.delta_i < d_min < p.delta_f):
        raise ValueError("waypoint detuning must lie between delta_i and delta_f")

    frac = (t_min - t_r) / (t_hi - t_r)
    n_a = max(64, int(round(table_points * frac)))
    n_b = max(64, table_points - n_a)
    zeta_a = ZetaInterpolant(profile, j, t_r, t_min)
    zeta_b = ZetaInterpolant(profile, j, t_min, t_hi)
    ts_a = np.linspace(t_r, t_min, n_a + 1)
    ts_b = np.linspace(t_min, t_hi, n_b + 1)
    delta_a = p.delta_i + (d_min - p.delta_i) * zeta_a(ts_a)
    delta_b = d_min + (p.delta_f - d_min) * zeta_b(ts_b)

    t_table = np.concatenate(([0.0], ts_a, ts_b[1:], [p.total_time]))
    d_table = np.concatenate(([p.delta_i], delta_a, delta_b[1:], [p.delta_f]))
    return PulseSchedule(
        ramp_time=t_r,
        total_time=p.total_time,
        omega0=p.omega0,
        delta_times=t_table,
        delta_values=d_table,
        kind="adglb",
        meta={"j": j, "t_min": t_min, "delta_min": d_min},
    )


@dataclass(frozen=True)
class EtaPolynomials:
    """Quartic zero-intercept fits of the two halves of an engineered sweep.

    eta_a(s) fits delta(t_r + s) - delta_i, eta_b(s) fits
    delta(t_min + s) - delta_min; s in us, outputs in 2pi x MHz.
    """

    a_coeffs: tuple[float, float, float, float]
    b_coeffs: tuple[float, float, float, float]

    def eta_a(self, s):
        return _quartic(self.a_coeffs, s)

    def eta_b(self, s):
        return _quartic(self.b_coeffs, s)

    @classmethod
    def reference(cls) -> "EtaPolynomials":
        """Published fit of the reference 10-atom chain's schedule."""
        return cls(
            a_coeffs=(4.0047, -1.5785, 0.2826, -0.0193),
            b_coeffs=(0.5509, -0.055, 1.4402, -0.565),
        )


def _quartic(coeffs, s):
    s = np.asarray(s, dtype=float)
    out = coeffs[0] * s + coeffs[1] * s**2 + coeffs[2] * s**3 + coeffs[3] * s**4
    return out if out.ndim else float(out)


def transfer_schedule(
    p: PhysicalParams,
    nu_d: float,
    eta: EtaPolynomials | None = None,
    table_points: int = 1000,
) -> PulseSchedule:
    """Reference schedule re-aimed at waypoint delta_min0 + nu_d.

    Scales the two polynomial sweep halves so the detuning passes through
    the shifted waypoint while keeping the original endpoints (up to the
    polynomials' ~2pi x 0.01 MHz endpoint residual, which is held flat
    through the final ramp).  Requires the reference timing parameters
    (T = 5 us, t_r = 0.5 us, delta = 2pi x (-2.5 .. 2.5) MHz).
    """
    if eta is None:
        eta = EtaPolynomials.reference()
    ref = PhysicalParams.default()
    for attr in ("delta_i", "delta_f", "total_time", "ramp_time"):
        if abs(getattr(p, attr) - getattr(ref, attr)) > 1e-9:
            raise ValueError(
                "transfer_schedule requires the reference timing and detuning "
                f"parameters (mismatch in {attr})"
            )
    d_min0, t_min = TRANSFER_DELTA_MIN0, TRANSFER_T_MIN
    d_min = d_min0 + nu_d
    if not (p.delta_i < d_min < p.delta_f):
        raise ValueError(
            f"offset {to_mhz(nu_d):+.3f} (2pi MHz) pushes the waypoint outside "
            "(delta_i, delta_f)"
        )

    t_r, t_hi = p.ramp_time, p.total_time - p.ramp_time
    scale_a = (d_min - p.delta_i) / (d_min0 - p.delta_i)
    scale_b = (p.delta_f - d_min) / (p.delta_f - d_min0)
    n_a = max(64, int(round(table_points * (t_min - t_r) / (t_hi - t_r))))
    n_b = max(64, table_points - n_a)
    ts_a = np.linspace(t_r, t_min, n_a + 1)[:-1]
    ts_b = np.linspace(t_min, t_hi, n_b + 1)
    delta_a = p.delta_i + scale_a * TWO_PI * eta.eta_a(ts_a - t_r)
    delta_b = d_min + scale_b * TWO_PI * eta.eta_b(ts_b - t_min)

    t_table = np.concatenate(([0.0], ts_a, ts_b, [p.total_time]))
    d_table = np.concatenate(([p.delta_i], delta_a, delta_b, [delta_b[-1]]))
    return PulseSchedule(
        ramp_time=t_r,
        total_time=p.total_time,
        omega0=p.omega0,
        delta_times=t_table,
        delta_values=d_table,
        kind="transfer",
        meta={"nu_d": nu_d, "t_min": t_min, "delta_min": d_min},
    )


def fit_eta_polynomials(sched: PulseSchedule, samples_per_piece: int = 400) -> EtaPolynomials:
    """Least-squares quartic (no constant term) fit of an engineered sweep.

    Fits delta - delta_i against s = t - t_r on [t_r, t_min] and
    delta - delta_min against s = t - t_min on [t_min, T - t_r], both in
    2pi x MHz.  The schedule must carry its waypoint metadata (an
    adglb-synthesized schedule does).
    """
    t_min = sched.meta.get("t_min")
    d_min = sched.meta.get("delta_min")
    if t_min is None or d_min is None:
        raise ValueError("schedule carries no waypoint metadata to fit against")
    t_r, t_hi = sched.sweep_window

    def fit_piece(t0: float, t1: float, base: float) -> tuple[float, ...]:
        ts = np.linspace(t0, t1, samples_per_piece)
        s = ts - t0
        y = to_mhz(sched.delta(ts) - base)
        design = np.stack([s, s**2, s**3, s**4], axis=1)
        coeffs, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if rank < 4:
            raise ValueError("degenerate sweep piece; quartic fit is rank deficient")
        return tuple(float(c) for c in coeffs)

    return EtaPolynomials(
        a_coeffs=fit_piece(t_r, t_min, sched.delta_i),
        b_coeffs=fit_piece(t_min, t_hi, d_min),
    )
