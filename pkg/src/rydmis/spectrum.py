"""Lowest eigenpairs along a schedule and the gap profile.

scan_gap samples the sweep window uniformly, diagonalizes at each point
and golden-section-refines the gap minimum below the sample resolution;
the refined point is inserted into the profile so downstream consumers
(schedule synthesis, two-level reduction) see the true minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConvergenceError

if TYPE_CHECKING:
    from .hamiltonian import BasisSet, HamiltonianTerms
    from .schedule import PulseSchedule

DENSE_EIG_THRESHOLD = 4096
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class GapProfile:
    """Sampled (t, delta, E0, E1, gap) trajectory plus located minimum.

    Energies in rad/us.  vecs0/vecs1 hold the instantaneous eigenvectors
    row-per-sample when the scan stored them.
    """

    times: np.ndarray
    deltas: np.ndarray
    e0s: np.ndarray
    e1s: np.ndarray
    gaps: np.ndarray
    t_min: float
    delta_min: float
    g_min: float
    basis: "BasisSet | None" = field(repr=False, default=None)
    vecs0: np.ndarray | None = field(repr=False, default=None)
    vecs1: np.ndarray | None = field(repr=False, default=None)

    def gap_at(self, t):
        return np.interp(t, self.times, self.gaps)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Largest-magnitude component made real-positive."""
    k = int(np.argmax(np.abs(vec)))
    pivot = vec[k]
    if pivot == 0:
        return vec
    if np.iscomplexobj(vec):
        return vec * (np.conj(pivot) / abs(pivot))
    return vec if pivot > 0 else -vec


def eigenpairs_lowest2(
    matrix,
    maxiter: int = 20000,
    v0: np.ndarray | None = None,
) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Two smallest eigenvalues with orthonormal, phase-fixed vectors.

    Dense LAPACK below DENSE_EIG_THRESHOLD, restarted-Lanczos ARPACK
    above (v0 warm-starts the iteration).
    """
    dim = matrix.shape[0]
    if dim < 2:
        raise ValueError("need dimension >= 2")
    if dim <= DENSE_EIG_THRESHOLD:
        dense = matrix.toarray() if hasattr(matrix, "toarray") else np.asarray(matrix)
        vals, vecs = eigh(dense, subset_by_index=(0, 1))
    else:
        try:
            vals, vecs = eigsh(matrix, k=2, which="SA", maxiter=maxiter, v0=v0)
        except ArpackNoConvergence as exc:
            raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    v0_out = _fix_phase(vecs[:, 0])
    v1_out = _fix_phase(vecs[:, 1])
    return float(vals[0]), float(vals[1]), v0_out, v1_out


def scan_gap(
    h: "HamiltonianTerms",
    sched: "PulseSchedule",
    n_samples: int = 200,
    store_vectors: bool = True,
    refine_tol: float = 1e-3,
    t_span: tuple[float, float] | None = None,
) -> GapProfile:
    """Gap profile over the sweep window [t_r, T - t_r] (or t_span).

    After the uniform scan the bracket around the smallest sampled gap is
    refined by golden section to |dt| < refine_tol and the refined point
    is inserted into the sample arrays.
    """
    if n_samples < 16:
        raise ValueError("need n_samples >= 16")
    from .hamiltonian import assemble

    t_lo, t_hi = sched.sweep_window if t_span is None else t_span
    times = np.linspace(t_lo, t_hi, n_samples)

    e0s = np.empty(n_samples)
    e1s = np.empty(n_samples)
    vecs0 = np.empty((n_samples, h.dim)) if store_vectors else None
    vecs1 = np.empty((n_samples, h.dim)) if store_vectors else None

    warm = None
    for i, t in enumerate(times):
        try:
            e0, e1, w0, w1 = eigenpairs_lowest2(
                assemble(h, float(sched.omega(t)), float(sched.delta(t))), v0=warm
            )
        except ConvergenceError as exc:
            raise ConvergenceError(f"at t = {t:.6f} us: {exc}") from exc
        e0s[i], e1s[i] = e0, e1
        warm = w0
        if store_vectors:
            vecs0[i], vecs1[i] = w0, w1
    gaps = e1s - e0s

    # Golden-section refinement of the sampled minimum.
    i_min = int(np.argmin(gaps))
    lo = times[max(i_min - 1, 0)]
    hi = times[min(i_min + 1, n_samples - 1)]
    probes: dict[float, tuple] = {}

    def probe(t: float):
        if t not in probes:
            probes[t] = eigenpairs_lowest2(
                assemble(h, float(sched.omega(t)), float(sched.delta(t)))
            )
        return probes[t]

    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    while (b - a) > refine_tol:
        gap_c = probe(c)[1] - probe(c)[0]
        gap_d = probe(d)[1] - probe(d)[0]
        if gap_c < gap_d:
            b, d = d, c
            c = b - GOLDEN * (b - a)
        else:
            a, c = c, d
            d = a + GOLDEN * (b - a)

    candidates = [(e1 - e0, t) for t, (e0, e1, _, _) in probes.items()]
    candidates.append((gaps[i_min], times[i_min]))
    g_min, t_min = min(candidates)

    if not np.any(np.isclose(times, t_min, atol=1e-12)):
        e0, e1, w0, w1 = probe(t_min) if t_min in probes else eigenpairs_lowest2(
            assemble(h, float(sched.omega(t_min)), float(sched.delta(t_min)))
        )
        pos = int(np.searchsorted(times, t_min))
        times = np.insert(times, pos, t_min)
        e0s = np.insert(e0s, pos, e0)
        e1s = np.insert(e1s, pos, e1)
        gaps = np.insert(gaps, pos, e1 - e0)
        if store_vectors:
            vecs0 = np.insert(vecs0, pos, w0, axis=0)
            vecs1 = np.insert(vecs1, pos, w1, axis=0)

    return GapProfile(
        times=times,
        deltas=np.asarray(sched.delta(times), dtype=float),
        e0s=e0s,
        e1s=e1s,
        gaps=gaps,
        t_min=float(t_min),
        delta_min=float(sched.delta(t_min)),
        g_min=float(g_min),
        basis=h.basis,
        vecs0=vecs0,
        vecs1=vecs1,
    )


def track_mis_overlap(
    profile: GapProfile,
    mis_states: list[str] | tuple[str, ...],
    mode: str = "auto",
) -> tuple[np.ndarray, np.ndarray]:
    """|<MIS|E0>|^2 and |<MIS|E1>|^2 at each profile sample.

    |MIS> is the single configuration when unique (or mode="single"
    picks the first), otherwise the uniform superposition over the MIS
    manifold (mode="superposition").
    """
    if profile.vecs0 is None or profile.vecs1 is None:
        raise ValueError("profile was scanned without stored eigenvectors")
    if profile.basis is None:
        raise ValueError("profile carries no basis reference")
    if not mis_states:
        raise ValueError("empty MIS state list")
    if mode == "auto":
        mode = "single" if len(mis_states) == 1 else "superposition"

    positions = []
    for bits in mis_states:
        pos = profile.basis.position_of(int(bits, 2))
        if pos < 0:
            raise ValueError(f"configuration {bits} is outside the basis")
        positions.append(pos)

    if mode == "single":
        positions = positions[:1]
    amp0 = profile.vecs0[:, positions].sum(axis=1)
    amp1 = profile.vecs1[:, positions].sum(axis=1)
    norm = len(positions)
    return np.abs(amp0) ** 2 / norm, np.abs(amp1) ** 2 / norm
