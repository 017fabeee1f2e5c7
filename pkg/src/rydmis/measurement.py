"""Measurement sampling, readout-error channel and histogram reports.

Shots are drawn from the Born probabilities of a final state; the
readout channel flips each bit independently and asymmetrically
(r read as g with probability p_g_given_r, g read as r with
p_r_given_g).  Histograms are grouped by independent-set class the way
the experimental analyses present them: MIS, size |MIS|-1 independent
sets, other independent sets, and blockade-violating strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .configs import config_to_bits
from .geometry import BlockadeGraph, from_mhz
from .isets import ISetStats, classify_bitstring, count_isets


@dataclass(frozen=True)
class SpamModel:
    """Asymmetric per-atom readout bit-flip rates.

    detuning_offset_sigma, when set, is the width (rad/us) of a static
    global detuning error drawn once per shot batch; applying it means
    re-running the evolution with a shifted schedule, so it is off by
    default and handled by the pipeline layer, not by sample_shots.
    """

    p_g_given_r: float = 0.10
    p_r_given_g: float = 0.05
    detuning_offset_sigma: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_g_given_r <= 1.0 and 0.0 <= self.p_r_given_g <= 1.0):
            raise ValueError("flip probabilities must lie in [0, 1]")

    @classmethod
    def hardware_default(cls) -> "SpamModel":
        return cls(p_g_given_r=0.10, p_r_given_g=0.05,
                   detuning_offset_sigma=from_mhz(0.16))


@dataclass(frozen=True, eq=False)
class ShotHistogram:
    """Bitstring counts from one sampling batch.

    p_mis / p_mis_minus_1 are filled when the graph was supplied at
    sampling time; histogram_report recomputes them in any case.
    """

    counts: dict[str, int]
    n_shots: int
    n_atoms: int
    seed: int
    spam: SpamModel | None = None
    p_mis: float | None = None
    p_mis_minus_1: float | None = None

    def probability(self, bits: str) -> float:
        return self.counts.get(bits, 0) / self.n_shots


def sample_shots(
    state,
    n_shots: int,
    spam: SpamModel | None = None,
    seed: int = 0,
    graph: BlockadeGraph | None = None,
) -> ShotHistogram:
    """Draw measurement bitstrings from a quantum state.

    Deterministic for a fixed seed (PCG64).  With a SpamModel, each bit
    is flipped independently through the asymmetric readout channel.
    """
    amps = np.asarray(state.amplitudes)
    probs = np.abs(amps) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"state is not normalized (sum p = {total:.8f})")
    probs = probs / total
    n = state.basis.n

    rng = np.random.default_rng(np.random.PCG64(seed))
    drawn = rng.choice(probs.size, size=n_shots, p=probs)
    configs = state.basis.states[drawn].astype(np.int64)

    shift = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (configs[:, None] >> shift[None, :]) & 1

    if spam is not None:
        u = rng.random(bits.shape)
        flip = np.where(bits == 1, u < spam.p_g_given_r, u < spam.p_r_given_g)
        bits = bits ^ flip

    weights = 1 << shift
    observed = (bits * weights[None, :]).sum(axis=1)
    counts: dict[str, int] = {}
    for config, cnt in zip(*np.unique(observed, return_counts=True)):
        counts[config_to_bits(int(config), n)] = int(cnt)

    p_mis = p_mis_1 = None
    if graph is not None:
        stats = count_isets(graph)
        mis_shots = mis1_shots = 0
        for bits_, cnt in counts.items():
            k = _klass(graph, bits_, stats)
            if k == "mis":
                mis_shots += cnt
            elif k == "mis_minus_1":
                mis1_shots += cnt
        p_mis = mis_shots / n_shots
        p_mis_1 = mis1_shots / n_shots

    return ShotHistogram(
        counts=counts,
        n_shots=n_shots,
        n_atoms=n,
        seed=seed,
        spam=spam,
        p_mis=p_mis,
        p_mis_minus_1=p_mis_1,
    )


def _klass(g: BlockadeGraph, bits: str, stats: ISetStats) -> str:
    c = classify_bitstring(g, bits, stats)
    if not c["is_independent"]:
        return "non_independent"
    if c["is_mis"]:
        return "mis"
    if c["is_mis_minus_1"]:
        return "mis_minus_1"
    return "other_independent"


def histogram_report(h: ShotHistogram, g: BlockadeGraph) -> dict:
    """Group a shot histogram by independent-set class.

    Returns class totals and probabilities plus per-bitstring bars
    (probability-sorted) for the MIS and |MIS|-1 classes.
    """
    if g.n != h.n_atoms:
        raise ValueError("graph size does not match histogram bitstring length")
    stats = count_isets(g)
    class_counts = {"mis": 0, "mis_minus_1": 0, "other_independent": 0,
                    "non_independent": 0}
    bars: dict[str, list] = {"mis": [], "mis_minus_1": []}
    for bits, cnt in h.counts.items():
        k = _klass(g, bits, stats)
        class_counts[k] += cnt
        if k in bars:
            bars[k].append((bits, cnt / h.n_shots))
    for k in bars:
        bars[k].sort(key=lambda item: (-item[1], item[0]))
    return {
        "n_shots": h.n_shots,
        "seed": h.seed,
        "spam": None if h.spam is None else {
            "p_g_given_r": h.spam.p_g_given_r,
            "p_r_given_g": h.spam.p_r_given_g,
        },
        "mis_size": stats.mis_size,
        "class_counts": class_counts,
        "class_probabilities": {
            k: v / h.n_shots for k, v in class_counts.items()
        },
        "p_mis": class_counts["mis"] / h.n_shots,
        "p_mis_minus_1": class_counts["mis_minus_1"] / h.n_shots,
        "bars_mis": [{"bits": b, "probability": p} for b, p in bars["mis"]],
        "bars_mis_minus_1": [
            {"bits": b, "probability": p} for b, p in bars["mis_minus_1"]
        ],
    }
