"""Atom arrays, physical parameters and the blockade graph.

Unit conventions used throughout the package:

* angular frequencies are stored in rad/us (hbar = 1),
* times in us, lengths in um,
* every user-facing number is quoted as value / 2*pi in MHz, which is the
  usual convention on neutral-atom hardware.  ``from_mhz``/``to_mhz``
  convert at that boundary.

The detuning sign convention follows ``H = sum_v [ (Omega/2) sx_v +
(delta/2) sz_v ] + U sum_(u,v) n_u n_v`` with ``sz = |g><g| - |r><r|``,
so a *positive* detuning favours the Rydberg state.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .configs import atom_bit

TWO_PI = 2.0 * math.pi


def from_mhz(value_mhz: float) -> float:
    """Convert a frequency quoted as value/2pi in MHz to rad/us."""
    return TWO_PI * value_mhz


def to_mhz(value_rad_per_us: float) -> float:
    """Convert rad/us back to the value/2pi MHz convention."""
    return value_rad_per_us / TWO_PI


@dataclass(frozen=True)
class PhysicalParams:
    """Hardware parameters of the driving laser and interaction.

    Attributes:
        c6: van-der-Waals coefficient, rad/us * um^6.
        omega0: peak Rabi frequency, rad/us.
        delta_i: initial (negative) detuning, rad/us.
        delta_f: final (positive) detuning, rad/us.
        total_time: full evolution time T, us.
        ramp_time: Rabi ramp duration t_r, us.
    """

    c6: float
    omega0: float
    delta_i: float
    delta_f: float
    total_time: float
    ramp_time: float

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if not (self.total_time > 2 * self.ramp_time > 0):
            raise ValueError("need T > 2*t_r > 0")
        if not (self.delta_i < 0 < self.delta_f):
            raise ValueError("need delta_i < 0 < delta_f")

    @classmethod
    def from_mhz(
        cls,
        c6_mhz_um6: float,
        omega0_mhz: float,
        delta_i_mhz: float,
        delta_f_mhz: float,
        total_time_us: float,
        ramp_time_us: float,
    ) -> "PhysicalParams":
        return cls(
            c6=from_mhz(c6_mhz_um6),
            omega0=from_mhz(omega0_mhz),
            delta_i=from_mhz(delta_i_mhz),
            delta_f=from_mhz(delta_f_mhz),
            total_time=total_time_us,
            ramp_time=ramp_time_us,
        )

    @classmethod
    def default(cls) -> "PhysicalParams":
        """87Rb / 70S hardware values used for all stock experiments.

        C6 = 2pi x 863 GHz um^6, Omega0 = 2pi x 1 MHz, detuning swept
        2pi x (-2.5 .. +2.5) MHz over T = 5 us with 0.5 us Rabi ramps.
        """
        return cls.from_mhz(
            c6_mhz_um6=863_000.0,
            omega0_mhz=1.0,
            delta_i_mhz=-2.5,
            delta_f_mhz=2.5,
            total_time_us=5.0,
            ramp_time_us=0.5,
        )

    @property
    def blockade_radius(self) -> float:
        """R_b = (C6 / Omega0)^(1/6) in um."""
        return (self.c6 / self.omega0) ** (1.0 / 6.0)


@dataclass(frozen=True)
class AtomArray:
    """A named, ordered set of 2D atom coordinates in um.

    Atom indices are 0-based internally; reports and file formats use
    1-based indices to match the published coordinate tables.
    """

    name: str
    positions: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        n = len(self.positions)
        for i in range(n):
            for j in range(i + 1, n):
                if _dist(self.positions[i], self.positions[j]) == 0.0:
                    raise ValueError(f"atoms {i + 1} and {j + 1} coincide")

    @property
    def n(self) -> int:
        return len(self.positions)

    def min_spacing(self) -> float:
        """Smallest pairwise distance; the nearest-neighbor spacing a."""
        if self.n < 2:
            raise ValueError("need at least two atoms")
        return min(
            _dist(self.positions[i], self.positions[j])
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def to_json(self) -> dict:
        return {"name": self.name, "positions_um": [list(p) for p in self.positions]}

    @classmethod
    def from_json(cls, data: dict) -> "AtomArray":
        return cls(
            name=str(data["name"]),
            positions=tuple((float(x), float(y)) for x, y in data["positions_um"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "AtomArray":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class BlockadeGraph:
    """Unit-disk graph induced by the blockade radius.

    Edges connect atom pairs within r_b.  u_per_edge = C6 / a^6 is the
    single interaction energy of the constant-U model, with the
    nearest-neighbor spacing a estimated as the median edge length
    (printed coordinate tables carry 0.01 um rounding, which a bare
    minimum-distance rule would amplify sixfold into U).  The source
    positions and C6 are kept so Hamiltonians can also be built with the
    full 1/r^6 pair interactions.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    r_b: float
    u_per_edge: float
    positions: tuple[tuple[float, float], ...] = ()
    c6: float = 0.0
    adjacency: tuple[int, ...] = field(repr=False, default=())

    def __post_init__(self) -> None:
        if not self.adjacency:
            adj = [0] * self.n
            for u, v in self.edges:
                adj[u] |= atom_bit(self.n, v)
                adj[v] |= atom_bit(self.n, u)
            object.__setattr__(self, "adjacency", tuple(adj))

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()


def _dist(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


# Published coordinate tables, stored exactly as printed (2-decimal um).

_Q1D_10 = (
    (6.93, 8.00), (20.78, 8.00), (34.64, 8.00),
    (0.00, 4.00), (13.85, 4.00), (27.71, 4.00), (41.57, 4.00),
    (6.93, 0.00), (20.78, 0.00), (34.64, 0.00),
)

_TD_25 = (
    (27.71, 4.00),
    (20.78, 8.00), (34.64, 8.00),
    (13.86, 12.00), (27.71, 12.00), (41.57, 12.00),
    (6.93, 16.00), (20.78, 16.00), (34.64, 16.00), (48.50, 16.00),
    (0.00, 20.00), (13.86, 20.00), (27.71, 20.00), (41.57, 20.00), (55.43, 20.00),
    (6.93, 24.00), (20.78, 24.00), (34.64, 24.00), (48.50, 24.00),
    (13.86, 28.00), (27.71, 28.00), (41.57, 28.00),
    (20.78, 32.00), (34.64, 32.00),
    (27.71, 36.00),
)

_TH_37 = (
    (20.78, 0.00),
    (13.86, 4.00), (27.71, 4.00),
    (6.93, 8.00), (20.78, 8.00), (34.64, 8.00),
    (0.00, 12.00), (13.86, 12.00), (27.71, 12.00), (41.57, 12.00),
    (6.93, 16.00), (20.78, 16.00), (34.64, 16.00),
    (0.00, 20.00), (13.86, 20.00), (27.71, 20.00), (41.57, 20.00),
    (6.93, 24.00), (20.78, 24.00), (34.64, 24.00),
    (0.00, 28.00), (13.86, 28.00), (27.71, 28.00), (41.57, 28.00),
    (6.93, 32.00), (20.78, 32.00), (34.64, 32.00),
    (0.00, 36.00), (13.86, 36.00), (27.71, 36.00), (41.57, 36.00),
    (6.93, 40.00), (20.78, 40.00), (34.64, 40.00),
    (13.86, 44.00), (27.71, 44.00),
    (20.78, 48.00),
)

_QP1D_23 = (
    (13.86, 4.00), (20.78, 0.00),
    (27.71, 4.00), (34.64, 0.00),
    (41.57, 4.00), (48.50, 0.00),
    (55.43, 4.00), (6.93, 8.00),
    (20.78, 8.00), (34.64, 8.00),
    (48.50, 8.00), (6.93, 16.00),
    (6.93, 24.00), (13.86, 28.00),
    (20.78, 24.00), (27.71, 28.00),
    (34.64, 24.00), (41.57, 28.00),
    (48.50, 24.00), (55.43, 28.00),
    (20.78, 32.00), (34.64, 32.00),
    (48.50, 32.00),
)

_TABLES: dict[str, tuple[tuple[float, float], ...]] = {
    "Q1D_10": _Q1D_10,
    "TD_25": _TD_25,
    "TH_37": _TH_37,
    "Qp1D_23": _QP1D_23,
}

BUILTIN_NAMES = tuple(_TABLES)


def builtin_instance(name: str) -> AtomArray:
    """Return a named built-in atom array.

    Tabulated instances (Q1D_10, TD_25, TH_37, Qp1D_23) come back with
    their published coordinates verbatim.  Other zigzag-chain sizes are
    accepted as ``Q1D_<n>`` and generated at the standard 8 um spacing.
    """
    if name in _TABLES:
        return AtomArray(name=name, positions=_TABLES[name])
    if name.startswith("Q1D_"):
        try:
            n = int(name[len("Q1D_"):])
        except ValueError:
            raise ValueError(f"unknown instance {name!r}") from None
        return generate_kpxp_chain(n, 8.0)
    raise ValueError(
        f"unknown instance {name!r}; built-ins are {', '.join(BUILTIN_NAMES)} "
        "or Q1D_<n> for a generated chain"
    )


def generate_kpxp_chain(n: int, a: float) -> AtomArray:
    """Zigzag triangular chain of n atoms with nearest-neighbor spacing a.

    The chain walks cells of three atoms each: a spine atom on the middle
    row, then the top/bottom pair half a cell further along.  Spine atoms
    sit at x = k*a*sqrt(3), y = a/2; the top/bottom atoms of cell k at
    x = (k + 1/2)*a*sqrt(3), y = a and y = 0.  Atom order is the walk
    order, so the spine occupies indices 1, 4, 7, ... (1-based) and the
    unique MIS of the induced blockade graph is the spine itself.

    For n = 10, a = 8 this reproduces the published Q1D_10 coordinates
    (up to 0.01 um print rounding in one table entry).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if a <= 0:
        raise ValueError("need a > 0")
    dx = a * math.sqrt(3.0)
    pos: list[tuple[float, float]] = []
    for i in range(n):
        k, r = divmod(i, 3)
        if r == 0:
            pos.append((k * dx, a / 2.0))
        elif r == 1:
            pos.append((k * dx + dx / 2.0, a))
        else:
            pos.append((k * dx + dx / 2.0, 0.0))
    return AtomArray(name=f"Q1D_{n}", positions=tuple(pos))


def blockade_graph(
    arr: AtomArray,
    p: PhysicalParams,
    require_mis_encoding: bool = False,
) -> BlockadeGraph:
    """Build the unit-disk blockade graph of an atom array.

    With ``require_mis_encoding`` the constructed graph must be usable as
    an MIS instance: it must have at least one edge (n >= 2) and satisfy
    delta_f < U so the final ground state is the MIS configuration.
    """
    if arr.n == 0:
        raise ValueError("empty atom array")
    r_b = p.blockade_radius
    edges = frozenset(
        (i, j)
        for i in range(arr.n)
        for j in range(i + 1, arr.n)
        if _dist(arr.positions[i], arr.positions[j]) <= r_b
    )
    if edges:
        spacing = statistics.median(
            _dist(arr.positions[i], arr.positions[j]) for i, j in edges
        )
    elif arr.n >= 2:
        spacing = arr.min_spacing()
    else:
        spacing = 0.0
    u = p.c6 / spacing**6 if spacing > 0 else 0.0
    if require_mis_encoding and arr.n >= 2:
        if not edges:
            raise ValueError(
                "blockade graph has no edges; the MIS problem is degenerate"
            )
        if p.delta_f >= u:
            raise ValueError(
                f"MIS encoding requires delta_f < U, got delta_f = "
                f"{to_mhz(p.delta_f):.3f} and U = {to_mhz(u):.3f} (2pi MHz)"
            )
    return BlockadeGraph(
        n=arr.n,
        edges=edges,
        r_b=r_b,
        u_per_edge=u,
        positions=arr.positions,
        c6=p.c6,
    )
