"""Exact state-vector annealing for transverse-field Ising problems.

The Hamiltonian is

    H(t) = sum_{(i,j)} J_ij sz_i sz_j + sum_i h_i sz_i + Delta(t) sum_i sx_i

with energies in eV and a transverse field ramped to (numerically)
zero.  States live in the full 2^N amplitude vector; basis index ``s``
encodes site ``i`` in bit ``i``, bit value 0 meaning spin +1.  The
evolution is a symmetric (Strang) splitting between the diagonal Ising
part and the product of single-site transverse rotations, so every step
is exactly unitary and the whole run is matrix-free, O(N 2^N) per step.
Time is measured in hbar/eV by default ("natural"); with
``time_unit="seconds"`` the accumulated phases pick up the hbar/eV
scale factor.

The positive-coupling convention favours anti-aligned neighbours, which
is what makes MAX-CUT the native problem: cutting an edge of weight w
lowers the Ising energy by 2w, so cut(S) = (sum w - E) / 2.

Annealing starts from the exact ground state of the transverse term,
the uniform superposition with alternating signs, and is measured
against :func:`brute_force_ground_state`, an exhaustive and
annealer-independent enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cells import BiasSet, CapacitanceNetwork, CellGeometry, MaterialStack, build_network
from .charging import ising_parameters, reduce_network
from .constants import CONST
from .tunneling import TunnelBarrier, tunnel_amplitude

__all__ = [
    "IsingModel",
    "Schedule",
    "EvolutionResult",
    "GroundState",
    "chain_model",
    "grid_model",
    "maxcut_to_ising",
    "cut_value",
    "diagonal_energies",
    "initial_state",
    "apply_hamiltonian",
    "evolve",
    "measure",
    "brute_force_ground_state",
    "success_probability",
    "fg_grid_model",
]

MAX_SITES = 24
MAX_BRUTE_FORCE_SITES = 20


@dataclass(frozen=True)
class IsingModel:
    """Problem instance: longitudinal fields and symmetric pair couplings.

    ``couplings`` holds one entry per undirected edge as (i, j, J_ij)
    with i < j; ``delta0`` optionally records a device-derived
    transverse-field scale (eV).
    """

    n_sites: int
    h: np.ndarray
    couplings: tuple[tuple[int, int, float], ...]
    topology: str = "arbitrary"
    delta0: float | None = None

    def __post_init__(self):
        if not 1 <= self.n_sites <= MAX_SITES:
            raise ValueError(f"site count must be in [1, {MAX_SITES}], got {self.n_sites}")
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.n_sites,):
            raise ValueError(f"h must have shape ({self.n_sites},), got {h.shape}")
        object.__setattr__(self, "h", h)
        seen = set()
        for (i, j, w) in self.couplings:
            if not (0 <= i < j < self.n_sites):
                raise ValueError(f"coupling ({i}, {j}) is not an ordered site pair")
            if (i, j) in seen:
                raise ValueError(f"duplicate coupling for pair ({i}, {j})")
            seen.add((i, j))
            if not math.isfinite(w):
                raise ValueError("couplings must be finite")


@dataclass(frozen=True)
class Schedule:
    """Transverse-field ramp Delta(t) from ``delta0`` down to ~0.

    ``linear`` reaches exactly zero at ``t_total``; ``exponential``
    decays geometrically to ``floor_ratio * delta0``.  The terminal
    field never exceeds 1e-6 of the initial one.
    """

    delta0: float
    t_total: float
    steps: int
    profile: str = "linear"
    floor_ratio: float = 1e-6
    time_unit: str = "natural"      # "natural" (hbar/eV) or "seconds"

    def __post_init__(self):
        if self.delta0 < 0.0:
            raise ValueError("initial transverse field must be non-negative")
        if self.t_total <= 0.0:
            raise ValueError("total time must be positive")
        if self.steps < 1:
            raise ValueError("step count must be at least 1")
        if self.profile not in ("linear", "exponential"):
            raise ValueError(f"unknown profile {self.profile!r}")
        if not 0.0 < self.floor_ratio <= 1e-6:
            raise ValueError("floor_ratio must be in (0, 1e-6]")
        if self.time_unit not in ("natural", "seconds"):
            raise ValueError(f"unknown time unit {self.time_unit!r}")

    def delta_at(self, t: float) -> float:
        x = min(max(t / self.t_total, 0.0), 1.0)
        if self.profile == "linear":
            return self.delta0 * (1.0 - x)
        return self.delta0 * self.floor_ratio**x

    @property
    def phase_scale(self) -> float:
        """Multiplier turning energy (eV) times time into a phase."""
        return 1.0 if self.time_unit == "natural" else 1.0 / CONST.hbar_ev_s


@dataclass
class EvolutionResult:
    psi: np.ndarray
    times: np.ndarray
    deltas: np.ndarray
    energies: np.ndarray


@dataclass(frozen=True)
class GroundState:
    energy: float
    states: tuple[str, ...]


def chain_model(h, j, delta0: float | None = None) -> IsingModel:
    """Open chain with per-site fields ``h`` and per-bond couplings ``j``."""
    h = np.asarray(h, dtype=float)
    j = np.atleast_1d(np.asarray(j, dtype=float))
    n = h.shape[0]
    if j.shape == (1,) and n > 2:
        j = np.full(n - 1, j[0])
    if j.shape != (max(n - 1, 0),):
        raise ValueError(f"expected {n - 1} bond couplings, got {j.shape}")
    couplings = tuple((i, i + 1, float(j[i])) for i in range(n - 1))
    return IsingModel(n, h, couplings, topology="chain", delta0=delta0)


def grid_model(rows: int, cols: int, h, j: float,
               delta0: float | None = None) -> IsingModel:
    """Rectangular nearest-neighbour grid; site index = row * cols + col."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    n = rows * cols
    h_arr = np.full(n, float(h)) if np.ndim(h) == 0 else np.asarray(h, dtype=float)
    edges = []
    for r in range(rows):
        for c in range(cols):
            s = r * cols + c
            if c + 1 < cols:
                edges.append((s, s + 1, float(j)))
            if r + 1 < rows:
                edges.append((s, s + cols, float(j)))
    return IsingModel(n, h_arr, tuple(sorted(edges)), topology=f"grid({rows}x{cols})",
                      delta0=delta0)


def maxcut_to_ising(edges, n_sites: int | None = None) -> IsingModel:
    """MAX-CUT instance as an Ising problem: J = weights, no fields.

    Positive couplings favour anti-alignment, so ground states of the
    Ising energy are maximum cuts; recover the cut size with
    :func:`cut_value`.
    """
    cleaned = []
    max_site = -1
    for (i, j, *rest) in edges:
        w = float(rest[0]) if rest else 1.0
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop on vertex {i} is not allowed")
        if w <= 0.0:
            raise ValueError(f"edge weights must be positive, got {w}")
        if i > j:
            i, j = j, i
        cleaned.append((i, j, w))
        max_site = max(max_site, j)
    n = (max_site + 1) if n_sites is None else n_sites
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    merged: dict[tuple[int, int], float] = {}
    for (i, j, w) in cleaned:
        merged[(i, j)] = merged.get((i, j), 0.0) + w
    couplings = tuple((i, j, w) for (i, j), w in sorted(merged.items()))
    return IsingModel(n, np.zeros(n), couplings, topology="arbitrary")


def cut_value(model: IsingModel, state: str) -> float:
    """Total weight of edges cut by the partition encoded in ``state``."""
    bits = _bits_from_state(model.n_sites, state)
    return sum(w for (i, j, w) in model.couplings if bits[i] != bits[j])


def _bits_from_state(n: int, state: str) -> np.ndarray:
    if len(state) != n or set(state) - {"0", "1"}:
        raise ValueError(f"state must be a {n}-character string of 0s and 1s")
    return np.array([1 if ch == "1" else 0 for ch in state], dtype=np.int8)


def state_string(n: int, index: int) -> str:
    """Basis bitstring for an amplitude index (site i at character i)."""
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n))


def diagonal_energies(model: IsingModel) -> np.ndarray:
    """Ising energy of every basis state, shape (2^n,), eV."""
    n = model.n_sites
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    spins = 1.0 - 2.0 * ((idx[:, None] >> np.arange(n)) & 1)
    energies = spins @ model.h
    for (i, j, w) in model.couplings:
        energies += w * spins[:, i] * spins[:, j]
    return energies


def initial_state(n: int) -> np.ndarray:
    """Exact ground state of the transverse term: uniform magnitude with
    alternating signs, (-1)^popcount(s) / sqrt(2^n)."""
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    parity = np.zeros(dim, dtype=np.int64)
    for i in range(n):
        parity ^= (idx >> i) & 1
    psi = np.where(parity == 0, 1.0, -1.0).astype(np.complex128)
    return psi / math.sqrt(dim)


def apply_hamiltonian(model: IsingModel, delta: float, psi: np.ndarray) -> np.ndarray:
    """Matrix-free H psi for the Hamiltonian at transverse field ``delta``."""
    n = model.n_sites
    dim = 1 << n
    psi = np.asarray(psi)
    if psi.shape != (dim,):
        raise ValueError(f"state must have shape ({dim},), got {psi.shape}")
    out = diagonal_energies(model) * psi
    if delta != 0.0:
        arr = psi.reshape((2,) * n)
        acc = out.reshape((2,) * n)
        for axis in range(n):
            acc += delta * np.flip(arr, axis=axis)
    return out


def _flip_indices(n: int) -> list[np.ndarray]:
    idx = np.arange(1 << n)
    return [idx ^ (1 << site) for site in range(n)]


def _rotate_transverse(psi: np.ndarray, flips: list[np.ndarray], theta: float) -> np.ndarray:
    """exp(-i theta sx) applied on every site (sites commute)."""
    c = math.cos(theta)
    s = -1j * math.sin(theta)
    for flip in flips:
        psi = c * psi + s * psi[flip]
    return psi


def evolve(model: IsingModel, schedule: Schedule, psi0: np.ndarray | None = None,
           record_every: int = 0) -> EvolutionResult:
    """Anneal the state under H(t) with the given schedule.

    Symmetric splitting: half a diagonal phase, the transverse rotation
    at the midpoint field, half a diagonal phase.  Deterministic for a
    given (model, schedule, initial state); the norm is preserved to
    rounding error.  ``record_every`` > 0 stores (t, Delta, <H>) every
    that many steps, plus the initial and final points.
    """
    n = model.n_sites
    dim = 1 << n
    if psi0 is None:
        psi = initial_state(n)
    else:
        psi = np.array(psi0, dtype=np.complex128)
        if psi.shape != (dim,):
            raise ValueError(f"initial state must have shape ({dim},)")
        norm = np.linalg.norm(psi)
        if norm == 0.0:
            raise ValueError("initial state must be non-zero")
        psi /= norm
    scale = schedule.phase_scale
    dt = schedule.t_total / schedule.steps
    diag = diagonal_energies(model)
    half_phase = np.exp(-0.5j * diag * dt * scale)

    times, deltas, energies = [], [], []

    def record(step: int) -> None:
        t = step * dt
        d = schedule.delta_at(t)
        e = float(np.vdot(psi, apply_hamiltonian(model, d, psi)).real)
        times.append(t)
        deltas.append(d)
        energies.append(e)

    flips = _flip_indices(n)
    if record_every > 0:
        record(0)
        for k in range(schedule.steps):
            psi *= half_phase
            theta = schedule.delta_at((k + 0.5) * dt) * dt * scale
            if theta != 0.0:
                psi = _rotate_transverse(psi, flips, theta)
            psi *= half_phase
            if (k + 1) % record_every == 0 or k + 1 == schedule.steps:
                record(k + 1)
    else:
        # merge the adjacent diagonal half-phases of consecutive steps;
        # the regrouped product is exactly the same unitary
        full_phase = half_phase * half_phase
        psi = psi * half_phase
        last = schedule.steps - 1
        for k in range(schedule.steps):
            theta = schedule.delta_at((k + 0.5) * dt) * dt * scale
            if theta != 0.0:
                psi = _rotate_transverse(psi, flips, theta)
            psi *= half_phase if k == last else full_phase
    return EvolutionResult(psi=psi, times=np.array(times), deltas=np.array(deltas),
                           energies=np.array(energies))


def measure(psi: np.ndarray, shots: int, seed: int) -> dict[str, int]:
    """Sample computational-basis bitstrings from |psi|^2.

    Reproducible for a fixed seed; returns only outcomes that occurred.
    """
    if shots < 1:
        raise ValueError("shot count must be at least 1")
    psi = np.asarray(psi)
    n = int(round(math.log2(psi.shape[0])))
    if 1 << n != psi.shape[0]:
        raise ValueError("state length must be a power of two")
    p = np.abs(psi) ** 2
    p /= p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    return {state_string(n, idx): int(c) for idx, c in enumerate(counts) if c > 0}


def brute_force_ground_state(model: IsingModel) -> GroundState:
    """Exhaustive minimum of the Ising energy; returns every minimiser.

    Independent of the annealer: plain enumeration of all 2^n spin
    assignments, limited to n <= 20.
    """
    if model.n_sites > MAX_BRUTE_FORCE_SITES:
        raise ValueError(f"brute force is limited to {MAX_BRUTE_FORCE_SITES} sites, "
                         f"got {model.n_sites}")
    energies = diagonal_energies(model)
    e_min = float(energies.min())
    tol = 1e-12 * max(1.0, abs(e_min))
    minimisers = np.flatnonzero(energies <= e_min + tol)
    return GroundState(energy=e_min,
                       states=tuple(state_string(model.n_sites, int(i))
                                    for i in minimisers))


def success_probability(model: IsingModel, psi: np.ndarray) -> float:
    """Total |amplitude|^2 carried by the exact ground-state set."""
    ground = brute_force_ground_state(model)
    p = np.abs(np.asarray(psi)) ** 2
    idx = [int(st[::-1], 2) for st in ground.states]
    return float(sum(p[i] for i in idx))


def fg_grid_model(geom: CellGeometry, mat: MaterialStack, bias: BiasSet,
                  rows: int, cols: int, n_g: float = 0.0,
                  v_cg: float | None = None) -> IsingModel:
    """Ising model of a rows x cols floating-gate array.

    Every edge carries the nearest-neighbour coupling of the three-cell
    closed form (its first adjacent pair), every site the interior-cell
    field at the supplied gate coordinate ``n_g``, and ``delta0`` is the
    tunnel amplitude (eV) at the gate voltage ``v_cg`` (defaulting to
    the first gate bias).
    """
    if rows * cols > MAX_SITES:
        raise ValueError(f"grid has {rows * cols} sites; at most {MAX_SITES} supported")
    net = build_network(geom, mat, 3)
    bias3 = bias if bias.m == 3 else BiasSet.uniform(3, bias.v_gate[0], bias.v_sub,
                                                     bias.v_rail[0])
    params = ising_parameters(reduce_network(net, bias3), n_g)
    barrier = TunnelBarrier.from_stack(geom, mat)
    v = bias3.v_gate[0] if v_cg is None else v_cg
    delta0_ev = tunnel_amplitude(geom, barrier, v) / CONST.hz_per_ev
    return grid_model(rows, cols, h=params.h[1], j=params.j[0], delta0=delta0_ev)
