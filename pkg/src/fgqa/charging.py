"""Charging energy of a coupled floating-gate row and its Ising reduction.

With every branch capacitance fixed, the electrostatic energy of a row
holding ``n_i`` extra electron charges on FG_i is a quadratic form in
the island charges.  The islands couple only to nearest neighbours
(through ``c_fg``), so the island capacitance matrix is tridiagonal and
the constrained minimum over all branch charges can be written down by
sequential elimination:

    U(n) = (e^2/2) * sum_i  y_i^2 / c_eff_i  -  sum_i w_i / 2

    y_1 = nt_1,   y_i = nt_i + (c_fg_{i-1} / c_eff_{i-1}) y_{i-1}
    nt_i = n_i + q_offset_i / e

where ``c_eff_i`` are the elimination pivots of the island matrix,
``q_offset_i`` collects the bias-induced charge on every branch of
island i, and ``w_i`` the corresponding quadratic bias terms.  The same
energy is recovered numerically by :func:`minimize_charge_oracle`,
which solves the original constrained quadratic programme over all
branch charges exactly (a KKT linear system).

Near the degeneracy point between ``n_i`` and ``n_i + 1`` electrons the
two charge states form a qubit, and expanding the quadratic form on
that two-state space yields longitudinal fields ``h_i``, couplings
``J_ij`` and the two figures of merit

    U_h : charging-energy height at the degeneracy point (eV),
    U_w : gate-voltage spacing between adjacent degeneracies (V),

computed by :func:`ising_parameters`.  The closed forms here cover
exactly three cells; longer rows go through the numeric oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cells import BiasSet, CapacitanceNetwork
from .constants import CONST

__all__ = [
    "ReducedChargingForm",
    "IsingParameters",
    "BranchCharges",
    "reduce_network",
    "charging_energy",
    "effective_gate_charge",
    "minimize_charge_oracle",
    "solve_branch_charges",
    "ising_parameters",
    "parabola_family",
    "parabola_crossings",
]

_E = CONST.electron_charge


@dataclass(frozen=True, eq=False)
class ReducedChargingForm:
    """Closed-form data of the three-cell charging energy.

    c_eff     elimination pivots of the island capacitance matrix (F);
              positive for any physical network.
    q_offset  bias-induced offset charge per island (C), summing C*V
              over every voltage-connected branch of the island,
              including the diagonal couplings to the neighbouring
              control gates.
    w_bias    per-island sum of C*V^2 over the same branches (J).
    """

    c_eff: np.ndarray
    q_offset: np.ndarray
    w_bias: np.ndarray
    network: CapacitanceNetwork

    def __post_init__(self):
        for name in ("c_eff", "q_offset", "w_bias"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.c_eff <= 0.0):
            raise ValueError("elimination pivots must be positive; the network is "
                             "not physical")


@dataclass(frozen=True)
class IsingParameters:
    """Two-level expansion coefficients of the charging energy.

    ``h`` (eV, one per cell) and ``j`` (eV, one per adjacent pair) are
    the longitudinal fields and couplings; ``const`` (eV) absorbs every
    occupation-independent term, so energy differences between charge
    states never depend on it.  ``u_h`` is the charging-energy height
    (eV) and ``u_w`` the gate-voltage period (V) of the first cell.
    """

    h: tuple[float, float, float]
    j: tuple[float, float]
    const: float
    u_h: float
    u_w: float


@dataclass(frozen=True, eq=False)
class BranchCharges:
    """Solved branch charges (C) of the constrained minimisation."""

    q_gate: np.ndarray
    q_sub: np.ndarray
    q_fg: np.ndarray
    q_gate_left: np.ndarray
    q_gate_right: np.ndarray
    q_source: np.ndarray
    q_drain: np.ndarray

    def island_charge(self) -> np.ndarray:
        """Net charge per island implied by the branch orientation (C)."""
        m = self.q_gate.shape[0]
        q = -(self.q_gate + self.q_sub + self.q_gate_left + self.q_gate_right
              + self.q_source + self.q_drain)
        q -= self.q_fg
        q[1:] += self.q_fg[:m - 1]
        return q


def _offsets(net: CapacitanceNetwork, bias: BiasSet) -> tuple[np.ndarray, np.ndarray]:
    """Per-island bias offset charge (C) and quadratic bias term (J)."""
    m = net.m
    vg = np.asarray(bias.v_gate)
    vr = np.asarray(bias.v_rail)
    vg_left = np.r_[0.0, vg[:m - 1]]
    vg_right = np.r_[vg[1:], 0.0]
    q = (net.c_gate * vg + net.c_sub * bias.v_sub
         + net.c_gate_left * vg_left + net.c_gate_right * vg_right
         + net.c_source * vr[:m] + net.c_drain * vr[1:])
    w = (net.c_gate * vg**2 + net.c_sub * bias.v_sub**2
         + net.c_gate_left * vg_left**2 + net.c_gate_right * vg_right**2
         + net.c_source * vr[:m]**2 + net.c_drain * vr[1:]**2)
    return q, w


def reduce_network(net: CapacitanceNetwork, bias: BiasSet) -> ReducedChargingForm:
    """Reduce a three-cell network to its closed-form charging data.

    The pivots follow the elimination recursion

        c_eff_1 = (sum of all branches on island 1)
        c_eff_i = (sum of all branches on island i) - c_fg_{i-1}^2 / c_eff_{i-1}

    Only the three-cell row is supported in closed form; use
    :func:`minimize_charge_oracle` for other lengths.
    """
    if net.m != 3:
        raise ValueError(f"closed-form reduction covers exactly 3 cells, got {net.m}; "
                         "use minimize_charge_oracle for other row lengths")
    if bias.m != net.m:
        raise ValueError("bias and network cell counts differ")
    sigma = (net.c_gate + net.c_sub + net.c_fg + net.c_gate_left
             + net.c_gate_right + net.c_source + net.c_drain)
    c_eff = np.empty(3)
    c_eff[0] = sigma[0]
    for i in (1, 2):
        if c_eff[i - 1] <= 0.0:
            raise ValueError("non-physical network: elimination pivot is not positive")
        c_eff[i] = sigma[i] + net.c_fg[i - 1] - net.c_fg[i - 1]**2 / c_eff[i - 1]
    q_offset, w_bias = _offsets(net, bias)
    return ReducedChargingForm(c_eff=c_eff, q_offset=q_offset, w_bias=w_bias,
                               network=net)


def charging_energy(form: ReducedChargingForm, n) -> float:
    """Minimum electrostatic energy (eV) at integer occupation ``n``.

    Exact: agrees with :func:`minimize_charge_oracle` to rounding error
    for any bias and occupation.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"expected 3 occupation numbers, got shape {n.shape}")
    nt = n + form.q_offset / _E
    c_fg = form.network.c_fg
    y = np.empty(3)
    y[0] = nt[0]
    y[1] = nt[1] + c_fg[0] / form.c_eff[0] * y[0]
    y[2] = nt[2] + c_fg[1] / form.c_eff[1] * y[1]
    u_j = 0.5 * _E**2 * np.sum(y**2 / form.c_eff) - 0.5 * np.sum(form.w_bias)
    return u_j / _E


def effective_gate_charge(form: ReducedChargingForm, n) -> np.ndarray:
    """Dimensionless gate coordinate per cell, zero at the n/(n+1) degeneracy.

    n_G_i = n_i + 1/2 + q_offset_i / e; the parabolas of ``n_i`` and
    ``n_i + 1`` electrons cross exactly at n_G_i = 0.
    """
    n = np.asarray(n, dtype=float)
    return n + 0.5 + form.q_offset / _E


def _branch_table(net: CapacitanceNetwork, bias: BiasSet):
    """Enumerate existing branches as (capacitance, bias voltage, incidence).

    Incidence maps island index -> orientation sign in the charge
    constraint.  Voltage-connected branches enter their island with -1;
    the FG-FG branch between islands i and i+1 enters them with -1/+1.
    """
    m = net.m
    vg = bias.v_gate
    vr = bias.v_rail
    branches = []
    for i in range(m):
        branches.append((net.c_gate[i], vg[i], {i: -1.0}))
        branches.append((net.c_sub[i], bias.v_sub, {i: -1.0}))
        branches.append((net.c_source[i], vr[i], {i: -1.0}))
        branches.append((net.c_drain[i], vr[i + 1], {i: -1.0}))
        if i > 0 and net.c_gate_left[i] > 0.0:
            branches.append((net.c_gate_left[i], vg[i - 1], {i: -1.0}))
        if i < m - 1 and net.c_gate_right[i] > 0.0:
            branches.append((net.c_gate_right[i], vg[i + 1], {i: -1.0}))
        if i < m - 1 and net.c_fg[i] > 0.0:
            branches.append((net.c_fg[i], None, {i: -1.0, i + 1: 1.0}))
    return [b for b in branches if b[0] > 0.0]


def solve_branch_charges(net: CapacitanceNetwork, bias: BiasSet, n) -> BranchCharges:
    """Branch charges minimising the network energy at fixed occupation."""
    q, _ = _solve_kkt(net, bias, n)
    m = net.m
    out = {name: np.zeros(m) for name in
           ("q_gate", "q_sub", "q_fg", "q_gate_left", "q_gate_right",
            "q_source", "q_drain")}
    for (value, (kind, i)) in zip(q, _branch_labels(net)):
        out[kind][i] = value
    return BranchCharges(**out)


def _branch_labels(net: CapacitanceNetwork):
    m = net.m
    labels = []
    for i in range(m):
        labels.append(("q_gate", i))
        labels.append(("q_sub", i))
        labels.append(("q_source", i))
        labels.append(("q_drain", i))
        if i > 0 and net.c_gate_left[i] > 0.0:
            labels.append(("q_gate_left", i))
        if i < m - 1 and net.c_gate_right[i] > 0.0:
            labels.append(("q_gate_right", i))
        if i < m - 1 and net.c_fg[i] > 0.0:
            labels.append(("q_fg", i))
    return labels


def _solve_kkt(net: CapacitanceNetwork, bias: BiasSet, n):
    n = np.asarray(n, dtype=float)
    m = net.m
    if n.shape != (m,):
        raise ValueError(f"expected {m} occupation numbers, got shape {n.shape}")
    if bias.m != m:
        raise ValueError("bias and network cell counts differ")
    branches = _branch_table(net, bias)
    nb = len(branches)
    kkt = np.zeros((nb + m, nb + m))
    rhs = np.zeros(nb + m)
    for b, (cap, volt, incidence) in enumerate(branches):
        kkt[b, b] = 1.0 / cap
        rhs[b] = 0.0 if volt is None else volt
        for isl, sign in incidence.items():
            kkt[b, nb + isl] = -sign
            kkt[nb + isl, b] = sign
    rhs[nb:] = n * _E
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular charge-constraint system (non-physical "
                         f"network): {exc}") from exc
    return sol[:nb], branches


def minimize_charge_oracle(net: CapacitanceNetwork, bias: BiasSet, n) -> float:
    """Charging energy (eV) by direct constrained minimisation.

    Minimises sum(q^2 / 2C) - sum(q V) over all branch charges subject
    to the per-island charge constraints, by an exact solve of the KKT
    linear system.  Works for any row length; serves as the independent
    cross-check of :func:`charging_energy`.
    """
    q, branches = _solve_kkt(net, bias, n)
    u = 0.0
    for value, (cap, volt, _) in zip(q, branches):
        u += value**2 / (2.0 * cap)
        if volt is not None:
            u -= value * volt
    return u / _E


def ising_parameters(form: ReducedChargingForm, n_g) -> IsingParameters:
    """Two-level expansion of the three-cell charging energy.

    ``n_g`` are the per-cell gate coordinates (dimensionless, small near
    the working point).  The couplings are

        J_{i,i+1} = e^2 c_fg_i / (4 c_eff_i c_eff_{i+1})

    and the fields keep the second-order closed form, whose
    neighbour terms for the interior cell carry the denominator
    c_eff_i * c_eff_{i+1} of the downstream pair.
    """
    g = np.asarray(n_g, dtype=float)
    if g.shape == ():
        g = np.full(3, float(g))
    if g.shape != (3,):
        raise ValueError(f"expected 3 gate coordinates, got shape {g.shape}")
    d = form.c_eff
    c_fg = form.network.c_fg
    r0 = c_fg[0]**2 / (d[0] * d[1])
    r1 = c_fg[1]**2 / (d[1] * d[2])

    a = np.array([_E / (2.0 * d[0]) * (1.0 + r0),
                  _E / (2.0 * d[1]) * (1.0 + r1),
                  _E / (2.0 * d[2])])
    h = (a[0] * g[0] + _E * c_fg[0] * g[1] / (2.0 * d[0] * d[1]),
         a[1] * g[1] + _E * (c_fg[0] * g[0] + c_fg[1] * g[2]) / (2.0 * d[1] * d[2]),
         a[2] * g[2] + _E * c_fg[1] * g[1] / (2.0 * d[1] * d[2]))
    j = (_E * c_fg[0] / (4.0 * d[0] * d[1]),
         _E * c_fg[1] / (4.0 * d[1] * d[2]))
    const = float(np.sum(a * (g**2 + 0.25)) - np.sum(form.w_bias) / (2.0 * _E)
                  + _E * c_fg[0] * g[0] * g[1] / (d[0] * d[1])
                  + _E * c_fg[1] * g[1] * g[2] / (d[1] * d[2]))
    u_h = _E / (8.0 * d[0]) * (1.0 + r0)
    u_w = _E / form.network.c_gate[0]
    return IsingParameters(h=tuple(float(x) for x in h),
                           j=(float(j[0]), float(j[1])),
                           const=const, u_h=float(u_h), u_w=float(u_w))


def _sweep_bias(net: CapacitanceNetwork, v: float, v_gate2: float, v_sub: float,
                tie_third: bool, v_rail: float) -> BiasSet:
    v3 = v if tie_third else v_gate2
    return BiasSet((v, v_gate2, v3), v_sub, (v_rail,) * (net.m + 1))


def parabola_family(net: CapacitanceNetwork, v_gate_values, n_values,
                    cell: int = 0, v_gate2: float = 0.0, v_sub: float = 0.0,
                    tie_third: bool = True, v_rail: float = 0.0):
    """Single-cell charging parabolas versus the swept gate voltage.

    For each occupation ``n`` the branch energy of the chosen cell is
    the convex parabola  U_n(V) = A_cell (n + q_offset(V)/e)^2  with the
    cell's closed-form quadratic coefficient.  Adjacent-``n`` branches
    cross exactly once per gate-voltage period; the crossings sit at
    n_G = 0 and are spaced by U_w.  The third gate tracks the swept one
    by default (``tie_third``), matching the usual symmetric drive.

    Returns ``(v_grid, {n: energies_eV})``.
    """
    v_grid = np.asarray(v_gate_values, dtype=float)
    n_list = [int(n) for n in n_values]
    if v_grid.size == 0 or not n_list:
        raise ValueError("empty sweep range")
    if not 0 <= cell < 3:
        raise ValueError("cell index must be 0, 1 or 2")
    curves = {n: np.empty(v_grid.size) for n in n_list}
    for k, v in enumerate(v_grid):
        form = reduce_network(net, _sweep_bias(net, v, v_gate2, v_sub, tie_third, v_rail))
        d = form.c_eff
        c_fg = net.c_fg
        if cell < 2:
            a = _E / (2.0 * d[cell]) * (1.0 + c_fg[cell]**2 / (d[cell] * d[cell + 1]))
        else:
            a = _E / (2.0 * d[2])
        nt0 = form.q_offset[cell] / _E
        for n in n_list:
            curves[n][k] = a * (n + nt0)**2
    return v_grid, curves


def parabola_crossings(net: CapacitanceNetwork, n_values, cell: int = 0,
                       v_gate2: float = 0.0, v_sub: float = 0.0,
                       tie_third: bool = True, v_rail: float = 0.0) -> np.ndarray:
    """Gate voltages where the ``n`` and ``n+1`` parabolas of a cell cross.

    The offset charge is affine in the swept voltage, so each crossing
    solves  n + 1/2 + q_offset(V)/e = 0  exactly; consecutive crossings
    are spaced by the gate-voltage period U_w of the swept cell.
    """
    f0 = reduce_network(net, _sweep_bias(net, 0.0, v_gate2, v_sub, tie_third, v_rail))
    f1 = reduce_network(net, _sweep_bias(net, 1.0, v_gate2, v_sub, tie_third, v_rail))
    q0 = f0.q_offset[cell]
    slope = f1.q_offset[cell] - q0
    if slope == 0.0:
        raise ValueError("swept gate does not couple to the requested cell")
    return np.array([-(_E * (n + 0.5) + q0) / slope for n in n_values])
