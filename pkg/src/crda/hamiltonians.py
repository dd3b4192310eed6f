"""Builders for every spin Hamiltonian used by the simulation protocols.

The family tree, in physics terms:

* The driven coupled-transmon chain has a lab-frame Hamiltonian with
  single-qubit resonance terms, cosine drives, and static xx couplings.
* In the "quad frame" (drive rotation, then drive-axis rotation, then
  generalized-Rabi rotation) the chain reduces, to first order in
  Omega/delta and after a rotating-wave approximation, to the purely
  two-local cross-resonance chain H = J * sum_k x_k z_{k+1}.
* Single-qubit gate layers toggle that chain into xx/zz, xx/yy, zz/yy
  sublattice forms, whose sums realize Ising (zz), XY (xx + yy) and
  Heisenberg (xx + yy + zz) target models, plus 2D analogues built from
  one unit cell tiled over a periodic square lattice.
* "Original" variants keep the oscillating terms the rotating-wave step
  discards; the difference against the effective form is the synthesis
  defect whose norm the error analysis quantifies.

All builders return Hermitian :class:`~crda.pauli.PauliSum` objects.
1-based chain/lattice coordinates are used at this layer; conversion to
0-based mask bits happens through :class:`~crda.device.Lattice`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .device import DeviceParams, DriveConfig, Lattice, effective_coupling
from .pauli import PauliSum, PauliTerm

__all__ = [
    "HamiltonianKind",
    "TimeDependentHamiltonian",
    "build_canonical",
    "build_lab_frame",
    "lab_frame_hamiltonian",
    "rotating_frame_hamiltonian",
    "build_qf_effective",
    "build_org",
    "org_hamiltonian",
    "build_delta",
    "delta_hamiltonian",
    "translate_2d",
    "H_I_CELL_BONDS",
    "H_II_CELL_BONDS",
    "H_2D_ODD_CELL_BONDS",
]


class HamiltonianKind(Enum):
    """Registry of the named Hamiltonians, keyed by their CLI spelling."""

    LAB_FRAME = "lab"
    QF_EFFECTIVE = "qf"
    QF_EFFECTIVE_ODD = "qf_odd"
    QF_EFFECTIVE_EVEN = "qf_even"
    CONTROL = "control"
    ORG = "org"
    DELTA_H = "delta"
    H_EVEN = "h_even"
    H_ODD = "h_odd"
    H_EVEN_PRIME = "h_even_prime"
    H_ODD_PRIME = "h_odd_prime"
    H1 = "h1"
    H2 = "h2"
    H_ZZ = "h_zz"
    H_XY_1D = "h_xy"
    H_2D_ODD = "h_2d_odd"
    H_2D_EVEN = "h_2d_even"
    H_I = "h_i"
    H_II = "h_ii"
    H_XY_2D = "h_xy_2d"
    H_E = "h_e"
    H_E_PRIME = "h_e_prime"
    H_E_DOUBLE_PRIME = "h_e_double_prime"
    H_HEIS = "h_heis"
    ORG_XY = "org_xy"
    DELTA_XY = "delta_xy"
    ORG_ZZ = "org_zz"
    DELTA_ZZ = "delta_zz"


@dataclass(frozen=True)
class TimeDependentHamiltonian:
    """Sum of static Pauli sums with scalar time-dependent weights.

    ``frequencies`` lists the angular frequencies present in the weights
    so integrators can pick step sizes resolving the fastest oscillation.
    """

    n: int
    pieces: tuple[tuple[PauliSum, Callable[[float], float]], ...]
    frequencies: tuple[float, ...]

    def at(self, t: float) -> PauliSum:
        out = PauliSum.zero(self.n)
        for ps, f in self.pieces:
            out = out + f(t) * ps
        return out

    def __call__(self, t: float) -> PauliSum:
        return self.at(t)

    @property
    def max_frequency(self) -> float:
        return max((abs(f) for f in self.frequencies), default=0.0)


# ----------------------------------------------------------------------
# 1D families
# ----------------------------------------------------------------------


def _two_site(n: int, s1: int, l1: str, s2: int, l2: str, coeff: float) -> PauliTerm:
    return PauliTerm.from_sites(n, {s1: l1, s2: l2}, coeff)


def _chain_bond_family(
    lat: Lattice,
    odd: Sequence[tuple[str, str, float]],
    even: Sequence[tuple[str, str, float]],
    j: float,
) -> PauliSum:
    """Sum over chain bonds with different letters on odd/even bonds.

    Bond k joins 1-based sites (k, k+1); its parity is the parity of k.
    Entries are (letter_left, letter_right, weight).
    """
    if lat.dim != 1:
        raise ValueError("chain family requires a 1D lattice")
    if lat.periodic and (odd != even):
        lat.require_even_extents()
    n = lat.n_sites
    terms = []
    for k, kp in lat.bonds_1d():
        for l1, l2, w in odd if k % 2 == 1 else even:
            terms.append(
                _two_site(n, lat.site_index(k), l1, lat.site_index(kp), l2, j * w)
            )
    if not terms:
        return PauliSum.zero(n)
    return PauliSum.from_terms(terms)


def _control_chain(lat: Lattice, j: float, phi: float) -> PauliSum:
    """Cross-resonance chain J * sum x_k (z cos(phi) - y sin(phi))_{k+1}."""
    spec = []
    if abs(math.cos(phi)) > 0:
        spec.append(("X", "Z", math.cos(phi)))
    if abs(math.sin(phi)) > 0:
        spec.append(("X", "Y", -math.sin(phi)))
    return _chain_bond_family(lat, spec, spec, j)


def _qf_sublattice(lat: Lattice, j: float, phi: float, parity: int) -> PauliSum:
    """x_k (x cos(phi) + y sin(phi))_{k+1} on bonds of the given parity."""
    spec = []
    if abs(math.cos(phi)) > 0:
        spec.append(("X", "X", math.cos(phi)))
    if abs(math.sin(phi)) > 0:
        spec.append(("X", "Y", math.sin(phi)))
    empty: list[tuple[str, str, float]] = []
    if parity == 1:
        return _chain_bond_family(lat, spec, empty, j)
    return _chain_bond_family(lat, empty, spec, j)


# ----------------------------------------------------------------------
# 2D families
# ----------------------------------------------------------------------

# Unit-cell bond tables. Offsets are relative to the cell anchor
# (2i - 1, 2j - 1); each entry is (letter, site_a_offset, site_b_offset).
H_I_CELL_BONDS: tuple[tuple[str, tuple[int, int], tuple[int, int]], ...] = (
    ("X", (0, 0), (1, 0)),
    ("Y", (1, 0), (2, 0)),
    ("Y", (0, 1), (1, 1)),
    ("X", (1, 1), (2, 1)),
    ("X", (0, 0), (0, 1)),
    ("Y", (1, 0), (1, 1)),
    ("Y", (0, 1), (0, 2)),
    ("X", (1, 1), (1, 2)),
)

# The companion decomposition swaps the Pauli letter on every bond.
H_II_CELL_BONDS: tuple[tuple[str, tuple[int, int], tuple[int, int]], ...] = tuple(
    ({"X": "Y", "Y": "X"}[letter], a, b) for letter, a, b in H_I_CELL_BONDS
)

# Native 2D cross-resonance cell: z-stars on the (odd, odd) and
# (even, even) sites, x-stars on the mixed-parity sites.
H_2D_ODD_CELL_BONDS: tuple[tuple[str, tuple[int, int], tuple[int, int]], ...] = (
    ("Z", (0, 0), (0, 1)),
    ("Z", (0, 0), (1, 0)),
    ("Z", (1, 1), (1, 2)),
    ("Z", (1, 1), (2, 1)),
    ("X", (0, 1), (0, 2)),
    ("X", (0, 1), (1, 1)),
    ("X", (1, 0), (1, 1)),
    ("X", (1, 0), (2, 0)),
)


def _cell_anchor_range(lat: Lattice) -> tuple[range, range]:
    if lat.periodic:
        lat.require_even_extents()
        return range(1, lat.nx // 2 + 1), range(1, lat.ny // 2 + 1)
    return range(1, (lat.nx + 1) // 2 + 1), range(1, (lat.ny + 1) // 2 + 1)


def cell_terms(
    lat: Lattice,
    i: int,
    j: int,
    bonds: Sequence[tuple[str, tuple[int, int], tuple[int, int]]],
    coupling: float,
    letter_map: dict[str, str] | None = None,
) -> list[PauliTerm]:
    """Terms of one unit cell anchored at cell coordinates (i, j).

    On open lattices, bonds reaching outside the lattice are dropped.
    """
    n = lat.n_sites
    ai, aj = 2 * i - 1, 2 * j - 1
    out = []
    for letter, (d1i, d1j), (d2i, d2j) in bonds:
        s1 = (ai + d1i, aj + d1j)
        s2 = (ai + d2i, aj + d2j)
        if not (lat.in_range(*s1) and lat.in_range(*s2)):
            continue
        if letter_map:
            letter = letter_map[letter]
        out.append(
            _two_site(n, lat.site_index(*s1), letter, lat.site_index(*s2), letter, coupling)
        )
    return out


def _tile_2d(
    lat: Lattice,
    bonds: Sequence[tuple[str, tuple[int, int], tuple[int, int]]],
    j: float,
    letter_map: dict[str, str] | None = None,
) -> PauliSum:
    if lat.dim != 2:
        raise ValueError("2D family requires a 2D lattice")
    ri, rj = _cell_anchor_range(lat)
    terms = []
    for jj in rj:
        for ii in ri:
            terms.extend(cell_terms(lat, ii, jj, bonds, j, letter_map))
    if not terms:
        return PauliSum.zero(lat.n_sites)
    return PauliSum.from_terms(terms)


def translate_2d(h: PauliSum, lat: Lattice, di: int, dj: int) -> PauliSum:
    """Rigid translation of an operator on a periodic 2D lattice."""
    if lat.dim != 2 or not lat.periodic:
        raise ValueError("translation requires a periodic 2D lattice")
    perm = {}
    for idx in range(lat.n_sites):
        i = idx % lat.nx + 1
        j = idx // lat.nx + 1
        perm[idx] = lat.site_index(i + di, j + dj)
    acc: dict[tuple[int, int], complex] = {}
    for t in h.terms():
        x = z = 0
        for k in range(h.n):
            x |= ((t.x >> k) & 1) << perm[k]
            z |= ((t.z >> k) & 1) << perm[k]
        acc[(x, z)] = acc.get((x, z), 0.0) + t.coeff
    return PauliSum(h.n, acc)


# ----------------------------------------------------------------------
# canonical (time-independent) dispatch
# ----------------------------------------------------------------------


def build_canonical(
    kind: HamiltonianKind,
    lat: Lattice,
    j: float = 1.0,
    phi: float = 0.0,
) -> PauliSum:
    """Construct a time-independent family member on the given lattice.

    ``phi`` enters only the drive-phase-sensitive forms (the control
    chain and the single-sublattice cross-resonance chains); everything
    else fixes phi = 0.
    """
    K = HamiltonianKind
    b = _chain_bond_family
    if kind in (K.CONTROL, K.QF_EFFECTIVE):
        return _control_chain(lat, j, phi)
    if kind is K.QF_EFFECTIVE_ODD:
        return _qf_sublattice(lat, j, phi, parity=1)
    if kind is K.QF_EFFECTIVE_EVEN:
        return _qf_sublattice(lat, j, phi, parity=0)
    zz = [("Z", "Z", 1.0)]
    xx = [("X", "X", 1.0)]
    yy = [("Y", "Y", 1.0)]
    none: list[tuple[str, str, float]] = []
    if kind is K.H1:
        return b(lat, zz, none, j)
    if kind is K.H2:
        return b(lat, none, zz, j)
    if kind is K.H_ZZ:
        return b(lat, zz, zz, j)
    if kind in (K.H_EVEN, K.H_E):
        return b(lat, xx, zz, j)
    if kind is K.H_ODD:
        return b(lat, zz, xx, j)
    if kind is K.H_EVEN_PRIME:
        return b(lat, xx, yy, j)
    if kind in (K.H_ODD_PRIME, K.H_E_DOUBLE_PRIME):
        return b(lat, yy, xx, j)
    if kind is K.H_E_PRIME:
        return b(lat, zz, yy, j)
    if kind is K.H_XY_1D:
        return b(lat, xx + yy, xx + yy, j)
    if kind is K.H_HEIS:
        return b(lat, xx + yy + zz, xx + yy + zz, j)
    if kind is K.H_2D_ODD:
        return _tile_2d(lat, H_2D_ODD_CELL_BONDS, j)
    if kind is K.H_2D_EVEN:
        return _tile_2d(lat, H_2D_ODD_CELL_BONDS, j, letter_map={"Z": "X", "X": "Z"})
    if kind is K.H_I:
        return _tile_2d(lat, H_I_CELL_BONDS, j)
    if kind is K.H_II:
        return _tile_2d(lat, H_II_CELL_BONDS, j)
    if kind is K.H_XY_2D:
        return _tile_2d(lat, H_I_CELL_BONDS, j) + _tile_2d(lat, H_II_CELL_BONDS, j)
    raise ValueError(f"{kind} is not a time-independent family member")


# ----------------------------------------------------------------------
# lab and rotating frames (time-dependent)
# ----------------------------------------------------------------------


def lab_frame_hamiltonian(p: DeviceParams) -> TimeDependentHamiltonian:
    """Driven coupled chain in the laboratory frame.

    sum_k [omega_q_k z_k / 2 + Omega_k cos(omega_k t + phi_k) x_k]
    + sum_k g_k x_k x_{k+1} / 2.
    """
    n = p.n
    static: PauliSum = PauliSum.zero(n)
    for k in range(n):
        if p.omega_q[k] != 0.0:
            static = static + PauliSum.from_sites(n, {k: "Z"}, 0.5 * p.omega_q[k])
    for k in range(n - 1):
        if p.g[k] != 0.0:
            static = static + PauliSum.from_sites(
                n, {k: "X", k + 1: "X"}, 0.5 * p.g[k]
            )
    pieces: list[tuple[PauliSum, Callable[[float], float]]] = []
    freqs: list[float] = []
    if not static.is_zero():
        pieces.append((static, lambda t: 1.0))
    for k in range(n):
        if p.Omega[k] == 0.0:
            continue
        w, ph = float(p.omega[k]), float(p.phi[k])
        pieces.append(
            (
                PauliSum.from_sites(n, {k: "X"}, float(p.Omega[k])),
                lambda t, w=w, ph=ph: math.cos(w * t + ph),
            )
        )
        freqs.append(w)
    return TimeDependentHamiltonian(n, tuple(pieces), tuple(freqs))


def build_lab_frame(p: DeviceParams, t: float) -> PauliSum:
    return lab_frame_hamiltonian(p).at(t)


def rotating_frame_hamiltonian(p: DeviceParams) -> TimeDependentHamiltonian:
    """Chain in the frame co-rotating with every drive, fast terms dropped.

    Keeps the detuning and drive terms plus the flip-flop coupling with
    the slow relative phase phi_k(t) = (omega_k - omega_{k+1}) t + phi_k - phi_{k+1};
    the counter-rotating double-frequency terms are discarded.
    """
    n = p.n
    static = PauliSum.zero(n)
    for k in range(n):
        if p.delta[k] != 0.0:
            static = static + PauliSum.from_sites(n, {k: "Z"}, 0.5 * p.delta[k])
        if p.Omega[k] != 0.0:
            static = static + PauliSum.from_sites(n, {k: "X"}, 0.5 * p.Omega[k])
    pieces: list[tuple[PauliSum, Callable[[float], float]]] = []
    freqs: list[float] = []
    if not static.is_zero():
        pieces.append((static, lambda t: 1.0))
    for k in range(n - 1):
        if p.g[k] == 0.0:
            continue
        a = float(p.omega[k] - p.omega[k + 1])
        b = float(p.phi[k] - p.phi[k + 1])
        w = 0.25 * p.g[k]
        sym = PauliSum.from_sites(n, {k: "X", k + 1: "X"}, w) + PauliSum.from_sites(
            n, {k: "Y", k + 1: "Y"}, w
        )
        asym = PauliSum.from_sites(n, {k: "X", k + 1: "Y"}, w) - PauliSum.from_sites(
            n, {k: "Y", k + 1: "X"}, w
        )
        pieces.append((sym, lambda t, a=a, b=b: math.cos(a * t + b)))
        pieces.append((asym, lambda t, a=a, b=b: math.sin(a * t + b)))
        freqs.append(a)
    return TimeDependentHamiltonian(n, tuple(pieces), tuple(freqs))


# ----------------------------------------------------------------------
# quad-frame effective chain from device parameters
# ----------------------------------------------------------------------


def build_qf_effective(
    p: DeviceParams, drive: DriveConfig = DriveConfig.ALL
) -> PauliSum:
    """First-order effective chain in the quad frame for a drive layout.

    All-driven: sum_k J_k x_k (z cos - y sin)(phi_k - phi_{k+1}) with the
    signed J_k = -g_k Omega_k / (4 delta_k).

    Single-sublattice driving against undriven targets instead yields
    sum over driven bonds of (g Omega / 4 delta) x_k (x cos(phi_k) + y sin(phi_k))
    on the target site; the undriven-target frame flips the sign
    convention relative to the all-driven case. Targets must carry
    Omega = 0 and zero detuning.
    """
    n = p.n
    terms: list[PauliTerm] = []
    if drive is DriveConfig.ALL:
        for k in range(n - 1):
            jk = effective_coupling(p, k + 1)
            if jk == 0.0:
                continue
            dphi = float(p.phi[k] - p.phi[k + 1])
            c, s = math.cos(dphi), math.sin(dphi)
            if c != 0.0:
                terms.append(_two_site(n, k, "X", k + 1, "Z", jk * c))
            if s != 0.0:
                terms.append(_two_site(n, k, "X", k + 1, "Y", -jk * s))
    else:
        control_parity = 1 if drive is DriveConfig.ODD else 0
        for k in range(n):
            site = k + 1
            if site % 2 != control_parity % 2 and p.is_driven(k):
                raise ValueError(
                    f"qubit {site} is driven but assigned a target role"
                )
        for k in range(n - 1):
            site = k + 1
            if site % 2 != control_parity % 2:
                continue
            if not p.is_driven(k):
                continue
            if p.delta[k + 1] != 0.0 or p.Omega[k + 1] != 0.0:
                raise ValueError(
                    f"target qubit {site + 1} must be undriven with zero detuning"
                )
            jk = float(p.g[k] * p.Omega[k] / (4.0 * p.delta[k]))
            ph = float(p.phi[k])
            c, s = math.cos(ph), math.sin(ph)
            if c != 0.0:
                terms.append(_two_site(n, k, "X", k + 1, "X", jk * c))
            if s != 0.0:
                terms.append(_two_site(n, k, "X", k + 1, "Y", jk * s))
    if not terms:
        return PauliSum.zero(n)
    return PauliSum.from_terms(terms)


# ----------------------------------------------------------------------
# original (pre-RWA) Hamiltonians and synthesis defects
# ----------------------------------------------------------------------


def _uniform_quantities(p: DeviceParams) -> tuple[int, float, float, float, float]:
    g, delta, Omega = p.uniform()
    if delta == 0.0:
        raise ZeroDivisionError("uniform chain has zero detuning")
    j_signed = -g * Omega / (4.0 * delta)
    return p.n, g, delta, Omega, j_signed


def _chain_sum(n: int, pairs: Sequence[tuple[str, str, float]]) -> PauliSum:
    terms = [
        _two_site(n, k, l1, k + 1, l2, w)
        for k in range(n - 1)
        for (l1, l2, w) in pairs
    ]
    return PauliSum.from_terms(terms) if terms else PauliSum.zero(n)


def org_hamiltonian(
    kind: HamiltonianKind,
    p: DeviceParams,
    varphi: Callable[[float], float] | None = None,
) -> TimeDependentHamiltonian:
    """Time-dependent original Hamiltonian for a uniform chain.

    ``kind`` selects the frame: the bare quad-frame chain, or its XY- and
    ZZ-protocol toggled counterparts. ``varphi`` is the target-qubit
    frame phase entering the ZZ form; it defaults to delta * t.
    """
    n, g, delta, Omega, j_signed = _uniform_quantities(p)
    r = Omega / delta
    q = 0.25 * g
    K = HamiltonianKind

    def cosd(t: float) -> float:
        return math.cos(delta * t)

    def sind(t: float) -> float:
        return math.sin(delta * t)

    def cos2d(t: float) -> float:
        return math.cos(2.0 * delta * t)

    def sin2d(t: float) -> float:
        return math.sin(2.0 * delta * t)

    if kind is K.ORG:
        pieces = (
            (_chain_sum(n, [("Z", "Z", q), ("Y", "Y", q)]), cosd),
            (_chain_sum(n, [("Y", "Z", q), ("Z", "Y", -q)]), sind),
            (_chain_sum(n, [("X", "Z", j_signed)]), lambda t: 1.0),
            (_chain_sum(n, [("Z", "X", -q * r)]), cos2d),
            (_chain_sum(n, [("Y", "X", -q * r)]), sin2d),
        )
        return TimeDependentHamiltonian(n, pieces, (delta, 2 * delta))

    if kind is K.ORG_XY:
        pieces = (
            (_chain_sum(n, [("X", "X", j_signed), ("Y", "Y", j_signed)]), lambda t: 1.0),
            (_chain_sum(n, [("X", "Y", q), ("Y", "X", q), ("Z", "Z", -2 * q)]), cosd),
            (
                _chain_sum(
                    n, [("Z", "Y", q), ("Z", "X", -q), ("X", "Z", q), ("Y", "Z", -q)]
                ),
                sind,
            ),
            (_chain_sum(n, [("Z", "Y", q * r), ("Z", "X", -q * r)]), sin2d),
            (_chain_sum(n, [("Y", "Y", -q * r), ("X", "X", -q * r)]), cos2d),
        )
        return TimeDependentHamiltonian(n, pieces, (delta, 2 * delta))

    if kind is K.ORG_ZZ:
        if varphi is None:
            varphi = lambda t: delta * t  # noqa: E731
        j_plus = g * Omega / (4.0 * delta)
        pieces = (
            (_chain_sum(n, [("Z", "Z", j_plus)]), lambda t: 1.0),
            (_chain_sum(n, [("X", "Z", -q), ("Y", "Y", q)]), cosd),
            (_chain_sum(n, [("Y", "Z", q), ("X", "Y", q)]), sind),
            (
                _chain_sum(n, [("Z", "Z", q * r)]),
                lambda t: math.cos(varphi(t)),
            ),
            (
                _chain_sum(n, [("Z", "X", -q), ("Y", "Y", q)]),
                lambda t: math.cos(varphi(t)) * cosd(t),
            ),
            (
                _chain_sum(n, [("Z", "Y", q), ("Y", "X", q)]),
                lambda t: math.cos(varphi(t)) * sind(t),
            ),
            (
                _chain_sum(n, [("Y", "Z", q * r)]),
                lambda t: math.sin(varphi(t)),
            ),
            (
                _chain_sum(n, [("Z", "Y", -q), ("Y", "X", -q)]),
                lambda t: math.sin(varphi(t)) * cosd(t),
            ),
            (
                _chain_sum(n, [("Z", "X", -q), ("Y", "Y", q)]),
                lambda t: math.sin(varphi(t)) * sind(t),
            ),
        )
        return TimeDependentHamiltonian(n, pieces, (delta, 2 * delta))

    raise ValueError(f"{kind} is not an original-Hamiltonian kind")


def build_org(
    kind: HamiltonianKind,
    p: DeviceParams,
    t: float,
    varphi: Callable[[float], float] | None = None,
) -> PauliSum:
    return org_hamiltonian(kind, p, varphi).at(t)


_DELTA_OF = {
    HamiltonianKind.DELTA_H: (HamiltonianKind.ORG, HamiltonianKind.CONTROL, -1.0),
    HamiltonianKind.DELTA_XY: (HamiltonianKind.ORG_XY, HamiltonianKind.H_XY_1D, -1.0),
    HamiltonianKind.DELTA_ZZ: (HamiltonianKind.ORG_ZZ, HamiltonianKind.H_ZZ, +1.0),
}


def delta_hamiltonian(
    kind: HamiltonianKind,
    p: DeviceParams,
    varphi: Callable[[float], float] | None = None,
) -> TimeDependentHamiltonian:
    """Synthesis defect: the original Hamiltonian minus its effective model.

    The subtracted effective model carries the frame-appropriate signed
    coupling: -g Omega / (4 delta) for the control and XY frames,
    +g Omega / (4 delta) for the ZZ frame.
    """
    if kind not in _DELTA_OF:
        raise ValueError(f"{kind} is not a synthesis-defect kind")
    org_kind, eff_kind, sign = _DELTA_OF[kind]
    n, g, delta, Omega, _ = _uniform_quantities(p)
    org = org_hamiltonian(org_kind, p, varphi)
    j_eff = sign * (g * Omega / (4.0 * delta))
    eff = build_canonical(eff_kind, Lattice.chain(n), j=j_eff)
    pieces = org.pieces + ((eff, lambda t: -1.0),)
    return TimeDependentHamiltonian(n, pieces, org.frequencies)


def build_delta(
    kind: HamiltonianKind,
    p: DeviceParams,
    t: float,
    varphi: Callable[[float], float] | None = None,
) -> PauliSum:
    return delta_hamiltonian(kind, p, varphi).at(t)
