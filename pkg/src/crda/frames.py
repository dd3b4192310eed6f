"""Single-qubit gate layers, symbolic toggling, and frame verification.

A gate layer is one single-qubit unitary repeated over a site subset.
The layers used here are Clifford-like on Pauli strings (including the
axis-cycling rotation about (x+y+z)/sqrt(3)), so conjugating a Pauli sum
maps strings to signed strings exactly; :func:`toggle` performs that
symbolically without any matrices.

The module also carries the numerical side: the lab-to-quad-frame
rotation pipeline, the approximate quad-frame entry unitary for driven
qubits, a Gauss-Legendre commutator-corrected Magnus propagator for
time-dependent Hamiltonians, and the end-to-end check that integrated
dynamics match the first-order effective chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .device import DeviceParams, DriveConfig
from .hamiltonians import (
    TimeDependentHamiltonian,
    build_qf_effective,
    lab_frame_hamiltonian,
    rotating_frame_hamiltonian,
)
from .pauli import (
    DEFAULT_DENSE_LIMIT,
    ConvergenceError,
    PauliSum,
    expm_hermitian,
    _check_dense,
)

__all__ = [
    "GateLayerKind",
    "GateLayer",
    "layer_unitary",
    "apply_layer",
    "toggle",
    "compose_kinds",
    "u12_unitary",
    "u3_unitary",
    "u4_unitary",
    "frame_pipeline_unitary",
    "uqf_approx",
    "unitarity_defect",
    "phase_insensitive_distance",
    "propagate_unitary",
    "verify_effective",
    "FrameVerification",
]

_SQ = 1.0 / math.sqrt(2.0)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_ID = np.eye(2, dtype=complex)


class GateLayerKind(Enum):
    HADAMARD = "h"
    RX90 = "rx90"  # exp(-i pi x / 4)
    RX90DAG = "rx90dag"
    SPHASE = "s"  # exp(-i pi z / 4), swaps x and y axes
    UE = "ue"  # axis cycle exp(-i pi (x+y+z) / (3 sqrt 3))
    UEDAG = "uedag"
    UE2 = "ue2"
    UE2DAG = "ue2dag"
    IDENTITY = "id"


_UE_MAT = 0.5 * (_ID - 1j * (_X + _Y + _Z))

_KIND_MATS = {
    GateLayerKind.HADAMARD: _SQ * (_X + _Z),
    GateLayerKind.RX90: _SQ * (_ID - 1j * _X),
    GateLayerKind.RX90DAG: _SQ * (_ID + 1j * _X),
    GateLayerKind.SPHASE: np.diag([np.exp(-0.25j * np.pi), np.exp(0.25j * np.pi)]),
    GateLayerKind.UE: _UE_MAT,
    GateLayerKind.UEDAG: _UE_MAT.conj().T,
    GateLayerKind.UE2: _UE_MAT @ _UE_MAT,
    GateLayerKind.UE2DAG: (_UE_MAT @ _UE_MAT).conj().T,
    GateLayerKind.IDENTITY: _ID,
}

# Conjugation action U† P U as letter -> (letter, sign), per supported site.
_KIND_MAPS: dict[GateLayerKind, dict[str, tuple[str, int]]] = {
    GateLayerKind.HADAMARD: {"X": ("Z", 1), "Y": ("Y", -1), "Z": ("X", 1)},
    GateLayerKind.RX90: {"X": ("X", 1), "Y": ("Z", -1), "Z": ("Y", 1)},
    GateLayerKind.RX90DAG: {"X": ("X", 1), "Y": ("Z", 1), "Z": ("Y", -1)},
    GateLayerKind.SPHASE: {"X": ("Y", -1), "Y": ("X", 1), "Z": ("Z", 1)},
    GateLayerKind.UE: {"X": ("Z", 1), "Y": ("X", 1), "Z": ("Y", 1)},
    GateLayerKind.UEDAG: {"X": ("Y", 1), "Y": ("Z", 1), "Z": ("X", 1)},
    GateLayerKind.UE2: {"X": ("Y", 1), "Y": ("Z", 1), "Z": ("X", 1)},
    GateLayerKind.UE2DAG: {"X": ("Z", 1), "Y": ("X", 1), "Z": ("Y", 1)},
    GateLayerKind.IDENTITY: {"X": ("X", 1), "Y": ("Y", 1), "Z": ("Z", 1)},
}

_INVERSE_KIND = {
    GateLayerKind.HADAMARD: GateLayerKind.HADAMARD,
    GateLayerKind.RX90: GateLayerKind.RX90DAG,
    GateLayerKind.RX90DAG: GateLayerKind.RX90,
    GateLayerKind.UE: GateLayerKind.UEDAG,
    GateLayerKind.UEDAG: GateLayerKind.UE,
    GateLayerKind.UE2: GateLayerKind.UE2DAG,
    GateLayerKind.UE2DAG: GateLayerKind.UE2,
    GateLayerKind.IDENTITY: GateLayerKind.IDENTITY,
}

# Exponent in the order-6 cyclic group generated by the axis-cycling gate.
_UE_POWER = {
    GateLayerKind.UE: 1,
    GateLayerKind.UE2: 2,
    GateLayerKind.UE2DAG: 4,
    GateLayerKind.UEDAG: 5,
}
_UE_OF_POWER = {v: k for k, v in _UE_POWER.items()}


def compose_kinds(first: GateLayerKind, second: GateLayerKind) -> GateLayerKind | None:
    """Kind of the exact composition ``second after first``, if representable.

    Returns IDENTITY when the pair cancels, a single kind when the product
    is again a catalogued gate, and None when no exact single-layer
    replacement exists (e.g. two quarter x-rotations).
    """
    if first is GateLayerKind.IDENTITY:
        return second
    if second is GateLayerKind.IDENTITY:
        return first
    if _INVERSE_KIND.get(first) is second:
        return GateLayerKind.IDENTITY
    if first in _UE_POWER and second in _UE_POWER:
        power = (_UE_POWER[first] + _UE_POWER[second]) % 6
        if power == 0:
            return GateLayerKind.IDENTITY
        return _UE_OF_POWER.get(power)  # power 3 is a global sign, not a layer
    return None


@dataclass(frozen=True)
class GateLayer:
    """One single-qubit gate repeated over a support of sites.

    ``support`` is "all", "even", "odd" (1-based site parity) or an
    explicit tuple of 1-based site numbers.
    """

    kind: GateLayerKind
    support: str | tuple[int, ...] = "all"

    def sites(self, n: int) -> tuple[int, ...]:
        """Resolved 0-based site indices."""
        if isinstance(self.support, tuple):
            for s in self.support:
                if not 1 <= s <= n:
                    raise ValueError(f"site {s} outside 1..{n}")
            return tuple(s - 1 for s in self.support)
        if self.support == "all":
            return tuple(range(n))
        if self.support == "even":
            return tuple(k for k in range(n) if (k + 1) % 2 == 0)
        if self.support == "odd":
            return tuple(k for k in range(n) if (k + 1) % 2 == 1)
        raise ValueError(f"unknown support {self.support!r}")

    def inverse(self) -> "GateLayer":
        try:
            return GateLayer(_INVERSE_KIND[self.kind], self.support)
        except KeyError:
            raise ValueError(f"no catalogued inverse for {self.kind}") from None


def layer_unitary(
    layer: GateLayer, n: int, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> np.ndarray:
    _check_dense(n, dense_limit, "layer_unitary")
    on = set(layer.sites(n))
    u = _KIND_MATS[layer.kind]
    out = np.array([[1.0 + 0j]])
    for k in range(n - 1, -1, -1):
        out = np.kron(out, u if k in on else _ID)
    return out


def apply_layer(layer: GateLayer, state: np.ndarray, n: int) -> np.ndarray:
    """Matrix-free application of a gate layer to a state vector."""
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (1 << n,):
        raise ValueError("state size mismatch")
    u = _KIND_MATS[layer.kind]
    if layer.kind is GateLayerKind.IDENTITY:
        return psi.copy()
    for k in layer.sites(n):
        shaped = psi.reshape(1 << (n - k - 1), 2, 1 << k)
        psi = np.einsum("ab,ibj->iaj", u, shaped).reshape(-1)
    return psi


def toggle(h: PauliSum, layer: GateLayer) -> PauliSum:
    """Exact conjugated operator U† h U for a gate layer U.

    Works symbolically on the Pauli strings; Hermiticity and Frobenius
    norm are preserved exactly.
    """
    mapping = _KIND_MAPS[layer.kind]
    on = set(layer.sites(h.n))
    acc: dict[tuple[int, int], complex] = {}
    for t in h.terms():
        x = z = 0
        sign = 1
        for k in range(h.n):
            bx, bz = (t.x >> k) & 1, (t.z >> k) & 1
            if bx == bz == 0:
                continue
            letter = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(bx, bz)]
            if k in on:
                letter, s = mapping[letter]
                sign *= s
            nbx, nbz = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}[letter]
            x |= nbx << k
            z |= nbz << k
        acc[(x, z)] = acc.get((x, z), 0.0) + sign * t.coeff
    return PauliSum(h.n, acc)


def toggle_chain(h: PauliSum, layers: Sequence[GateLayer]) -> PauliSum:
    """Conjugate by a sequence of layers, first layer innermost."""
    out = h
    for layer in layers:
        out = toggle(out, layer)
    return out


# ----------------------------------------------------------------------
# lab -> quad frame rotation pipeline
# ----------------------------------------------------------------------


def _kron_chain(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in reversed(mats):  # site 0 is the least significant bit
        out = np.kron(out, m)
    return out


def _axis_rot(axis: np.ndarray, angle: float) -> np.ndarray:
    # exp(-i angle axis / 2) for a single qubit
    return math.cos(angle / 2) * _ID - 1j * math.sin(angle / 2) * axis


def u12_unitary(p: DeviceParams, t: float) -> np.ndarray:
    """Per-qubit drive rotation exp(-i (omega_k t + phi_k) z_k / 2)."""
    return _kron_chain(
        [_axis_rot(_Z, p.omega[k] * t + p.phi[k]) for k in range(p.n)]
    )


def u3_unitary(p: DeviceParams) -> np.ndarray:
    """Per-qubit drive-axis tilt exp(+i xi_k y_k / 2), xi = atan2(delta, Omega)."""
    return _kron_chain([_axis_rot(_Y, -float(xi)) for xi in p.xi])


def u4_unitary(p: DeviceParams, t: float) -> np.ndarray:
    """Per-qubit generalized-Rabi rotation exp(-i t eta_k x_k / 2)."""
    return _kron_chain([_axis_rot(_X, float(eta) * t) for eta in p.eta])


def frame_pipeline_unitary(p: DeviceParams, t: float) -> np.ndarray:
    """Full frame unitary F(t); states map as psi_frame = F(t)† psi_lab."""
    return u12_unitary(p, t) @ u3_unitary(p) @ u4_unitary(p, t)


def rot_frame_unitary(p: DeviceParams, t: float) -> np.ndarray:
    """Frame factor from the drive-rotating frame into the quad frame."""
    return u3_unitary(p) @ u4_unitary(p, t)


def uqf_approx(p: DeviceParams, t: float) -> np.ndarray:
    """First-order approximate quad-frame entry unitary.

    Per driven qubit: (1/sqrt 2) [1 + i y + (Omega / 2 delta)
    ((1 - i y) cos(delta t) + i (z - x) sin(delta t))]; undriven qubits
    get the identity. Exactly unitary only in the limit Omega/delta -> 0;
    the defect norm grows as (Omega / 2 delta)^2 per driven qubit.
    """
    mats = []
    for k in range(p.n):
        if not p.is_driven(k):
            mats.append(_ID)
            continue
        d = p.delta[k]
        if d == 0.0:
            raise ZeroDivisionError(f"driven qubit {k + 1} has zero detuning")
        eps = p.Omega[k] / (2.0 * d)
        c, s = math.cos(d * t), math.sin(d * t)
        mats.append(
            _SQ * (_ID + 1j * _Y + eps * ((_ID - 1j * _Y) * c + 1j * (_Z - _X) * s))
        )
    return _kron_chain(mats)


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]), 2))


def phase_insensitive_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over theta of the spectral norm of u - e^{i theta} v."""
    c = np.trace(v.conj().T @ u)
    phase = c / abs(c) if abs(c) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v, 2))


# ----------------------------------------------------------------------
# time-dependent propagation
# ----------------------------------------------------------------------

_GL_C1 = 0.5 - math.sqrt(3.0) / 6.0
_GL_C2 = 0.5 + math.sqrt(3.0) / 6.0


def _expm_antihermitian(a: np.ndarray) -> np.ndarray:
    k = 1j * a  # Hermitian
    evals, evecs = np.linalg.eigh(k)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def propagate_unitary(
    h: TimeDependentHamiltonian,
    t_final: float,
    t_start: float = 0.0,
    tol: float = 1e-8,
    max_step: float | None = None,
    max_halvings: int = 14,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> tuple[np.ndarray, dict]:
    """Time-ordered propagator by fourth-order Gauss-Legendre Magnus steps.

    The step count doubles until two consecutive resolutions agree to
    ``tol`` in spectral norm; non-convergence within ``max_halvings``
    doublings raises :class:`~crda.pauli.ConvergenceError`.
    """
    _check_dense(h.n, dense_limit, "propagate_unitary")
    dim = 1 << h.n
    mats = [(ps.to_dense(dense_limit), f) for ps, f in h.pieces]
    span = t_final - t_start
    if span == 0.0 or not mats:
        return np.eye(dim, dtype=complex), {"steps": 0, "step_size": 0.0, "residual": 0.0}

    def ham(t: float) -> np.ndarray:
        out = np.zeros((dim, dim), dtype=complex)
        for d, f in mats:
            out += f(t) * d
        return out

    def run(nsteps: int) -> np.ndarray:
        hstep = span / nsteps
        u = np.eye(dim, dtype=complex)
        w = math.sqrt(3.0) * hstep * hstep / 12.0
        for i in range(nsteps):
            ta = t_start + i * hstep
            a1 = -1j * ham(ta + _GL_C1 * hstep)
            a2 = -1j * ham(ta + _GL_C2 * hstep)
            om = 0.5 * hstep * (a1 + a2) + w * (a2 @ a1 - a1 @ a2)
            u = _expm_antihermitian(om) @ u
        return u

    # initial resolution: resolve the fastest drive and the local norm scale
    scale = max(np.linalg.norm(ham(t_start + f * span), 2) for f in (0.0, 0.37, 0.74))
    h0 = abs(span)
    if scale > 0:
        h0 = min(h0, 0.05 / scale)
    if h.max_frequency > 0:
        h0 = min(h0, (2.0 * math.pi / h.max_frequency) / 40.0)
    if max_step is not None:
        h0 = min(h0, max_step)
    nsteps = max(1, math.ceil(abs(span) / h0))
    u_prev = run(nsteps)
    for _ in range(max_halvings):
        nsteps *= 2
        u_next = run(nsteps)
        residual = float(np.linalg.norm(u_next - u_prev, 2))
        if residual < tol:
            return u_next, {
                "steps": nsteps,
                "step_size": abs(span) / nsteps,
                "residual": residual,
            }
        u_prev = u_next
    raise ConvergenceError(
        f"propagator did not converge to {tol} within {max_halvings} refinements"
    )


# ----------------------------------------------------------------------
# effective-model verification
# ----------------------------------------------------------------------


@dataclass
class FrameVerification:
    """Distance between integrated dynamics and the effective chain."""

    t_final: float
    mode: str
    distance: float
    distance_lab_mapping: float
    integrator: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=dict)


def verify_effective(
    p: DeviceParams,
    t_final: float,
    mode: str = "lab",
    tol: float = 1e-8,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> FrameVerification:
    """Integrate the driven chain and compare against the effective model.

    ``mode`` selects the starting description: "lab" integrates the full
    laboratory-frame Hamiltonian, "rotating" starts from the drive-rotating
    frame with counter-rotating terms already dropped. The integrated
    propagator is carried into the quad frame through the rotation
    pipeline and compared, phase-insensitively, against
    exp(-i H_eff t_final). The same comparison mapped back to the starting
    frame is reported alongside (it agrees up to roundoff; both are kept
    so either frame's convention can be audited).
    """
    if mode == "lab":
        gen = lab_frame_hamiltonian(p)
        frame = frame_pipeline_unitary
    elif mode == "rotating":
        gen = rotating_frame_hamiltonian(p)
        frame = rot_frame_unitary
    else:
        raise ValueError("mode must be 'lab' or 'rotating'")
    u_num, info = propagate_unitary(gen, t_final, tol=tol, dense_limit=dense_limit)
    f_end = frame(p, t_final)
    f_start = frame(p, 0.0)
    h_eff = build_qf_effective(p, DriveConfig.ALL)
    u_eff = expm_hermitian(h_eff, t_final, dense_limit)
    u_num_qf = f_end.conj().T @ u_num @ f_start
    d_qf = phase_insensitive_distance(u_num_qf, u_eff)
    u_eff_lab = f_end @ u_eff @ f_start.conj().T
    d_lab = phase_insensitive_distance(u_num, u_eff_lab)
    ratios = {}
    for k in range(p.n):
        if p.is_driven(k) and p.delta[k] != 0.0:
            ratios[f"Omega/delta.{k + 1}"] = float(p.Omega[k] / p.delta[k])
            if k < p.g.size:
                ratios[f"g/delta.{k + 1}"] = float(p.g[k] / p.delta[k])
    return FrameVerification(
        t_final=t_final,
        mode=mode,
        distance=d_qf,
        distance_lab_mapping=d_lab,
        integrator=info,
        ratios=ratios,
    )


def frame_error_scaling(
    p: DeviceParams,
    t_final: float,
    scales: Sequence[float] = (1.0, 0.5, 0.25),
    mode: str = "lab",
    tol: float = 1e-8,
) -> tuple[list[float], float]:
    """Distances when g and Omega shrink together, plus the fitted exponent.

    Scaling both couplings by s should shrink the residual roughly as s^2
    at a revival time of the detuning oscillation.
    """
    distances = []
    for s in scales:
        ps = DeviceParams(
            n=p.n,
            omega_q=p.omega_q,
            omega=p.omega,
            Omega=s * p.Omega,
            phi=p.phi,
            g=s * p.g,
        )
        distances.append(verify_effective(ps, t_final, mode=mode, tol=tol).distance)
    slope = float(
        np.polyfit(np.log(np.asarray(scales)), np.log(np.asarray(distances)), 1)[0]
    )
    return distances, slope
