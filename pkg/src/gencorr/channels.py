"""Local decoherence channels and the evolved four-party system-environment states.

Two qubits a, b start in a Werner state and couple to independent vacuum
environments E_a, E_b through amplitude- or phase-damping.  Each channel is
carried both as a Kraus pair on the system qubit and as its unitary dilation
on (system, environment); evolving the global state with the two local
dilations reproduces, exactly, an explicit golden construction
(1-c) * iota(p) + c |Upsilon(p)><Upsilon(p)| whose matrix elements are
transcribed term by term below.

Subsystem ordering of the global state is (a, E_a, b, E_b); composite basis
indices are the big-endian binary numbers over that ordering, so e.g. index 2
is |0010> = |a=0, E_a=0, b=1, E_b=0>.  The environments are truncated to
single qubits: the dilations never populate more than one excitation, so the
truncation is exact.  Both subsystems share the same time parameter p
(identical environments), with p=0 the initial time and p=1 the asymptotic
limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, PureState, kron_all, permute_subsystems

__all__ = [
    "KrausChannel",
    "DilationMap",
    "amplitude_damping_kraus",
    "phase_damping_kraus",
    "dilation",
    "psi_minus",
    "werner_state",
    "evolve_global",
    "appendix_golden_state",
    "iota_ad",
    "iota_pd",
    "upsilon_ad",
    "upsilon_pd",
    "GLOBAL_DIMS",
]

GLOBAL_DIMS = (2, 2, 2, 2)  # (a, E_a, b, E_b)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving qubit channel as an operator list."""

    operators: tuple[np.ndarray, ...]
    label: str
    p: float

    def __init__(self, operators, label: str, p: float) -> None:
        ops = tuple(np.asarray(k, dtype=complex) for k in operators)
        d = ops[0].shape[0]
        comp = sum(k.conj().T @ k for k in ops)
        if np.abs(comp - np.eye(d)).max() > 1e-12:
            raise ValueError("Kraus operators do not satisfy sum K†K = I")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "p", float(p))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Operator-sum action sum_i K_i rho K_i† on a raw matrix."""
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.operators)


def amplitude_damping_kraus(p: float) -> KrausChannel:
    """Dissipative zero-temperature reservoir: |1> decays to |0> with weight p."""
    p = _check_p(p)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1), "ad", p)


def phase_damping_kraus(p: float) -> KrausChannel:
    """Pure dephasing: phase relations decay, populations are untouched."""
    p = _check_p(p)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [0.0, np.sqrt(p)]], dtype=complex)
    return KrausChannel((k0, k1), "pd", p)


@dataclass(frozen=True)
class DilationMap:
    """System-environment unitary extension of a qubit channel.

    Stores the images of |0_s 0_E> and |1_s 0_E>; the remaining two columns
    are completed deterministically by Gram-Schmidt over the computational
    basis, which only fixes the action outside the reachable subspace.
    """

    label: str
    p: float
    out00: np.ndarray
    out10: np.ndarray

    def __init__(self, label: str, p: float, out00, out10) -> None:
        out00 = np.asarray(out00, dtype=complex)
        out10 = np.asarray(out10, dtype=complex)
        gram = np.array(
            [
                [np.vdot(out00, out00), np.vdot(out00, out10)],
                [np.vdot(out10, out00), np.vdot(out10, out10)],
            ]
        )
        if np.abs(gram - np.eye(2)).max() > 1e-12:
            raise ValueError("dilation outputs are not orthonormal")
        out00.setflags(write=False)
        out10.setflags(write=False)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "out00", out00)
        object.__setattr__(self, "out10", out10)

    def unitary(self) -> np.ndarray:
        """Full 4x4 unitary on (s, E); basis order |00>, |01>, |10>, |11>."""
        u = np.zeros((4, 4), dtype=complex)
        u[:, 0] = self.out00
        u[:, 2] = self.out10
        cols = [self.out00, self.out10]
        free = []
        for e in (1, 3, 0, 2):
            if len(free) == 2:
                break
            v = np.zeros(4, dtype=complex)
            v[e] = 1.0
            for c in cols:
                v = v - c * np.vdot(c, v)
            nrm = np.linalg.norm(v)
            if nrm > 1e-9:
                v = v / nrm
                cols.append(v)
                free.append(v)
        u[:, 1] = free[0]
        u[:, 3] = free[1]
        return u


def dilation(channel: KrausChannel) -> DilationMap:
    """Unitary system-environment extension of a supported qubit channel."""
    if channel.label not in ("ad", "pd") or len(channel.operators) > 2:
        raise ValueError(f"unsupported channel shape: {channel.label}")
    p = channel.p
    out00 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    if channel.label == "ad":
        # |1_s 0_E> -> sqrt(1-p)|1_s 0_E> + sqrt(p)|0_s 1_E>
        out10 = np.array([0.0, np.sqrt(p), np.sqrt(1.0 - p), 0.0], dtype=complex)
    else:
        # |1_s 0_E> -> |1_s> (sqrt(1-p)|0_E> + sqrt(p)|1_E>)
        out10 = np.array([0.0, 0.0, np.sqrt(1.0 - p), np.sqrt(p)], dtype=complex)
    return DilationMap(channel.label, p, out00, out10)


def psi_minus() -> PureState:
    """Two-qubit singlet (|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    return PureState((2, 2), v)


def werner_state(c: float) -> DensityMatrix:
    """(1-c) I/4 + c |psi-><psi-| with spectrum {(1+3c)/4, (1-c)/4 x3}."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {c}")
    sing = psi_minus().vec
    mat = (1.0 - c) * np.eye(4) / 4.0 + c * np.outer(sing, sing.conj())
    return DensityMatrix((2, 2), mat)


def _make_channel(kind: str, p: float) -> KrausChannel:
    if kind == "ad":
        return amplitude_damping_kraus(p)
    if kind == "pd":
        return phase_damping_kraus(p)
    raise ValueError(f"channel kind must be 'ad' or 'pd', got {kind!r}")


def evolve_global(c: float, p: float, kind: str) -> DensityMatrix:
    """Four-party state after both qubits interact with their environments.

    Starts from werner(c) x |0_Ea><0_Ea| x |0_Eb><0_Eb|, reorders to
    (a, E_a, b, E_b) with an exact index map, and conjugates with the product
    of the two local dilation unitaries.
    """
    rho_ab = werner_state(c).mat
    vac = np.zeros((2, 2), dtype=complex)
    vac[0, 0] = 1.0
    rho0 = kron_all([rho_ab, vac, vac])  # ordering (a, b, E_a, E_b)
    rho0 = permute_subsystems(rho0, (2, 2, 2, 2), (0, 2, 1, 3))
    u_local = dilation(_make_channel(kind, p)).unitary()
    u = np.kron(u_local, u_local)
    return DensityMatrix(GLOBAL_DIMS, u @ rho0 @ u.conj().T)


def _close_hermitian(m: np.ndarray) -> np.ndarray:
    """Add the h.c. of the strictly off-diagonal part set above the diagonal."""
    return m + m.conj().T - np.diag(np.diag(m))


def iota_ad(p: float) -> np.ndarray:
    """Evolved white-noise part for amplitude damping, as a 16x16 matrix."""
    p = _check_p(p)
    q = 1.0 - p
    s = np.sqrt
    m = np.zeros((16, 16), dtype=complex)
    m[0, 0] = 1.0
    m[2, 2] = m[8, 8] = q
    m[5, 5] = p * p
    m[10, 10] = q * q
    m[6, 6] = m[9, 9] = p * q
    m[4, 4] = m[1, 1] = p
    m[4, 8] = m[1, 2] = s(p * q)
    m[6, 10] = m[9, 10] = s(p * q**3)
    m[5, 10] = m[6, 9] = p * q
    m[5, 6] = m[5, 9] = s(p**3 * q)
    return _close_hermitian(m) / 4.0


def iota_pd(p: float) -> np.ndarray:
    """Evolved white-noise part for phase damping, as a 16x16 matrix."""
    p = _check_p(p)
    q = 1.0 - p
    s = np.sqrt
    m = np.zeros((16, 16), dtype=complex)
    m[0, 0] = 1.0
    m[2, 2] = m[8, 8] = q
    m[3, 3] = m[12, 12] = p
    m[10, 10] = q * q
    m[11, 11] = m[14, 14] = p * q
    m[15, 15] = p * p
    m[2, 3] = m[8, 12] = s(p * q)
    m[14, 10] = m[11, 10] = s(p * q**3)
    m[11, 14] = m[10, 15] = p * q
    m[15, 11] = m[15, 14] = s(p**3 * q)
    return _close_hermitian(m) / 4.0


def upsilon_ad(p: float) -> PureState:
    """Evolved singlet branch for amplitude damping."""
    p = _check_p(p)
    v = np.zeros(16, dtype=complex)
    v[2] = np.sqrt((1.0 - p) / 2.0)
    v[8] = -np.sqrt((1.0 - p) / 2.0)
    v[1] = np.sqrt(p / 2.0)
    v[4] = -np.sqrt(p / 2.0)
    return PureState(GLOBAL_DIMS, v)


def upsilon_pd(p: float) -> PureState:
    """Evolved singlet branch for phase damping."""
    p = _check_p(p)
    v = np.zeros(16, dtype=complex)
    v[2] = np.sqrt((1.0 - p) / 2.0)
    v[8] = -np.sqrt((1.0 - p) / 2.0)
    v[3] = np.sqrt(p / 2.0)
    v[12] = -np.sqrt(p / 2.0)
    return PureState(GLOBAL_DIMS, v)


def appendix_golden_state(c: float, p: float, kind: str) -> DensityMatrix:
    """Literal golden construction (1-c) iota(p) + c |Upsilon(p)><Upsilon(p)|."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {c}")
    if kind == "ad":
        io, ups = iota_ad(p), upsilon_ad(p)
    elif kind == "pd":
        io, ups = iota_pd(p), upsilon_pd(p)
    else:
        raise ValueError(f"channel kind must be 'ad' or 'pd', got {kind!r}")
    mat = (1.0 - c) * io + c * np.outer(ups.vec, ups.vec.conj())
    return DensityMatrix(GLOBAL_DIMS, mat)
