"""Canonical state constructors, fidelity, and the partial-transpose test."""

from __future__ import annotations

import numpy as np

from .genuine_correlations import Bipartition
from .linalg import DensityMatrix, PureState, hermitize

__all__ = [
    "ghz",
    "w4",
    "classical_state",
    "fidelity",
    "ppt_min_eigenvalue",
    "random_unitary",
    "random_pure_state",
    "random_density_matrix",
    "random_classical_state",
    "separable_quantum_mixture",
]


def ghz(n: int) -> PureState:
    """n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2)."""
    if n < 2:
        raise ValueError(f"GHZ needs at least 2 qubits, got {n}")
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return PureState((2,) * n, v)


def w4() -> PureState:
    """Four-qubit W-class state (|0001> + |0010> - |0100> - |1000>)/2."""
    v = np.zeros(16, dtype=complex)
    v[1] = v[2] = 0.5
    v[4] = v[8] = -0.5
    return PureState((2, 2, 2, 2), v)


def classical_state(dims, probs) -> DensityMatrix:
    """Computational-basis diagonal state sum p_i |i><i|."""
    p = np.asarray(probs, dtype=float).reshape(-1)
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {p.sum()}")
    return DensityMatrix(dims, np.diag(p.astype(complex)))


def fidelity(psi: PureState, rho: DensityMatrix) -> float:
    """sqrt(<psi|rho|psi>), clamped to [0, 1]."""
    if psi.dims.dims != rho.dims.dims:
        raise ValueError(f"dimension mismatch: {psi.dims.dims} vs {rho.dims.dims}")
    overlap = float(np.real(np.vdot(psi.vec, rho.mat @ psi.vec)))
    if overlap < -1e-12:
        raise ValueError(f"negative overlap {overlap:.3e}")
    return float(np.sqrt(min(max(overlap, 0.0), 1.0)))


def ppt_min_eigenvalue(rho: DensityMatrix, cut: Bipartition) -> float:
    """Minimum eigenvalue of the partial transpose over the cut's second cell.

    Negative values witness entanglement across the cut.
    """
    n = rho.n
    if cut.n != n:
        raise ValueError(f"cut is over {cut.n} subsystems, state has {n}")
    dims = list(rho.dims)
    t = np.asarray(rho.mat).reshape(dims + dims)
    axes = list(range(2 * n))
    for i in cut.complement:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    t = np.transpose(t, axes)
    side = rho.dim
    return float(np.linalg.eigvalsh(hermitize(t.reshape(side, side))).min())


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    d = int(np.prod(tuple(dims)))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(dims, v / np.linalg.norm(v))


def random_density_matrix(dims, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Full-rank (or rank-limited) random state from a Wishart draw."""
    d = int(np.prod(tuple(dims)))
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return DensityMatrix(dims, m / np.trace(m).real)


def random_classical_state(dims, rng: np.random.Generator) -> DensityMatrix:
    d = int(np.prod(tuple(dims)))
    p = rng.dirichlet(np.ones(d))
    return classical_state(dims, p)


def separable_quantum_mixture(
    dims, rng: np.random.Generator, terms: int = 4
) -> DensityMatrix:
    """Mixture of random product projectors: separable, generically discordant.

    The local projectors of different terms do not commute, so the mixture is
    usually not classical in any product basis.
    """
    dims = tuple(dims)
    weights = rng.dirichlet(np.ones(terms))
    d = int(np.prod(dims))
    mat = np.zeros((d, d), dtype=complex)
    for w in weights:
        factors = [random_pure_state((dd,), rng).vec for dd in dims]
        vec = factors[0]
        for f in factors[1:]:
            vec = np.kron(vec, f)
        mat += w * np.outer(vec, vec.conj())
    return DensityMatrix(dims, mat)
