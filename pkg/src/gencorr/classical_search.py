"""Dephasing in local product bases and the closest-classical-state search.

A classically-correlated state is diagonal in some product of local
orthonormal bases.  Dephasing (pinching) a state in such a basis yields the
nearest classical state *for that basis*; minimizing the resulting relative
entropy over all local bases yields the quantum part Q of the correlations
and the closest classical state chi.

The search runs a multi-start Nelder-Mead over compact basis parametrizations:
two Bloch angles per qubit cell (the redundant phase directions are removed),
or a d^2-parameter Hermitian generator H with U = exp(iH) for cells of
dimension 3 or 4.  Start 0 always begins at the computational basis; start k
draws its initial point from a generator seeded with rng_seed + k, which makes
the min-over-starts reduction deterministic and safe to parallelize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .entropy import shannon, von_neumann_entropy
from .linalg import (
    DEFAULT_TOL,
    CompositeDims,
    DensityMatrix,
    Tolerances,
    hermitize,
    kron_all,
    permutation_indices,
)

__all__ = [
    "MAX_CELL_DIM",
    "SearchConfig",
    "LocalBasisSet",
    "params_per_cell",
    "qubit_basis_unitary",
    "generator_unitary",
    "basis_from_params",
    "dephase",
    "quantumness_in_basis",
    "closest_classical_state",
]

MAX_CELL_DIM = 4


@dataclass(frozen=True)
class SearchConfig:
    """Budget and seeding for the closest-classical-state search.

    starts=None resolves to 32 for qubit-only cells and 64 when any cell has
    dimension >= 3 (the generator landscape needs more restarts).
    """

    starts: int | None = None
    max_evals: int = 2000
    ftol: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.starts is not None and self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")

    def resolved_starts(self, cell_dims) -> int:
        if self.starts is not None:
            return self.starts
        return 64 if any(d >= 3 for d in cell_dims) else 32


@dataclass(frozen=True)
class LocalBasisSet:
    """One unitary per cell of a partition of the subsystems.

    Column j of each unitary is the j-th basis vector of that cell.
    """

    cells: tuple[tuple[int, ...], ...]
    unitaries: tuple[np.ndarray, ...]

    def __init__(self, cells, unitaries, tol: Tolerances = DEFAULT_TOL) -> None:
        cells = tuple(tuple(int(i) for i in cell) for cell in cells)
        unitaries = tuple(np.asarray(u, dtype=complex) for u in unitaries)
        if len(cells) != len(unitaries):
            raise ValueError("one unitary per cell required")
        for u in unitaries:
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise ValueError(f"basis unitary must be square, got {u.shape}")
            dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
            if dev > 1e-9:
                raise ValueError(f"matrix is not unitary: max|U†U - I| = {dev:.3e}")
        for u in unitaries:
            u.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "unitaries", unitaries)

    def validate_partition(self, dims: CompositeDims) -> None:
        flat = [i for cell in self.cells for i in cell]
        if sorted(flat) != list(range(dims.n)):
            raise ValueError(f"cells {self.cells} do not partition 0..{dims.n - 1}")
        for cell, u in zip(self.cells, self.unitaries):
            d = int(np.prod([dims[i] for i in cell]))
            if u.shape[0] != d:
                raise ValueError(
                    f"cell {cell} has dimension {d} but unitary is {u.shape[0]}x{u.shape[0]}"
                )


def params_per_cell(d: int) -> int:
    """Search-space size per cell: 2 Bloch angles for a qubit, else d^2."""
    if d == 2:
        return 2
    if d > MAX_CELL_DIM:
        raise ValueError(f"cells of dimension {d} > {MAX_CELL_DIM} are not supported")
    return d * d


def qubit_basis_unitary(theta: float, phi: float) -> np.ndarray:
    """Bloch-angle basis: columns are |v(theta,phi)> and its orthocomplement."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -s * np.exp(-1j * phi)], [s * np.exp(1j * phi), c]], dtype=complex
    )


def generator_unitary(params: np.ndarray, d: int) -> np.ndarray:
    """U = exp(iH) for the Hermitian H packed as d diagonal + (re, im) pairs."""
    params = np.asarray(params, dtype=float)
    if params.size != d * d:
        raise ValueError(f"need {d * d} parameters for dimension {d}, got {params.size}")
    h = np.zeros((d, d), dtype=complex)
    h[np.diag_indices(d)] = params[:d]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = params[k] + 1j * params[k + 1]
            h[j, i] = params[k] - 1j * params[k + 1]
            k += 2
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _cell_dims(dims: CompositeDims, cells) -> list[int]:
    return [int(np.prod([dims[i] for i in cell])) for cell in cells]


def basis_from_params(x: np.ndarray, cells, dims: CompositeDims) -> LocalBasisSet:
    """Decode a flat parameter vector into one unitary per cell."""
    x = np.asarray(x, dtype=float)
    cdims = _cell_dims(dims, cells)
    sizes = [params_per_cell(d) for d in cdims]
    if x.size != sum(sizes):
        raise ValueError(f"parameter vector has length {x.size}, expected {sum(sizes)}")
    us = []
    pos = 0
    for d, sz in zip(cdims, sizes):
        chunk = x[pos : pos + sz]
        pos += sz
        us.append(qubit_basis_unitary(*chunk) if d == 2 else generator_unitary(chunk, d))
    return LocalBasisSet(cells, us)


def _basis_matrix(basis: LocalBasisSet, dims: CompositeDims) -> np.ndarray:
    """Full product-basis matrix in the original subsystem ordering."""
    perm = [i for cell in basis.cells for i in cell]
    big = kron_all(basis.unitaries)
    if perm == list(range(dims.n)):
        return big
    idx = permutation_indices(dims.dims, perm)
    inv = np.empty_like(idx)
    inv[idx] = np.arange(idx.size)
    return big[inv]


def _pinch_probs(mat: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Diagonal of B† rho B: the dephasing outcome distribution."""
    p = np.real(np.einsum("ij,ij->j", b.conj(), mat @ b))
    return np.clip(p, 0.0, None)


def dephase(rho: DensityMatrix, basis: LocalBasisSet) -> DensityMatrix:
    """Pinch rho in the given product basis: chi = sum_k |b_k><b_k| rho |b_k><b_k|."""
    basis.validate_partition(rho.dims)
    b = _basis_matrix(basis, rho.dims)
    p = _pinch_probs(np.asarray(rho.mat), b)
    chi = (b * p) @ b.conj().T
    return DensityMatrix(rho.dims, hermitize(chi))


def quantumness_in_basis(rho: DensityMatrix, basis: LocalBasisSet) -> float:
    """S(rho || dephase(rho, basis)), evaluated as S(chi) - S(rho).

    The two forms agree because the pinched state chi is diagonal in the
    product basis and carries exactly the pinched outcome distribution.
    """
    basis.validate_partition(rho.dims)
    b = _basis_matrix(basis, rho.dims)
    p = _pinch_probs(np.asarray(rho.mat), b)
    return shannon(p) - von_neumann_entropy(rho)


def _random_start(rng: np.random.Generator, cdims) -> np.ndarray:
    parts = []
    for d in cdims:
        if d == 2:
            parts.append(rng.uniform([0.0, 0.0], [np.pi, 2 * np.pi]))
        else:
            parts.append(rng.uniform(-np.pi, np.pi, d * d))
    return np.concatenate(parts)


class _SearchResult(tuple):
    """(chi, basis, q) triple that also carries the evaluation count."""

    def __new__(cls, chi, basis, q, evals):
        obj = super().__new__(cls, (chi, basis, q))
        obj.evals = evals
        return obj

    @property
    def chi(self) -> DensityMatrix:
        return self[0]

    @property
    def basis(self) -> LocalBasisSet:
        return self[1]

    @property
    def q(self) -> float:
        return self[2]


def closest_classical_state(
    rho: DensityMatrix, partition, cfg: SearchConfig = SearchConfig()
) -> tuple[DensityMatrix, LocalBasisSet, float]:
    """Find the closest classical state for the given partition into cells.

    Returns (chi, basis, q) where q = S(rho||chi) minimized over local bases.
    Every dephasing evaluates to a finite value, so the multi-start reduction
    always has a result; a failure to produce one is an internal error.
    """
    dims = rho.dims
    cells = tuple(tuple(int(i) for i in cell) for cell in partition)
    flat = sorted(i for cell in cells for i in cell)
    if flat != list(range(dims.n)):
        raise ValueError(f"cells {cells} do not partition 0..{dims.n - 1}")
    cdims = _cell_dims(dims, cells)
    sizes = [params_per_cell(d) for d in cdims]  # raises on unsupported cells
    nparams = sum(sizes)

    perm = [i for cell in cells for i in cell]
    if perm == list(range(dims.n)):
        inv = None
    else:
        idx = permutation_indices(dims.dims, perm)
        inv = np.empty_like(idx)
        inv[idx] = np.arange(idx.size)

    mat = np.asarray(rho.mat)
    s_rho = von_neumann_entropy(rho)
    splits = np.cumsum(sizes)[:-1]

    def objective(x: np.ndarray) -> float:
        parts = np.split(x, splits)
        b = np.array([[1.0 + 0j]])
        for chunk, d in zip(parts, cdims):
            u = qubit_basis_unitary(*chunk) if d == 2 else generator_unitary(chunk, d)
            b = np.kron(b, u)
        if inv is not None:
            b = b[inv]
        return shannon(_pinch_probs(mat, b)) - s_rho

    starts = cfg.resolved_starts(cdims)
    best_val = np.inf
    best_x = None
    total_evals = 0
    for k in range(starts):
        if k == 0:
            x0 = np.zeros(nparams)  # computational basis: exact for classical inputs
        else:
            x0 = _random_start(np.random.default_rng(cfg.rng_seed + k), cdims)
        res = scipy.optimize.minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": cfg.max_evals, "fatol": cfg.ftol, "xatol": 1e-6},
        )
        total_evals += res.nfev
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = res.x
    if best_x is None or not np.isfinite(best_val):
        raise RuntimeError("optimizer produced no finite evaluation")  # unreachable for valid rho

    basis = basis_from_params(best_x, cells, dims)
    chi = dephase(rho, basis)
    return _SearchResult(chi, basis, best_val, total_evals)
