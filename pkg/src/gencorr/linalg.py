"""Dense complex linear algebra on small composite Hilbert spaces.

Carries the two state types (DensityMatrix, PureState) used throughout, plus
tensor products, partial traces, Hermitian eigendecompositions and matrix
functions on the support.  Basis convention: the computational-basis index is
the big-endian mixed-radix number over the subsystem dimensions (subsystem 0
most significant), which is exactly numpy's Kronecker-product ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "CompositeDims",
    "DensityMatrix",
    "PureState",
    "tensor",
    "kron_all",
    "partial_trace",
    "eig_hermitian",
    "matrix_log2_on_support",
    "hermitize",
    "permutation_indices",
    "permute_subsystems",
    "density",
    "state_to_json",
    "state_from_json",
    "save_state",
    "load_state",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by all validation and support checks."""

    herm: float = 1e-9
    trace: float = 1e-9
    psd: float = 1e-9
    norm: float = 1e-9
    clip: float = 1e-12


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class CompositeDims:
    """Ordered per-subsystem dimensions of a composite Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise ValueError("need at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def subset(self, indices) -> "CompositeDims":
        return CompositeDims(tuple(self.dims[i] for i in indices))


def _as_dims(dims) -> CompositeDims:
    return dims if isinstance(dims, CompositeDims) else CompositeDims(tuple(dims))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (M + M†)/2; cheap guard against accumulated drift."""
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD operator with explicit subsystem structure.

    The backing array is immutable after construction, so values are safe to
    share between concurrent workers.
    """

    dims: CompositeDims
    mat: np.ndarray

    def __init__(self, dims, mat, tol: Tolerances = DEFAULT_TOL) -> None:
        dims = _as_dims(dims)
        mat = np.asarray(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got {mat.shape}")
        if mat.shape[0] != dims.total:
            raise ValueError(
                f"matrix side {mat.shape[0]} does not match dims {dims.dims}"
            )
        herm_dev = np.abs(mat - mat.conj().T).max()
        if herm_dev > tol.herm:
            raise ValueError(f"not Hermitian: max|M - M†| = {herm_dev:.3e}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > tol.trace:
            raise ValueError(f"trace must be 1, got {tr}")
        lo = float(np.linalg.eigvalsh(hermitize(mat)).min())
        if lo < -tol.psd:
            raise ValueError(f"negative eigenvalue {lo:.3e} below -{tol.psd:.0e}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def n(self) -> int:
        return self.dims.n

    @property
    def dim(self) -> int:
        return self.dims.total


@dataclass(frozen=True)
class PureState:
    """Normalized state vector on a composite space."""

    dims: CompositeDims
    vec: np.ndarray

    def __init__(self, dims, vec, tol: Tolerances = DEFAULT_TOL) -> None:
        dims = _as_dims(dims)
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        if vec.shape[0] != dims.total:
            raise ValueError(f"vector length {vec.shape[0]} does not match dims {dims.dims}")
        nrm = float(np.linalg.norm(vec))
        if abs(nrm - 1.0) > tol.norm:
            raise ValueError(f"norm must be 1, got {nrm}")
        vec = vec.copy()
        vec.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "vec", vec)

    @property
    def n(self) -> int:
        return self.dims.n

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.dims, np.outer(self.vec, self.vec.conj()))


def density(psi: PureState) -> DensityMatrix:
    """|psi><psi| as a DensityMatrix."""
    return psi.to_density()


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a's indices major."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def _check_subset(n: int, subset) -> tuple[int, ...]:
    subset = tuple(int(i) for i in subset)
    if len(subset) == 0:
        raise ValueError("subsystem subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"duplicate subsystem indices in {subset}")
    if any(i < 0 or i >= n for i in subset):
        raise ValueError(f"subsystem indices {subset} out of range for n={n}")
    return subset


def _ptrace_arr(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Partial trace on a raw array; keep indices must be validated & sorted."""
    dims = list(dims)
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = mat.reshape(dims + dims)
    perm = list(keep) + traced + [i + n for i in keep] + [i + n for i in traced]
    t = np.transpose(t, perm)
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    return np.einsum("abcb->ac", t.reshape(dk, dt, dk, dt))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the kept subsystems, in original subsystem order."""
    keep = tuple(sorted(_check_subset(rho.n, keep)))
    if len(keep) == rho.n:
        return rho
    red = _ptrace_arr(np.asarray(rho.mat), rho.dims.dims, keep)
    return DensityMatrix(rho.dims.subset(keep), hermitize(red))


def eig_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Symmetrizes the input first; columns of the returned matrix are the
    orthonormal eigenvectors.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    w, v = np.linalg.eigh(hermitize(m))
    return w, v


def matrix_log2_on_support(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """log2 of a PSD Hermitian matrix, restricted to its support.

    Eigenvalues below tol.clip are excluded (treated as outside the support);
    a genuinely negative eigenvalue raises.
    """
    w, v = eig_hermitian(m)
    if w.min() < -tol.psd:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w.min():.3e}")
    mask = w > tol.clip
    vs = v[:, mask]
    return (vs * np.log2(w[mask])) @ vs.conj().T


def permutation_indices(dims, perm) -> np.ndarray:
    """Basis-index map realizing a subsystem reordering.

    perm lists source subsystems in their new order; entry m of the result is
    the original composite index of permuted composite index m.
    """
    dims = list(dims)
    n = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    total = int(np.prod(dims))
    coords = np.unravel_index(np.arange(total), [dims[p] for p in perm])
    orig = [None] * n
    for slot, p in enumerate(perm):
        orig[p] = coords[slot]
    return np.ravel_multi_index(orig, dims)


def permute_subsystems(mat: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder the subsystems of an operator via an exact index map."""
    idx = permutation_indices(dims, perm)
    return np.asarray(mat)[np.ix_(idx, idx)]


def state_to_json(state: DensityMatrix | PureState) -> str:
    """Serialize to the {"dims", "re", "im"} JSON schema (exact round-trip)."""
    if isinstance(state, DensityMatrix):
        arr = np.asarray(state.mat)
        re, im = arr.real.tolist(), arr.imag.tolist()
    else:
        vec = np.asarray(state.vec)
        re, im = vec.real.tolist(), vec.imag.tolist()
    return json.dumps({"dims": list(state.dims.dims), "re": re, "im": im})


def state_from_json(text: str) -> DensityMatrix | PureState:
    obj = json.loads(text)
    dims = tuple(obj["dims"])
    arr = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if arr.ndim == 2:
        return DensityMatrix(dims, arr)
    return PureState(dims, arr)


def save_state(state: DensityMatrix | PureState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_to_json(state))


def load_state(path) -> DensityMatrix | PureState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(fh.read())
