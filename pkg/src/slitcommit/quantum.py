"""Dense complex linear algebra for small Hilbert spaces (dimension <= 16).

States, density operators, partial trace, trace distance, minimum-error
(Helstrom) discrimination, and construction of the local cheating unitary
that maps one bipartite purification onto another when the receiver-side
marginals coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadPriors, DimensionMismatch, NotNormalized, ReducedStatesDiffer

__all__ = [
    "NumericPolicy",
    "DEFAULT_POLICY",
    "PureState",
    "DensityMatrix",
    "dm_from_state",
    "partial_trace",
    "trace_distance",
    "helstrom_success",
    "find_local_unitary",
    "apply_local_unitary",
    "slit_left",
    "slit_right",
    "slit_both_open",
    "slit_single_mixture",
    "random_pure_state",
    "random_density_matrix",
    "haar_unitary",
]


@dataclass(frozen=True)
class NumericPolicy:
    """Centralized numeric tolerances.

    One knob set for the whole package: ``equality_tol`` governs "these two
    objects are the same" decisions (local-unitary construction, attack
    feasibility), ``positivity_tol`` governs eigenvalue floors, and
    ``norm_tol`` is how far an input vector may be from unit norm before it
    is rejected instead of snapped.
    """

    equality_tol: float = 1e-8
    positivity_tol: float = 1e-9
    hermiticity_tol: float = 1e-9
    trace_tol: float = 1e-9
    norm_tol: float = 1e-6
    dim_cap: int = 16


DEFAULT_POLICY = NumericPolicy()


def _as_complex_vector(amplitudes) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1 or vec.size == 0:
        raise DimensionMismatch("amplitudes must be a nonempty 1-D vector")
    return vec


class PureState:
    """Normalized state vector over a tensor product of small subsystems.

    ``dims`` lists the subsystem dimensions; their product must equal the
    amplitude-vector length.  Construction rejects vectors whose norm
    deviates from 1 by more than ``policy.norm_tol`` and snaps accepted
    vectors to exact unit norm, so stored states satisfy the tight
    (1e-9) invariant.
    """

    __slots__ = ("amplitudes", "dims")

    def __init__(self, amplitudes, dims: Sequence[int] | None = None,
                 policy: NumericPolicy = DEFAULT_POLICY):
        vec = _as_complex_vector(amplitudes)
        if dims is None:
            dims = (vec.size,)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise DimensionMismatch("subsystem dimensions must be >= 1")
        if int(np.prod(dims)) != vec.size:
            raise DimensionMismatch(
                f"dims {dims} inconsistent with vector length {vec.size}")
        if vec.size > policy.dim_cap:
            raise DimensionMismatch(
                f"total dimension {vec.size} exceeds cap {policy.dim_cap}")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > policy.norm_tol:
            raise NotNormalized(f"norm {norm} deviates from 1 by more than "
                                f"{policy.norm_tol}")
        vec = vec / norm
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, *_):
        raise AttributeError("PureState is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes),
                         self.dims + other.dims)

    def __repr__(self):
        return f"PureState(dim={self.dim}, dims={self.dims})"


class DensityMatrix:
    """Density operator: Hermitian, unit trace, positive semidefinite.

    Validation happens at construction so that every operation returning a
    DensityMatrix automatically certifies the physicality invariants.
    """

    __slots__ = ("entries", "dim")

    def __init__(self, entries, policy: NumericPolicy = DEFAULT_POLICY):
        mat = np.asarray(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch("density matrix must be square")
        dim = mat.shape[0]
        if dim < 1 or dim > policy.dim_cap:
            raise DimensionMismatch(f"dimension {dim} outside [1, {policy.dim_cap}]")
        if np.max(np.abs(mat - mat.conj().T)) > policy.hermiticity_tol:
            raise DimensionMismatch("matrix is not Hermitian within tolerance")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > policy.trace_tol:
            raise DimensionMismatch(f"trace {tr} deviates from 1")
        if float(np.min(np.linalg.eigvalsh(mat))) < -policy.positivity_tol:
            raise DimensionMismatch("matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, *_):
        raise AttributeError("DensityMatrix is immutable")

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def dm_from_state(psi) -> DensityMatrix:
    """Rank-1 projector |psi><psi| for a pure state.

    Accepts a PureState or a raw amplitude vector; raw vectors are checked
    for normalization first (NotNormalized beyond 1e-6 deviation).
    """
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    vec = psi.amplitudes
    return DensityMatrix(np.outer(vec, vec.conj()))


def _check_bipartite(dim: int, dims) -> tuple[int, int]:
    if len(dims) != 2:
        raise DimensionMismatch("expected exactly two subsystem dimensions")
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a * d_b != dim:
        raise DimensionMismatch(f"dims {d_a}x{d_b} != total dimension {dim}")
    return d_a, d_b


def partial_trace(rho: DensityMatrix, dims, keep) -> DensityMatrix:
    """Trace out one side of a bipartite density matrix.

    ``keep`` selects the surviving subsystem: 0/'A' keeps the first factor,
    1/'B' the second.
    """
    d_a, d_b = _check_bipartite(rho.dim, dims)
    tensor = rho.entries.reshape(d_a, d_b, d_a, d_b)
    if keep in (0, "A", "a"):
        reduced = np.einsum("abcb->ac", tensor)
    elif keep in (1, "B", "b"):
        reduced = np.einsum("abad->bd", tensor)
    else:
        raise DimensionMismatch(f"unknown subsystem tag {keep!r}")
    return DensityMatrix(reduced)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) * sum of absolute eigenvalues of (rho - sigma)."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch("trace distance needs equal dimensions")
    eigs = np.linalg.eigvalsh(rho.entries - sigma.entries)
    return 0.5 * float(np.sum(np.abs(eigs)))


def helstrom_success(rho0: DensityMatrix, p0: float,
                     rho1: DensityMatrix, p1: float) -> float:
    """Optimal single-shot discrimination success probability.

    Returns (1/2) * (1 + ||p1*rho1 - p0*rho0||_1), the Helstrom bound for
    deciding between rho0 (prior p0) and rho1 (prior p1).  Always lies in
    [max(p0, p1), 1]: guessing the favored hypothesis is never beaten.
    """
    if p0 < 0.0 or p1 < 0.0 or abs(p0 + p1 - 1.0) > 1e-12:
        raise BadPriors(f"priors ({p0}, {p1}) must be nonnegative and sum to 1")
    if rho0.dim != rho1.dim:
        raise DimensionMismatch("hypothesis states must share a dimension")
    gap = p1 * rho1.entries - p0 * rho0.entries
    one_norm = float(np.sum(np.abs(np.linalg.eigvalsh(gap))))
    return 0.5 * (1.0 + one_norm)


def apply_local_unitary(unitary: np.ndarray, psi: PureState, dims) -> PureState:
    """Apply (U x I) to a bipartite pure state."""
    d_a, d_b = _check_bipartite(psi.dim, dims)
    if unitary.shape != (d_a, d_a):
        raise DimensionMismatch("unitary does not act on the first factor")
    mat = unitary @ psi.amplitudes.reshape(d_a, d_b)
    return PureState(mat.reshape(-1), (d_a, d_b))


def find_local_unitary(psi0: PureState, psi1: PureState, dims,
                       policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Local unitary U on the first factor with (U x I)|psi0> = |psi1>.

    Exists exactly when the two states have the same reduced state on the
    second factor; if the reduced states disagree by more than
    ``policy.equality_tol`` in trace distance the construction is
    impossible and ReducedStatesDiffer (carrying the gap) is raised.

    Construction: write each state as a d_a x d_b coefficient matrix M.
    (U x I) acts as M0 -> U @ M0, so U must map M0's left singular vectors
    onto the frame W = M1 V0 S0^{-1}, which is an isometry precisely when
    the second-factor marginals agree.  W is snapped to the nearest
    isometry (polar step), which also resolves the freedom left by
    degenerate singular values, and the kernel of M0 is completed
    unitarily.  The global phase is fixed so the largest-magnitude
    amplitude of (U x I)|psi0> matches psi1's phase at that index.
    """
    d_a, d_b = _check_bipartite(psi0.dim, dims)
    if psi1.dim != psi0.dim:
        raise DimensionMismatch("states must share dimensions")

    reduced0 = partial_trace(dm_from_state(psi0), (d_a, d_b), keep="B")
    reduced1 = partial_trace(dm_from_state(psi1), (d_a, d_b), keep="B")
    gap = trace_distance(reduced0, reduced1)
    if gap > policy.equality_tol:
        raise ReducedStatesDiffer(gap)

    mat0 = psi0.amplitudes.reshape(d_a, d_b)
    mat1 = psi1.amplitudes.reshape(d_a, d_b)
    left0, sing0, right0h = np.linalg.svd(mat0)

    # Singular values below sqrt(equality_tol) carry probability weight
    # within the tolerance already granted to the marginals; treat them as
    # zero and let the unitary completion cover those directions.
    cutoff = np.sqrt(policy.equality_tol)
    rank = int(np.sum(sing0 > cutoff))
    if rank == 0:
        raise DimensionMismatch("first state has no support above tolerance")

    right0 = right0h[:rank].conj().T                      # d_b x rank
    frame = (mat1 @ right0) / sing0[:rank]                # d_a x rank
    # Nearest isometry to the matched frame (exact when marginals agree).
    fu, _, fvh = np.linalg.svd(frame, full_matrices=False)
    frame = fu @ fvh

    source = left0[:, :rank]
    unitary = frame @ source.conj().T
    if rank < d_a:
        source_perp = np.linalg.qr(source, mode="complete")[0][:, rank:]
        frame_perp = np.linalg.qr(frame, mode="complete")[0][:, rank:]
        unitary = unitary + frame_perp @ source_perp.conj().T

    mapped = unitary @ mat0
    anchor = int(np.argmax(np.abs(psi1.amplitudes)))
    ratio = psi1.amplitudes[anchor] / mapped.reshape(-1)[anchor]
    if abs(ratio) > 0:
        unitary = unitary * (ratio / abs(ratio))
    return unitary


# --- slit-basis states -----------------------------------------------------
#
# The two-dimensional which-slit space: |L> passes the left slit, |R> the
# right one.  A particle facing both slits open is the equal superposition,
# whose overlap with either basis state is 1/sqrt(2) -- the two event types
# cannot be discriminated with certainty.

def slit_left() -> PureState:
    return PureState([1.0, 0.0], (2,))


def slit_right() -> PureState:
    return PureState([0.0, 1.0], (2,))


def slit_both_open() -> PureState:
    return PureState(np.array([1.0, 1.0]) / np.sqrt(2.0), (2,))


def slit_single_mixture() -> DensityMatrix:
    """Equal mixture of the two single-slit states: I/2."""
    return DensityMatrix(np.eye(2) / 2.0)


# --- random draws (tests and toy-pair construction) ------------------------

def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    total = int(np.prod(dims))
    vec = rng.normal(size=total) + 1j * rng.normal(size=total)
    return PureState(vec / np.linalg.norm(vec), dims)


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    gin = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = gin @ gin.conj().T
    return DensityMatrix(rho / np.trace(rho))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    gin = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(gin)
    return q * (np.diag(r) / np.abs(np.diag(r)))
