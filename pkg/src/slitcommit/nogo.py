"""Toy-scale demonstration of the purification attack and when it fails.

In the standard two-party model the committer holds a purification of the
receiver's evidence state.  If the receiver's marginals for the two bit
values coincide (perfect concealment), the two joint pure states are
related by a unitary acting on the committer's side alone, so she can flip
her commitment after the fact at zero risk.  ``mount_attack`` constructs
that unitary numerically whenever the marginals agree, and reports the
attack impossible -- with the distinguishability gap as evidence -- when
they do not.

The protocol simulated elsewhere in this package gives the receiver no
quantum state at all, so there is no marginal to match; its security rests
on decay-forced early measurement, not on state geometry.  The
product-state helper below makes the contrast concrete: two distinct
committer-side records with identical (trivial) receiver marginals are
always locally rotatable, which is precisely why holding the quantum data
would not by itself bind anyone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ImpossibleAttack
from .quantum import (DEFAULT_POLICY, NumericPolicy, PureState, dm_from_state,
                      apply_local_unitary, find_local_unitary, haar_unitary,
                      partial_trace, random_pure_state, trace_distance)

__all__ = [
    "ToyCommitment",
    "AttackPlan",
    "concealing_gap",
    "mount_attack",
    "random_concealing_pair",
    "random_perturbed_pair",
    "product_record_pair",
]


@dataclass(frozen=True)
class ToyCommitment:
    """A pair of bipartite purifications standing in for the two bit values."""

    psi0: PureState
    psi1: PureState
    label0: str = "bit 0"
    label1: str = "bit 1"

    def __post_init__(self):
        if len(self.psi0.dims) != 2 or self.psi0.dims != self.psi1.dims:
            raise DimensionMismatch("states must be bipartite with equal dims")

    @property
    def dims(self) -> tuple[int, int]:
        return self.psi0.dims


def concealing_gap(tc: ToyCommitment) -> float:
    """Trace distance between the receiver-side marginals."""
    r0 = partial_trace(dm_from_state(tc.psi0), tc.dims, keep="B")
    r1 = partial_trace(dm_from_state(tc.psi1), tc.dims, keep="B")
    return trace_distance(r0, r1)


@dataclass(frozen=True)
class AttackPlan:
    unitary: np.ndarray
    residual: float
    gap: float


def mount_attack(tc: ToyCommitment,
                 policy: NumericPolicy = DEFAULT_POLICY) -> AttackPlan:
    """Build the local cheating unitary, or prove it impossible.

    Raises ImpossibleAttack (carrying the gap) when the receiver marginals
    differ beyond tolerance; otherwise returns the unitary together with
    the vector-norm residual of mapping psi0 onto psi1.
    """
    gap = concealing_gap(tc)
    if gap > policy.equality_tol:
        raise ImpossibleAttack(gap)
    unitary = find_local_unitary(tc.psi0, tc.psi1, tc.dims, policy)
    mapped = apply_local_unitary(unitary, tc.psi0, tc.dims)
    residual = float(np.linalg.norm(mapped.amplitudes - tc.psi1.amplitudes))
    return AttackPlan(unitary=unitary, residual=residual, gap=gap)


def _random_spectrum(k: int, rng: np.random.Generator,
                     degenerate: bool) -> np.ndarray:
    if degenerate:
        weights = np.full(k, 1.0 / k)
    else:
        weights = rng.dirichlet(np.ones(k))
        weights = np.maximum(weights, 1e-4)
        weights = weights / weights.sum()
    return np.sqrt(weights)


def random_concealing_pair(dims: tuple[int, int], rng: np.random.Generator,
                           degenerate: bool = False) -> ToyCommitment:
    """Two purifications sharing the receiver-side spectral data.

    Fixes one Schmidt spectrum and one receiver-side basis, then draws
    independent committer-side bases for the two states; the receiver
    marginals then agree by construction, which is exactly the situation
    the purification attack exploits.  ``degenerate=True`` uses a flat
    spectrum to exercise the non-unique-unitary regime.
    """
    d_a, d_b = dims
    k = min(d_a, d_b)
    coeffs = _random_spectrum(k, rng, degenerate)
    basis_b = haar_unitary(d_b, rng)[:, :k]
    states = []
    for _ in range(2):
        basis_a = haar_unitary(d_a, rng)[:, :k]
        mat = (basis_a * coeffs) @ basis_b.T
        states.append(PureState(mat.reshape(-1), dims))
    return ToyCommitment(psi0=states[0], psi1=states[1])


def random_perturbed_pair(dims: tuple[int, int], rng: np.random.Generator,
                          min_gap: float = 1e-3) -> ToyCommitment:
    """A concealing pair with psi1 perturbed until the marginals split."""
    base = random_concealing_pair(dims, rng)
    total = base.psi0.dim
    for _ in range(256):
        noise = rng.normal(size=total) + 1j * rng.normal(size=total)
        vec = base.psi1.amplitudes + 0.25 * noise / np.linalg.norm(noise)
        candidate = ToyCommitment(
            psi0=base.psi0,
            psi1=PureState(vec / np.linalg.norm(vec), dims),
        )
        if concealing_gap(candidate) > min_gap:
            return candidate
    raise RuntimeError("could not reach the requested gap")


def product_record_pair(dims: tuple[int, int],
                        rng: np.random.Generator) -> ToyCommitment:
    """Two product states with distinct committer records, same receiver state.

    Models a committer keeping a position-type record for bit 0 and a
    which-slit-type record for bit 1 while the receiver holds nothing that
    depends on the bit.  The committer-side vectors are drawn with a
    nontrivial overlap (neither equal up to phase nor orthogonal); the
    local unitary always exists, showing that record geometry alone would
    never bind her.
    """
    d_a, d_b = dims
    rec0 = random_pure_state((d_a,), rng)
    while True:
        rec1 = random_pure_state((d_a,), rng)
        overlap = abs(np.vdot(rec0.amplitudes, rec1.amplitudes))
        if 0.05 < overlap < 0.95:
            break
    shared_b = random_pure_state((d_b,), rng)
    return ToyCommitment(
        psi0=PureState(np.kron(rec0.amplitudes, shared_b.amplitudes), dims),
        psi1=PureState(np.kron(rec1.amplitudes, shared_b.amplitudes), dims),
        label0="position-type record",
        label1="which-slit-type record",
    )
