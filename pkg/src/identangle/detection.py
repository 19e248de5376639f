"""Detector projection of boson ensembles and coherence-based separability.

An ensemble of N bosons with pseudospins meets two distinguishable
detectors L and R.  Projecting the symmetrized state onto the detector
subspace and grouping outcomes by the number q of particles found at L
(particle-number superselection) yields a sector decomposition whose
weighted entanglement is the postselected "entanglement of particles".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algebra import (
    DensityMatrix,
    pure_to_density,
    symmetrized_partial_trace,
    transition_amplitude,
)
from .errors import (
    BoundsError,
    ConsistencyError,
    SectorError,
    SizeLimitError,
)
from .measures import von_neumann_entropy
from .permanent import permanent_naive, permanent_ryser
from .states import (
    OccupationKey,
    SingleParticleKet,
    SpatialMode,
    Spin,
    Statistics,
    SymmetricKet,
    ket_multiplicities,
    make_product_state,
    mode_ket,
    normalization_total,
    occupation_key,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

PROJECTION_SIZE_LIMIT = 12

MEASURES = ("entropy", "concurrence")

_PERMANENT_KERNELS = {"ryser": permanent_ryser, "naive": permanent_naive}


def coherence(mode: SpatialMode) -> float:
    """Spatial coherence 2*cos(theta)*sin(theta) of a mode in the {L, R} basis."""
    return mode.coherence()


@dataclass(frozen=True)
class ParticleEnsemble:
    """N bosons ordered spin-up first: modes[:n_up] are up, the rest down."""

    n_up: int
    modes: Tuple[SpatialMode, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.modes:
            raise ConsistencyError("ensemble must contain at least one particle")
        if not 0 <= self.n_up <= len(self.modes):
            raise ConsistencyError(
                f"n_up = {self.n_up} outside [0, {len(self.modes)}]"
            )

    @property
    def n_total(self) -> int:
        return len(self.modes)

    def spins(self) -> Tuple[Spin, ...]:
        return tuple(
            Spin.UP if j < self.n_up else Spin.DOWN for j in range(self.n_total)
        )

    def kets(self, tol: Tolerances = DEFAULT_TOLERANCES) -> List[SingleParticleKet]:
        return [
            mode_ket(mode, spin, tol=tol)
            for mode, spin in zip(self.modes, self.spins())
        ]

    def coherences(self) -> Tuple[float, ...]:
        return tuple(m.coherence() for m in self.modes)


@dataclass(frozen=True)
class DetectionMatrixSpec:
    """Detection outcome with alpha spin-up and beta spin-down particles at L."""

    alpha: int
    beta: int


@dataclass(frozen=True)
class Sector:
    """One superselection sector: q particles at L with probability p."""

    q: int
    probability: float
    state: SymmetricKet


@dataclass(frozen=True)
class SectorDecomposition:
    """Projection outcome grouped by the particle number q found at L."""

    sectors: Tuple[Sector, ...]
    leak_probability: float

    def probabilities(self) -> Dict[int, float]:
        return {s.q: s.probability for s in self.sectors}

    def sector(self, q: int) -> Sector:
        for s in self.sectors:
            if s.q == q:
                return s
        raise SectorError(f"sector q = {q} is empty or absent")


def detection_key(ensemble: ParticleEnsemble, spec: DetectionMatrixSpec) -> OccupationKey:
    """Occupation key of the detector outcome |L^a up, L^b down, R...>."""
    n, total = ensemble.n_up, ensemble.n_total
    _check_spec(ensemble, spec)
    labels = (
        [("L", Spin.UP)] * spec.alpha
        + [("L", Spin.DOWN)] * spec.beta
        + [("R", Spin.UP)] * (n - spec.alpha)
        + [("R", Spin.DOWN)] * (total - n - spec.beta)
    )
    return occupation_key(labels)


def _check_spec(ensemble: ParticleEnsemble, spec: DetectionMatrixSpec):
    if not 0 <= spec.alpha <= ensemble.n_up:
        raise BoundsError(
            f"alpha = {spec.alpha} outside [0, {ensemble.n_up}]"
        )
    if not 0 <= spec.beta <= ensemble.n_total - ensemble.n_up:
        raise BoundsError(
            f"beta = {spec.beta} outside [0, {ensemble.n_total - ensemble.n_up}]"
        )


def build_detection_matrix(
    ensemble: ParticleEnsemble, spec: DetectionMatrixSpec
) -> np.ndarray:
    """Overlap matrix A with A[j, k] = <detector bra j | particle ket k>.

    Rows run over the outcome bras in the order L-up (alpha), L-down (beta),
    R-up, R-down; columns over the input kets (ups first).  Spin-mismatched
    entries vanish, so the matrix splits into the block pattern
    [[C_a, 0, S_(n-a), 0], [0, C_b, 0, S_(N-n-b)]] up to a row ordering.
    """
    _check_spec(ensemble, spec)
    n, total = ensemble.n_up, ensemble.n_total
    a = np.zeros((total, total), dtype=complex)
    bras: List[Tuple[str, Spin]] = (
        [("L", Spin.UP)] * spec.alpha
        + [("L", Spin.DOWN)] * spec.beta
        + [("R", Spin.UP)] * (n - spec.alpha)
        + [("R", Spin.DOWN)] * (total - n - spec.beta)
    )
    spins = ensemble.spins()
    for j, (side, bra_spin) in enumerate(bras):
        for k, (mode, ket_spin) in enumerate(zip(ensemble.modes, spins)):
            if bra_spin is not ket_spin:
                continue
            sin_phi = math.sin(mode.phi)
            if side == "L":
                a[j, k] = sin_phi * math.cos(mode.theta)
            else:
                a[j, k] = (
                    sin_phi
                    * math.sin(mode.theta)
                    * complex(math.cos(mode.omega), math.sin(mode.omega))
                )
    return a


def project_onto_detectors(
    ensemble: ParticleEnsemble,
    method: str = "ryser",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SectorDecomposition:
    """Project the symmetrized ensemble state onto the two-detector subspace.

    Each outcome amplitude is a permanent of the corresponding detection
    matrix with the multiplicity normalizations of the outcome and input
    states; outcomes are grouped into sectors by q = alpha + beta.  Weight
    on remainder modes (phi < pi/2) appears as ``leak_probability``,
    computed independently from the expanded state so that probabilities
    plus leak summing to one is a genuine cross-check.
    """
    total = ensemble.n_total
    if total > PROJECTION_SIZE_LIMIT:
        raise SizeLimitError(
            f"projection is capped at N <= {PROJECTION_SIZE_LIMIT}, got N = {total}"
        )
    try:
        kernel = _PERMANENT_KERNELS[method]
    except KeyError:
        raise ConsistencyError(f"unknown permanent kernel {method!r}") from None
    kets = ensemble.kets(tol=tol)
    n = ensemble.n_up
    norm_input = normalization_total(ket_multiplicities(kets), total)
    norm_sq = transition_amplitude(kets, kets, Statistics.BOSON, method=method).real
    if norm_sq <= tol.pruning:
        raise ConsistencyError("input state has vanishing norm")
    scale = math.factorial(total) * norm_input * math.sqrt(norm_sq)

    groups: Dict[int, Dict[OccupationKey, complex]] = {}
    for alpha in range(n + 1):
        for beta in range(total - n + 1):
            spec = DetectionMatrixSpec(alpha, beta)
            key = detection_key(ensemble, spec)
            outcome_norm = math.sqrt(
                math.factorial(alpha)
                * math.factorial(beta)
                * math.factorial(n - alpha)
                * math.factorial(total - n - beta)
                / math.factorial(total)
            )
            amp = kernel(build_detection_matrix(ensemble, spec)) / (
                scale * outcome_norm
            )
            if abs(amp) <= tol.pruning:
                continue
            groups.setdefault(alpha + beta, {})[key] = amp

    sectors: List[Sector] = []
    for q in sorted(groups, reverse=True):
        amps = groups[q]
        p = sum(abs(v) ** 2 for v in amps.values())
        if p < tol.pruning:
            continue
        root = math.sqrt(p)
        state = SymmetricKet(
            total,
            Statistics.BOSON,
            {k: v / root for k, v in amps.items()},
            normalized=True,
            tol=tol,
        )
        sectors.append(Sector(q, p, state))

    # independent leak estimate from the expanded state's remainder weight
    full = make_product_state(kets, Statistics.BOSON, tol=tol)
    leak = 0.0
    for key, value in full.items():
        if any(lab[0] not in ("L", "R") for lab in key):
            leak += abs(value) ** 2
    return SectorDecomposition(tuple(sectors), leak)


def _side_particle_count(state: SymmetricKet, side_labels: Tuple[str, ...]) -> int:
    counts = {
        sum(1 for lab in key if lab[0] in side_labels) for key in state.keys()
    }
    if len(counts) != 1:
        raise SectorError(
            f"state is not confined to one particle-number sector on {side_labels}"
        )
    return counts.pop()


def sector_reduced_density(
    state: SymmetricKet,
    traced_side: str = "L",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DensityMatrix:
    """Reduced density matrix of a sector state after tracing out one side.

    The traced side's spin-resolved occupation basis |side^a up, side^(q-a) down>
    for a = 0..q is used as the subsystem identity.
    """
    if traced_side not in ("L", "R"):
        raise ConsistencyError(f"traced_side must be 'L' or 'R', got {traced_side!r}")
    if not state.keys():
        raise SectorError("sector state is empty")
    q = _side_particle_count(state, (traced_side,))
    basis = [
        occupation_key(
            [(traced_side, Spin.UP)] * a + [(traced_side, Spin.DOWN)] * (q - a)
        )
        for a in range(q + 1)
    ]
    return symmetrized_partial_trace(pure_to_density(state, tol=tol), basis, tol=tol)


def _measure_value(rho: DensityMatrix, measure: str, tol: Tolerances) -> float:
    if measure == "entropy":
        return von_neumann_entropy(rho, tol=tol)
    if measure == "concurrence":
        # cross-term normalization: sqrt((1 - Tr rho^2)/2), equal to l1*l2
        # on rank-2 sectors and to half the I-concurrence; this is the
        # convention whose postselected average reproduces the closed forms
        # in measures.two_boson_average_concurrence and
        # measures.three_boson_average_concurrence.  Evaluated through
        # pairwise eigenvalue products, which stays exact for rank-1
        # reduced states where the subtraction 1 - purity would turn
        # normalization residue into sqrt-amplified noise.
        evs = [max(0.0, float(v)) for v in rho.eigenvalues()]
        trace = sum(evs)
        if trace <= tol.pruning:
            return 0.0
        pair_sum = 0.0
        for i in range(len(evs)):
            if evs[i] == 0.0:
                continue
            for j in range(i + 1, len(evs)):
                pair_sum += evs[i] * evs[j]
        return math.sqrt(pair_sum) / trace
    raise ConsistencyError(f"unknown measure {measure!r}, expected one of {MEASURES}")


def sector_entanglement(
    state: SymmetricKet,
    measure: str = "entropy",
    traced_side: str = "L",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Entanglement of one sector state across the two detector sides.

    Traces out ``traced_side`` over its spin-resolved basis and evaluates
    the chosen measure ("entropy" in bits, or "concurrence" with the
    cross-term normalization, see :func:`sector_reduced_density`).
    """
    rho = sector_reduced_density(state, traced_side=traced_side, tol=tol)
    return _measure_value(rho, measure, tol)


def entanglement_of_particles(
    ensemble: ParticleEnsemble,
    measure: str = "concurrence",
    method: str = "ryser",
    tol: Tolerances = DEFAULT_TOLERANCES,
    decomposition: Optional[SectorDecomposition] = None,
) -> float:
    """Postselected average entanglement sum_q p_q E(sector_q).

    Sector weights are renormalized to sum to one when some probability
    leaks outside the detector subspace.  Returns 0 when every particle
    misses both detectors.
    """
    if decomposition is None:
        decomposition = project_onto_detectors(ensemble, method=method, tol=tol)
    total_p = sum(s.probability for s in decomposition.sectors)
    if total_p <= tol.pruning:
        return 0.0
    value = 0.0
    for sector in decomposition.sectors:
        weight = sector.probability / total_p
        value += weight * sector_entanglement(sector.state, measure, tol=tol)
    return value


@dataclass(frozen=True)
class SeparabilityVerdict:
    """Outcome of the spatial-coherence separability criterion."""

    criterion_holds: bool
    entanglement: float
    separable: bool


def theorem1_separability_check(
    ensemble: ParticleEnsemble,
    measure: str = "concurrence",
    method: str = "ryser",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SeparabilityVerdict:
    """Check the coherence criterion: if every spin-up particle or every
    spin-down particle has zero spatial coherence, the projected state is
    separable.  The converse does not hold.
    """
    cs = ensemble.coherences()
    ups = cs[: ensemble.n_up]
    downs = cs[ensemble.n_up :]
    criterion = all(c <= tol.coherence_zero for c in ups) or all(
        c <= tol.coherence_zero for c in downs
    )
    value = entanglement_of_particles(ensemble, measure=measure, method=method, tol=tol)
    return SeparabilityVerdict(criterion, value, value < tol.separability)
