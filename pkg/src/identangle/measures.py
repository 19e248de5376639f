"""Entanglement and coherence quantifiers.

Von Neumann entropy, pure-state I-concurrence, Schmidt decompositions
across detector modes or particle-label groups, and closed-form reference
expressions for the two- and three-boson detector averages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from .algebra import DensityMatrix
from .errors import BipartitionError, ConsistencyError, NormalizationError
from .states import (
    OccupationKey,
    SpatialMode,
    Spin,
    Statistics,
    SymmetricKet,
    occupation_key,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def von_neumann_entropy(
    rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Entropy -sum(l * log2(l)) over eigenvalues of a trace-1 density matrix.

    Eigenvalues below the entropy cutoff are skipped to avoid 0*log(0)
    noise.  The result is clamped to [0, log2(dim)].
    """
    trace = rho.trace
    if abs(trace - 1.0) > tol.trace_check:
        raise NormalizationError(
            f"entropy requires unit trace, got {trace!r}"
        )
    evs = rho.eigenvalues()
    s = -sum(float(v) * math.log2(float(v)) for v in evs if v > tol.entropy_cutoff)
    return min(max(s, 0.0), math.log2(len(rho.basis)) if len(rho.basis) > 1 else 0.0)


@dataclass(frozen=True)
class ModeSplit:
    """Bipartition of the spatial labels into a left and a right detector side."""

    left: Tuple[str, ...] = ("L",)
    right: Tuple[str, ...] = ("R",)


@dataclass(frozen=True)
class LabelSplit:
    """Bipartition of the particle labels into groups of n_left and n_right."""

    n_left: int
    n_right: int


Bipartition = Union[ModeSplit, LabelSplit]


@dataclass(frozen=True)
class SchmidtResult:
    """Schmidt data of a pure bipartite state.

    Coefficients are real, nonnegative, descending, with squares summing to
    one; phases are absorbed into the right basis.  ``bipartition`` records
    ("modes", n_left_particles, n_right_particles) or
    ("labels", n_left_labels, n_right_labels).
    """

    coefficients: Tuple[float, ...]
    left_basis: Tuple[SymmetricKet, ...]
    right_basis: Tuple[SymmetricKet, ...]
    bipartition: Tuple[str, int, int]


def schmidt_decompose(
    psi: SymmetricKet,
    bipartition: Bipartition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SchmidtResult:
    """Schmidt decomposition of a normalized pure state.

    Mode splits factor the occupation keys across two disjoint spatial
    label sets and require a fixed particle count on each side.  Label
    splits treat a state whose particles all share one spatial mode as a
    symmetric spin state and split its particle labels into two groups.
    """
    norm = psi.norm()
    if abs(norm - 1.0) > tol.comparison:
        raise NormalizationError(f"schmidt_decompose needs a unit ket, norm = {norm!r}")
    if isinstance(bipartition, ModeSplit):
        return _schmidt_modes(psi, bipartition, tol)
    if isinstance(bipartition, LabelSplit):
        return _schmidt_labels(psi, bipartition, tol)
    raise BipartitionError(f"unsupported bipartition {bipartition!r}")


def _schmidt_modes(
    psi: SymmetricKet, split: ModeSplit, tol: Tolerances
) -> SchmidtResult:
    left_set = set(split.left)
    right_set = set(split.right)
    if left_set & right_set:
        raise BipartitionError("mode split sides must be disjoint")
    pairs: Dict[Tuple[OccupationKey, OccupationKey], complex] = {}
    counts = set()
    for key, value in psi.items():
        left = [lab for lab in key if lab[0] in left_set]
        right = [lab for lab in key if lab[0] in right_set]
        if len(left) + len(right) != len(key):
            raise BipartitionError(
                f"key {key} has support outside the requested mode split"
            )
        counts.add(len(left))
        pairs[(occupation_key(left), occupation_key(right))] = value
    if len(counts) != 1:
        raise BipartitionError(
            "mode split requires a fixed particle number on each side; "
            f"left counts seen: {sorted(counts)}"
        )
    n_left = counts.pop()
    n_right = psi.n_particles - n_left
    left_keys = sorted({lk for lk, _ in pairs})
    right_keys = sorted({rk for _, rk in pairs})
    m = np.zeros((len(left_keys), len(right_keys)), dtype=complex)
    li = {k: i for i, k in enumerate(left_keys)}
    ri = {k: i for i, k in enumerate(right_keys)}
    for (lk, rk), value in pairs.items():
        m[li[lk], ri[rk]] = value
    return _svd_result(
        m,
        left_keys,
        right_keys,
        n_left,
        n_right,
        ("modes", n_left, n_right),
        psi.statistics,
        tol,
    )


def _schmidt_labels(
    psi: SymmetricKet, split: LabelSplit, tol: Tolerances
) -> SchmidtResult:
    if psi.statistics is not Statistics.BOSON:
        raise BipartitionError("label splits are defined for bosonic states")
    n = psi.n_particles
    if split.n_left + split.n_right != n or split.n_left < 1 or split.n_right < 1:
        raise BipartitionError(
            f"label split {split} incompatible with {n} particles"
        )
    modes = {lab[0] for key in psi.keys() for lab in key}
    if len(modes) != 1:
        raise BipartitionError(
            "label split requires all particles in one spatial mode, "
            f"found modes {sorted(modes)}"
        )
    mode = modes.pop()
    # amplitude per number of spin-up particles
    c: Dict[int, complex] = {}
    for key, value in psi.items():
        ups = sum(1 for lab in key if lab[1] is Spin.UP)
        c[ups] = value
    nx, ny = split.n_left, split.n_right
    m = np.zeros((nx + 1, ny + 1), dtype=complex)
    for k, value in c.items():
        for kx in range(max(0, k - ny), min(k, nx) + 1):
            ky = k - kx
            weight = math.sqrt(
                math.comb(nx, kx) * math.comb(ny, ky) / math.comb(n, k)
            )
            m[kx, ky] += value * weight
    left_keys = [_dicke_key(mode, nx, kx) for kx in range(nx + 1)]
    right_keys = [_dicke_key(mode, ny, ky) for ky in range(ny + 1)]
    return _svd_result(
        m,
        left_keys,
        right_keys,
        nx,
        ny,
        ("labels", nx, ny),
        psi.statistics,
        tol,
    )


def _dicke_key(mode: str, n: int, ups: int) -> OccupationKey:
    return occupation_key(
        [(mode, Spin.UP)] * ups + [(mode, Spin.DOWN)] * (n - ups)
    )


def _svd_result(
    m: np.ndarray,
    left_keys: Sequence[OccupationKey],
    right_keys: Sequence[OccupationKey],
    n_left: int,
    n_right: int,
    bipartition: Tuple[str, int, int],
    statistics: Statistics,
    tol: Tolerances,
) -> SchmidtResult:
    u, s, vh = np.linalg.svd(m)
    keep = [i for i, val in enumerate(s) if val > tol.schmidt_cutoff]
    coeffs = tuple(float(s[i]) for i in keep)
    left = tuple(
        _basis_ket(n_left, left_keys, u[:, i], statistics, tol) for i in keep
    )
    right = tuple(
        _basis_ket(n_right, right_keys, vh[i, :].conj(), statistics, tol)
        for i in keep
    )
    return SchmidtResult(coeffs, left, right, bipartition)


def _basis_ket(
    n: int,
    keys: Sequence[OccupationKey],
    column: np.ndarray,
    statistics: Statistics,
    tol: Tolerances,
) -> SymmetricKet:
    amps = {k: complex(v) for k, v in zip(keys, column)}
    return SymmetricKet(n, statistics, amps, normalized=True, tol=tol)


def concurrence_pure(
    psi: SymmetricKet,
    bipartition: Bipartition,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """I-concurrence sqrt(2 * (1 - Tr(rho_reduced^2))) of a pure state.

    Equals 2 * l1 * l2 for Schmidt-rank-2 states.
    """
    norm = psi.norm()
    if abs(norm - 1.0) > tol.comparison:
        raise NormalizationError(f"concurrence_pure needs a unit ket, norm = {norm!r}")
    coeffs = schmidt_decompose(psi, bipartition, tol=tol).coefficients
    purity = sum(c ** 4 for c in coeffs)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


# ---------------------------------------------------------------------------
# Closed-form references for detector-projected boson ensembles.
#
# Both expressions give the postselected average of the sector cross-term
# measure l1*l2 (half the I-concurrence on rank-2 sectors), which is the
# convention used by detection.entanglement_of_particles for the
# "concurrence" flavor.
# ---------------------------------------------------------------------------


def two_boson_average_concurrence(theta1: float, theta2: float) -> float:
    """Closed form C1*C2/4 for two opposite-spin bosons at two detectors.

    Independent of the relative phases.  C_j = 2*cos(theta_j)*sin(theta_j).
    """
    c1 = 2.0 * math.cos(theta1) * math.sin(theta1)
    c2 = 2.0 * math.cos(theta2) * math.sin(theta2)
    return 0.25 * c1 * c2


def three_boson_projected_norm_sq(
    thetas: Sequence[float], omegas: Sequence[float]
) -> float:
    """Squared norm of the unnormalized projected state of three bosons
    (two spin-up, one spin-down) written in its conventional amplitude form.

    Equals c1^2 c2^2 + s1^2 s2^2 + P^2 / 2 with P the magnitude of the
    interference sum of the two spin-up particles.
    """
    t1, t2, _ = thetas
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    p_sq = _interference_sq(thetas, omegas)
    return c1 * c1 * c2 * c2 + s1 * s1 * s2 * s2 + 0.5 * p_sq


def _interference_sq(thetas: Sequence[float], omegas: Sequence[float]) -> float:
    t1, t2, _ = thetas
    w1, w2, _ = omegas
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    return (
        c1 * c1 * s2 * s2
        + s1 * s1 * c2 * c2
        + 2.0 * math.cos(w1 - w2) * c1 * s1 * c2 * s2
    )


def three_boson_average_concurrence(
    thetas: Sequence[float], omegas: Sequence[float]
) -> float:
    """Closed-form average concurrence for three bosons (two up, one down).

    P * sin(t3) * cos(t3) * (c1 c2 + s1 s2) / (sqrt(2) * N) with N the
    squared norm of :func:`three_boson_projected_norm_sq`.  Matches the
    numerical postselected average of the sector cross-term measure.
    """
    if len(thetas) != 3 or len(omegas) != 3:
        raise ConsistencyError("exactly three angles are required")
    t1, t2, t3 = thetas
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c3, s3 = math.cos(t3), math.sin(t3)
    p = math.sqrt(max(0.0, _interference_sq(thetas, omegas)))
    norm_sq = three_boson_projected_norm_sq(thetas, omegas)
    return p * s3 * c3 * (c1 * c2 + s1 * s2) / (math.sqrt(2.0) * norm_sq)


def three_boson_average_concurrence_coherences(
    c1: float,
    c2: float,
    c3: float,
    delta_omega: float,
    same_side: bool,
) -> float:
    """Coherence-variable form of :func:`three_boson_average_concurrence`.

    The square roots carry opposite signs that flip with the branch:
    ``same_side`` is True when theta_1 and theta_2 lie on the same side of
    pi/4 (then the cos(delta) bracket takes the minus sign and the other
    bracket the plus sign), False when they straddle it.
    """
    for c in (c1, c2, c3):
        if not 0.0 <= c <= 1.0 + 1e-12:
            raise ConsistencyError(f"coherences must lie in [0, 1], got {c}")
    eps = 1.0 if same_side else -1.0
    root = math.sqrt(max(0.0, (1.0 - c1 * c1) * (1.0 - c2 * c2)))
    first = max(0.0, 1.0 + c1 * c2 * math.cos(delta_omega) - eps * root)
    second = max(0.0, 1.0 + c1 * c2 + eps * root)
    norm_sq = 0.5 * (1.0 + eps * root) + 0.25 * first
    return c3 * math.sqrt(first * second) / (4.0 * math.sqrt(2.0) * norm_sq)


# ---------------------------------------------------------------------------
# Schmidt equivalence of particle-label and detector-mode decompositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchmidtEquivalenceReport:
    """Comparison of label-based and mode-based Schmidt coefficients."""

    input_coefficients: Tuple[float, ...]
    output_coefficients: Tuple[float, ...]
    max_abs_diff: float
    sector_probability: float


def dicke_state(
    n_total: int,
    n_up: int,
    mode: str = "psi",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SymmetricKet:
    """Symmetric state of n_total bosons in one spatial mode, n_up spin-up."""
    if not 0 <= n_up <= n_total or n_total < 1:
        raise ConsistencyError(f"invalid spin split ({n_up} of {n_total})")
    key = occupation_key(
        [(mode, Spin.UP)] * n_up + [(mode, Spin.DOWN)] * (n_total - n_up)
    )
    return SymmetricKet(
        n_total, Statistics.BOSON, {key: 1.0 + 0j}, normalized=True, tol=tol
    )


def verify_schmidt_equivalence(
    n_total: int,
    n_up: int,
    theta,
    omega,
    split: Tuple[int, int],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SchmidtEquivalenceReport:
    """Compare label-group Schmidt coefficients with mode-split ones.

    The reference input is the fully overlapping state of ``n_total``
    bosons in one mode with ``n_up`` spin-up; its particle labels are split
    into groups of sizes ``split``.  Each particle's mode is then divided
    over the two detectors (theta, omega per particle, or shared scalars),
    the outcome with local particle numbers equal to ``split`` is
    postselected, and its Schmidt coefficients across the detector modes
    are compared against the input ones.  Equal (theta, omega) for all
    particles reproduces the input coefficients exactly; distinct angles
    generally do not, and the deviation is reported.
    """
    from .detection import ParticleEnsemble, project_onto_detectors

    n_left, n_right = split
    if n_left + n_right != n_total:
        raise ConsistencyError(
            f"split {split} does not partition {n_total} particles"
        )
    if n_left < 1 or n_right < 1:
        raise ConsistencyError("both sides of the split must be nonempty")
    thetas = _broadcast_angle(theta, n_total, "theta")
    omegas = _broadcast_angle(omega, n_total, "omega")

    reference = dicke_state(n_total, n_up, tol=tol)
    input_coeffs = schmidt_decompose(
        reference, LabelSplit(n_left, n_right), tol=tol
    ).coefficients

    ensemble = ParticleEnsemble(
        n_up, tuple(SpatialMode(theta=t, omega=w) for t, w in zip(thetas, omegas))
    )
    decomposition = project_onto_detectors(ensemble, tol=tol)
    sector = decomposition.sector(n_left)
    output_coeffs = schmidt_decompose(sector.state, ModeSplit(), tol=tol).coefficients

    width = max(len(input_coeffs), len(output_coeffs))
    padded_in = list(input_coeffs) + [0.0] * (width - len(input_coeffs))
    padded_out = list(output_coeffs) + [0.0] * (width - len(output_coeffs))
    diff = max(abs(a - b) for a, b in zip(padded_in, padded_out))
    return SchmidtEquivalenceReport(
        input_coefficients=input_coeffs,
        output_coefficients=output_coeffs,
        max_abs_diff=diff,
        sector_probability=sector.probability,
    )


def _broadcast_angle(value, n: int, name: str) -> Tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),) * n
    values = tuple(float(v) for v in value)
    if len(values) != n:
        raise ConsistencyError(
            f"{name} must be a scalar or a sequence of length {n}, got {len(values)}"
        )
    return values
