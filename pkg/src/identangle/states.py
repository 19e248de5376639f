"""Single-particle kets, detector modes, and symmetrized many-particle states.

Many-particle states are stored sparsely as amplitudes over occupation keys:
sorted multisets of (spatial label, spin) basis pairs.  The canonical key
collapses the permutation redundancy of the pseudo-labeled product form,
while :func:`expand_first_quantized` keeps the literal sum over label
permutations available as a brute-force oracle.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import ConsistencyError, NullStateError, SizeLimitError
from .tolerances import DEFAULT_TOLERANCES, Tolerances

EXPANSION_SIZE_LIMIT = 6


class Spin(enum.Enum):
    UP = "up"
    DOWN = "down"

    @property
    def index(self) -> int:
        return 0 if self is Spin.UP else 1

    def __lt__(self, other):
        if not isinstance(other, Spin):
            return NotImplemented
        return self.index < other.index


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


#: one orthonormal single-particle basis state: (spatial label, spin)
BasisLabel = Tuple[str, Spin]
#: canonical (sorted) multiset of basis labels for an N-particle state
OccupationKey = Tuple[BasisLabel, ...]


def _label_sort_key(label: BasisLabel):
    return (label[0], label[1].index)


def occupation_key(labels: Iterable[BasisLabel]) -> OccupationKey:
    """Canonical sorted occupation key from an iterable of basis labels."""
    return tuple(sorted(labels, key=_label_sort_key))


@dataclass(frozen=True)
class SpatialMode:
    """Spatial state of one particle relative to two detectors L and R.

    theta mixes the two detector modes, omega is the relative phase of the
    R component, phi weights the detector subspace against an orthogonal
    remainder mode (phi = pi/2 puts the particle fully in span{L, R}), and
    gamma is the phase of that remainder.  Modes sharing ``chi_id`` share
    one remainder state; distinct ids are mutually orthogonal.
    """

    theta: float
    omega: float = 0.0
    phi: float = math.pi / 2
    gamma: float = 0.0
    chi_id: str = "chi"

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ConsistencyError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 0.0 <= self.phi <= math.pi / 2:
            raise ConsistencyError(f"phi must lie in [0, pi/2], got {self.phi}")
        # phases are periodic; store them wrapped into [0, 2*pi)
        object.__setattr__(self, "omega", float(self.omega) % (2.0 * math.pi))
        object.__setattr__(self, "gamma", float(self.gamma) % (2.0 * math.pi))

    def coherence(self) -> float:
        """Off-diagonal weight 2*cos(theta)*sin(theta) in the {L, R} basis."""
        return 2.0 * math.cos(self.theta) * math.sin(self.theta)


class SingleParticleKet:
    """Complex amplitude vector over the (spatial label, spin) basis.

    Amplitudes below the pruning threshold are dropped at construction.
    Instances are treated as immutable values; do not mutate the mapping
    returned by :meth:`items`.
    """

    __slots__ = ("_amps",)

    def __init__(
        self,
        amplitudes: Mapping[BasisLabel, complex],
        *,
        unnormalized: bool = False,
        tol: Tolerances = DEFAULT_TOLERANCES,
    ):
        amps = {
            label: complex(value)
            for label, value in amplitudes.items()
            if abs(value) > tol.pruning
        }
        self._amps = amps
        if not unnormalized:
            n = self.norm()
            if abs(n - 1.0) > tol.normalization:
                raise ConsistencyError(
                    f"single-particle ket must be unit norm, got {n!r} "
                    "(pass unnormalized=True to skip the check)"
                )

    def items(self):
        return self._amps.items()

    def labels(self):
        return self._amps.keys()

    def amplitude(self, label: BasisLabel) -> complex:
        return self._amps.get(label, 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self._amps.values()))

    def inner(self, other: "SingleParticleKet") -> complex:
        """<self|other> in the shared orthonormal basis."""
        if len(self._amps) > len(other._amps):
            return sum(
                self._amps[l].conjugate() * v
                for l, v in other._amps.items()
                if l in self._amps
            )
        return sum(
            v.conjugate() * other._amps[l]
            for l, v in self._amps.items()
            if l in other._amps
        )

    def signature(self) -> tuple:
        """Hashable canonical form used to detect exactly equal kets."""
        return tuple(sorted(self._amps.items(), key=lambda kv: _label_sort_key(kv[0])))

    def __repr__(self):
        parts = ", ".join(
            f"{lab[0]}{'u' if lab[1] is Spin.UP else 'd'}: {amp:.4g}"
            for lab, amp in sorted(self._amps.items(), key=lambda kv: _label_sort_key(kv[0]))
        )
        return f"SingleParticleKet({{{parts}}})"


def mode_ket(mode: SpatialMode, spin: Spin, tol: Tolerances = DEFAULT_TOLERANCES) -> SingleParticleKet:
    """Unit-norm single-particle ket for a spatial mode with a fixed spin.

    Amplitudes are sin(phi)cos(theta) on (L, spin), sin(phi)sin(theta)e^{i omega}
    on (R, spin) and cos(phi)e^{i gamma} on the remainder mode (chi_id, spin).
    """
    sin_phi = math.sin(mode.phi)
    cos_phi = math.cos(mode.phi)
    amps = {
        ("L", spin): sin_phi * math.cos(mode.theta),
        ("R", spin): sin_phi * math.sin(mode.theta) * _phase(mode.omega),
        (mode.chi_id, spin): cos_phi * _phase(mode.gamma),
    }
    return SingleParticleKet(amps, tol=tol)


def _phase(angle: float) -> complex:
    return complex(math.cos(angle), math.sin(angle))


def normalization_total(multiplicities: Sequence[int], n_total: int) -> float:
    """Normalization factor sqrt(prod(nu_j!) / N!) of the symmetrized state.

    ``multiplicities`` are the repeat counts of the distinct single-particle
    states; they must be positive and sum to ``n_total``.
    """
    mults = list(multiplicities)
    if any(v < 1 for v in mults):
        raise ConsistencyError(f"multiplicities must be >= 1, got {mults}")
    if sum(mults) != n_total:
        raise ConsistencyError(
            f"multiplicities {mults} do not sum to n_total = {n_total}"
        )
    numerator = math.prod(math.factorial(v) for v in mults)
    return math.sqrt(numerator / math.factorial(n_total))


def normalization_subsystem(sub_states: Sequence, n_total: int) -> float:
    """Normalization factor of an n-particle subsystem state on N labels.

    Equals sqrt((N - n)! * prod(mu_j!) / N!) with mu the multiplicities of
    the ``sub_states`` entries.  Entries may be hashables or
    SingleParticleKet instances (compared by exact amplitude equality).
    """
    n = len(sub_states)
    if n < 1:
        raise ConsistencyError("subsystem must contain at least one state")
    if n > n_total:
        raise ConsistencyError(
            f"subsystem size {n} exceeds total particle number {n_total}"
        )
    counts = Counter(_state_key(s) for s in sub_states)
    numerator = math.factorial(n_total - n) * math.prod(
        math.factorial(v) for v in counts.values()
    )
    return math.sqrt(numerator / math.factorial(n_total))


def _state_key(state):
    if isinstance(state, SingleParticleKet):
        return state.signature()
    return state


def ket_multiplicities(kets: Sequence[SingleParticleKet]) -> List[int]:
    """Repeat counts of exactly equal kets, in first-appearance order."""
    counts: Dict[tuple, int] = {}
    for ket in kets:
        sig = ket.signature()
        counts[sig] = counts.get(sig, 0) + 1
    return list(counts.values())


class SymmetricKet:
    """Permutation-symmetric N-particle state as sparse occupation amplitudes.

    ``normalized=True`` asserts unit norm; unnormalized instances are
    intermediate algebra objects with no norm constraint.  Fermionic keys
    with a repeated basis pair are rejected (Pauli exclusion).
    """

    __slots__ = ("n_particles", "statistics", "_amps", "normalized")

    def __init__(
        self,
        n_particles: int,
        statistics: Statistics,
        amplitudes: Mapping[OccupationKey, complex],
        *,
        normalized: bool = False,
        tol: Tolerances = DEFAULT_TOLERANCES,
    ):
        if n_particles < 0:
            raise ConsistencyError("n_particles must be >= 0")
        amps: Dict[OccupationKey, complex] = {}
        for key, value in amplitudes.items():
            if len(key) != n_particles:
                raise ConsistencyError(
                    f"occupation key {key} does not hold {n_particles} particles"
                )
            canon = occupation_key(key)
            if canon != tuple(key):
                raise ConsistencyError(f"occupation key {key} is not canonical")
            if statistics is Statistics.FERMION and len(set(key)) != len(key):
                raise ConsistencyError(
                    f"fermionic key {key} repeats a basis pair (Pauli exclusion)"
                )
            if abs(value) > tol.pruning:
                amps[canon] = complex(value)
        self.n_particles = n_particles
        self.statistics = statistics
        self._amps = amps
        self.normalized = normalized
        if normalized:
            n = self.norm()
            if abs(n - 1.0) > max(tol.normalization, 1e-12):
                raise ConsistencyError(
                    f"state flagged normalized has norm {n!r}"
                )

    @property
    def amplitudes(self) -> Dict[OccupationKey, complex]:
        return dict(self._amps)

    def amplitude(self, key: OccupationKey) -> complex:
        return self._amps.get(occupation_key(key), 0j)

    def keys(self):
        return self._amps.keys()

    def items(self):
        return self._amps.items()

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self._amps.values()))

    def inner(self, other: "SymmetricKet") -> complex:
        """<self|other>; both states must share particle number and statistics."""
        if self.n_particles != other.n_particles:
            raise ConsistencyError(
                "inner product requires equal particle numbers "
                f"({self.n_particles} vs {other.n_particles})"
            )
        if self.statistics is not other.statistics:
            raise ConsistencyError("inner product requires matching statistics")
        small, large = (
            (self._amps, other._amps)
            if len(self._amps) <= len(other._amps)
            else (other._amps, self._amps)
        )
        if small is self._amps:
            return sum(
                v.conjugate() * other._amps[k]
                for k, v in self._amps.items()
                if k in other._amps
            )
        return sum(
            self._amps[k].conjugate() * v
            for k, v in other._amps.items()
            if k in self._amps
        )

    def normalized_copy(self, tol: Tolerances = DEFAULT_TOLERANCES) -> "SymmetricKet":
        n = self.norm()
        if n <= tol.pruning:
            raise NullStateError("cannot normalize a null state")
        return SymmetricKet(
            self.n_particles,
            self.statistics,
            {k: v / n for k, v in self._amps.items()},
            normalized=True,
            tol=tol,
        )

    def __repr__(self):
        return (
            f"SymmetricKet(n={self.n_particles}, {self.statistics.value}, "
            f"{len(self._amps)} keys, norm={self.norm():.6g})"
        )


def _creation_fold(
    kets: Sequence[SingleParticleKet], statistics: Statistics
) -> Dict[OccupationKey, complex]:
    """Fold kets through mode creation operators.

    Returns amplitudes <key| a'(k_1) ... a'(k_N) |vac>; for bosons this is
    perm(A_key) / sqrt(prod(n_b!)), for fermions det(A_key) with the
    canonical (lexicographic) key order as the +1 reference.
    """
    amps: Dict[OccupationKey, complex] = {(): 1 + 0j}
    fermion = statistics is Statistics.FERMION
    for ket in reversed(kets):
        new: Dict[OccupationKey, complex] = {}
        for key, coeff in amps.items():
            for label, amp in ket.items():
                if fermion:
                    if label in key:
                        continue
                    below = sum(
                        1 for k in key if _label_sort_key(k) < _label_sort_key(label)
                    )
                    factor = -amp if below % 2 else amp
                else:
                    factor = amp * math.sqrt(key.count(label) + 1)
                new_key = occupation_key(key + (label,))
                prev = new.get(new_key, 0j)
                new[new_key] = prev + coeff * factor
        amps = new
    return amps


def symmetrize_product(
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SymmetricKet:
    """(Anti)symmetrized product state with the combinatorial normalization.

    The returned state carries the normalization factor of
    :func:`normalization_total`; it has unit norm exactly when the distinct
    input kets are mutually orthogonal.  Use :func:`make_product_state` for
    a state normalized to unit norm regardless of overlaps.
    """
    fold = _creation_fold(kets, statistics)
    scale = math.sqrt(
        math.prod(math.factorial(v) for v in ket_multiplicities(kets))
    )
    amps = {k: v / scale for k, v in fold.items()}
    return SymmetricKet(len(kets), statistics, amps, tol=tol)


def make_product_state(
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SymmetricKet:
    """Unit-norm (anti)symmetrized state of the given single-particle kets.

    Raises NullStateError when the antisymmetrized state vanishes
    identically (two equal fermionic kets).
    """
    if not kets:
        raise ConsistencyError("at least one ket is required")
    raw = symmetrize_product(kets, statistics, tol=tol)
    n = raw.norm()
    if n <= tol.pruning:
        raise NullStateError(
            "antisymmetrized state vanishes identically (Pauli exclusion)"
        )
    return SymmetricKet(
        raw.n_particles,
        statistics,
        {k: v / n for k, v in raw.items()},
        normalized=True,
        tol=tol,
    )


def expand_first_quantized(
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Dict[Tuple[int, ...], complex]:
    """Literal pseudo-labeled expansion of the symmetrized product state.

    Sums over all N! label permutations with coefficient
    (sign) / sqrt(N! * prod(nu_j!)).  The result maps slot assignments to
    collected coefficients: key[a] is the index (first occurrence) of the
    input ket occupying pseudo-label slot a, and permutations that permute
    exactly equal kets merge into one term.  Collecting the assignments in
    the single-particle basis and normalizing reproduces
    :func:`make_product_state`.
    """
    n = len(kets)
    if n == 0:
        raise ConsistencyError("at least one ket is required")
    if n > EXPANSION_SIZE_LIMIT:
        raise SizeLimitError(
            f"expand_first_quantized is capped at N <= {EXPANSION_SIZE_LIMIT}, got N = {n}"
        )
    reps: List[int] = []
    seen: Dict[tuple, int] = {}
    for idx, ket in enumerate(kets):
        sig = ket.signature()
        if sig not in seen:
            seen[sig] = idx
        reps.append(seen[sig])
    base = 1.0 / math.sqrt(
        math.factorial(n)
        * math.prod(math.factorial(v) for v in ket_multiplicities(kets))
    )
    terms: Dict[Tuple[int, ...], complex] = {}
    fermion = statistics is Statistics.FERMION
    for perm in permutations(range(n)):
        key = tuple(reps[i] for i in perm)
        coeff = base
        if fermion and _parity(perm):
            coeff = -coeff
        terms[key] = terms.get(key, 0j) + coeff
    return {k: v for k, v in terms.items() if abs(v) > tol.pruning}


def _parity(perm) -> int:
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return inversions % 2
