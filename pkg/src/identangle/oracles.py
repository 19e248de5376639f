"""Brute-force reference implementations.

Everything here works from the literal pseudo-labeled expansion over all
N! permutations and stays independent of the permanent-based production
paths, so the two routes can be checked against each other.
"""

from __future__ import annotations

import math
from typing import Dict, Sequence, Tuple

from .detection import ParticleEnsemble
from .errors import ConsistencyError
from .states import (
    OccupationKey,
    SingleParticleKet,
    Statistics,
    SymmetricKet,
    expand_first_quantized,
    occupation_key,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def expansion_inner_product(
    bras: Sequence[SingleParticleKet],
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
) -> complex:
    """Transition amplitude as the double sum over both label expansions.

    For each pair of slot assignments the overlap is the product of the
    single-particle overlaps slot by slot.
    """
    if len(bras) != len(kets):
        raise ConsistencyError("bra and ket lists differ in length")
    bra_terms = expand_first_quantized(bras, statistics)
    ket_terms = expand_first_quantized(kets, statistics)
    # cache pairwise single-particle overlaps
    overlap: Dict[Tuple[int, int], complex] = {}
    for bi in {i for key in bra_terms for i in key}:
        for ki in {i for key in ket_terms for i in key}:
            overlap[(bi, ki)] = bras[bi].inner(kets[ki])
    total = 0j
    for bkey, bcoeff in bra_terms.items():
        for kkey, kcoeff in ket_terms.items():
            prod = 1 + 0j
            for slot in range(len(bkey)):
                prod *= overlap[(bkey[slot], kkey[slot])]
                if prod == 0:
                    break
            total += bcoeff.conjugate() * kcoeff * prod
    return total


def collect_expansion(
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Dict[OccupationKey, complex]:
    """Occupation amplitudes of the expanded product state.

    Each slot assignment is multiplied out in the single-particle basis and
    the resulting labeled terms are projected onto canonical occupation
    keys.  The output carries the combinatorial normalization, matching
    ``states.symmetrize_product``.
    """
    n = len(kets)
    terms = expand_first_quantized(kets, statistics)
    fermion = statistics is Statistics.FERMION
    root_nf = math.sqrt(math.factorial(n))
    amps: Dict[OccupationKey, complex] = {}
    for assignment, coeff in terms.items():
        slot_items = [list(kets[i].items()) for i in assignment]
        _collect_labels(slot_items, 0, (), coeff, amps, fermion, root_nf)
    return {k: v for k, v in amps.items() if abs(v) > tol.pruning}


def _collect_labels(slot_items, slot, chosen, coeff, amps, fermion, root_nf):
    if slot == len(slot_items):
        if fermion:
            if len(set(chosen)) != len(chosen):
                return
            sign = _sort_parity(chosen)
            key = occupation_key(chosen)
            amps[key] = amps.get(key, 0j) + sign * coeff / root_nf
        else:
            key = occupation_key(chosen)
            counts: Dict = {}
            for lab in key:
                counts[lab] = counts.get(lab, 0) + 1
            weight = math.sqrt(
                math.prod(math.factorial(v) for v in counts.values())
            ) / root_nf
            amps[key] = amps.get(key, 0j) + coeff * weight
        return
    for label, amp in slot_items[slot]:
        _collect_labels(
            slot_items, slot + 1, chosen + (label,), coeff * amp, amps, fermion, root_nf
        )


def _sort_parity(labels) -> int:
    order = sorted(range(len(labels)), key=lambda i: (labels[i][0], labels[i][1].index))
    inversions = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def collected_product_state(
    kets: Sequence[SingleParticleKet],
    statistics: Statistics = Statistics.BOSON,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SymmetricKet:
    """Expanded-and-collected product state (combinatorial normalization)."""
    amps = collect_expansion(kets, statistics, tol=tol)
    return SymmetricKet(len(kets), statistics, amps, tol=tol)


def project_by_substitution(
    ensemble: ParticleEnsemble, tol: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[Dict[int, Dict[OccupationKey, complex]], float]:
    """Detector projection by term-by-term substitution in the expansion.

    Expands the input state over all label permutations, substitutes each
    particle's detector components, collects occupation amplitudes,
    normalizes, and groups the detector-supported keys by the particle
    number q at L.  Returns (sectors, leak) with normalized amplitudes.
    """
    kets = ensemble.kets(tol=tol)
    amps = collect_expansion(kets, Statistics.BOSON, tol=tol)
    norm = math.sqrt(sum(abs(v) ** 2 for v in amps.values()))
    sectors: Dict[int, Dict[OccupationKey, complex]] = {}
    leak = 0.0
    for key, value in amps.items():
        value = value / norm
        if any(lab[0] not in ("L", "R") for lab in key):
            leak += abs(value) ** 2
            continue
        q = sum(1 for lab in key if lab[0] == "L")
        sectors.setdefault(q, {})[key] = value
    return sectors, leak
