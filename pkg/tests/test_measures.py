"""Entropy, concurrence, Schmidt decomposition, and closed-form tests."""

import math

import numpy as np
import pytest

from identangle.algebra import DensityMatrix, convex_mixture, pure_to_density
from identangle.detection import ParticleEnsemble, entanglement_of_particles
from identangle.errors import (
    BipartitionError,
    ConsistencyError,
    NormalizationError,
)
from identangle.measures import (
    LabelSplit,
    ModeSplit,
    concurrence_pure,
    dicke_state,
    schmidt_decompose,
    three_boson_average_concurrence,
    three_boson_average_concurrence_coherences,
    two_boson_average_concurrence,
    verify_schmidt_equivalence,
    von_neumann_entropy,
)
from identangle.states import (
    SpatialMode,
    Spin,
    Statistics,
    SymmetricKet,
    occupation_key,
)


def diag_density(*weights):
    keys = [occupation_key([("L", Spin.UP)]), occupation_key([("L", Spin.DOWN)]),
            occupation_key([("R", Spin.UP)]), occupation_key([("R", Spin.DOWN)])]
    n = len(weights)
    return DensityMatrix(keys[:n], np.diag(weights).astype(complex))


def test_entropy_rank_one():
    assert von_neumann_entropy(diag_density(1.0)) == 0.0


def test_entropy_balanced():
    assert abs(von_neumann_entropy(diag_density(0.5, 0.5)) - 1.0) < 1e-12


def test_entropy_skewed_matches_direct_formula():
    w = (1 / 3, 2 / 3)
    expected = -sum(v * math.log2(v) for v in w)
    assert abs(von_neumann_entropy(diag_density(*w)) - expected) < 1e-12
    assert abs(expected - 0.9182958340544896) < 1e-12


def test_entropy_requires_unit_trace():
    rho = DensityMatrix(
        [occupation_key([("L", Spin.UP)])], np.array([[0.7]], dtype=complex)
    )
    with pytest.raises(NormalizationError):
        von_neumann_entropy(rho)


def test_entropy_zero_iff_rank_one(rng):
    keys = [occupation_key([("L", Spin.UP)]), occupation_key([("L", Spin.DOWN)])]
    states = []
    for _ in range(2):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        states.append(
            SymmetricKet(
                1,
                Statistics.BOSON,
                dict(zip(keys, map(complex, v))),
                normalized=True,
            )
        )
    pure = pure_to_density(states[0])
    assert von_neumann_entropy(pure) < 1e-10
    mixed = convex_mixture([(0.5, pure_to_density(s)) for s in states])
    if sorted(mixed.eigenvalues())[-2] > 1e-6:
        assert von_neumann_entropy(mixed) > 1e-6


def bell_sector():
    key_ud = occupation_key([("L", Spin.UP), ("R", Spin.DOWN)])
    key_du = occupation_key([("L", Spin.DOWN), ("R", Spin.UP)])
    amp = 1 / math.sqrt(2)
    return SymmetricKet(
        2, Statistics.BOSON, {key_ud: amp, key_du: amp}, normalized=True
    )


def test_concurrence_product_state():
    key = occupation_key([("L", Spin.UP), ("R", Spin.DOWN)])
    state = SymmetricKet(2, Statistics.BOSON, {key: 1.0}, normalized=True)
    assert concurrence_pure(state, ModeSplit()) == 0.0


def test_concurrence_bell_state():
    assert abs(concurrence_pure(bell_sector(), ModeSplit()) - 1.0) < 1e-12


def test_concurrence_equals_two_lambda_product(rng):
    a = float(rng.uniform(0.2, 0.9))
    b = math.sqrt(1 - a * a)
    key_ud = occupation_key([("L", Spin.UP), ("R", Spin.DOWN)])
    key_du = occupation_key([("L", Spin.DOWN), ("R", Spin.UP)])
    state = SymmetricKet(
        2, Statistics.BOSON, {key_ud: a, key_du: b}, normalized=True
    )
    assert abs(concurrence_pure(state, ModeSplit()) - 2 * a * b) < 1e-12


def test_concurrence_entropy_verdicts_agree(rng):
    for _ in range(10):
        a = float(rng.uniform(0.1, 0.99))
        b = math.sqrt(1 - a * a)
        key_ud = occupation_key([("L", Spin.UP), ("R", Spin.DOWN)])
        key_du = occupation_key([("L", Spin.DOWN), ("R", Spin.UP)])
        state = SymmetricKet(
            2, Statistics.BOSON, {key_ud: a, key_du: b}, normalized=True
        )
        c = concurrence_pure(state, ModeSplit())
        result = schmidt_decompose(state, ModeSplit())
        entropy_like = -sum(
            l * l * math.log2(l * l) for l in result.coefficients if l > 1e-12
        )
        assert (c < 1e-10) == (entropy_like < 1e-10)


def test_schmidt_product_state_single_coefficient():
    key = occupation_key([("L", Spin.UP), ("R", Spin.DOWN)])
    state = SymmetricKet(2, Statistics.BOSON, {key: 1.0}, normalized=True)
    result = schmidt_decompose(state, ModeSplit())
    assert result.coefficients == (1.0,)
    assert result.bipartition == ("modes", 1, 1)


def test_schmidt_mode_split_reconstruction(rng):
    ens_state = bell_sector()
    result = schmidt_decompose(ens_state, ModeSplit())
    rebuilt = {}
    for lam, left, right in zip(
        result.coefficients, result.left_basis, result.right_basis
    ):
        for lk, lv in left.items():
            for rk, rv in right.items():
                key = occupation_key(lk + rk)
                rebuilt[key] = rebuilt.get(key, 0j) + lam * lv * rv
    for key, value in ens_state.items():
        assert abs(rebuilt[key] - value) < 1e-10


def test_schmidt_bases_orthonormal(rng):
    th = rng.uniform(0.2, 1.3, 3)
    om = rng.uniform(0, 2 * math.pi, 3)
    from identangle.detection import project_onto_detectors

    ens = ParticleEnsemble(
        2, tuple(SpatialMode(theta=t, omega=w) for t, w in zip(th, om))
    )
    sector = project_onto_detectors(ens).sector(2)
    result = schmidt_decompose(sector.state, ModeSplit())
    for basis in (result.left_basis, result.right_basis):
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                expected = 1.0 if i == j else 0.0
                assert abs(u.inner(v) - expected) < 1e-10
    assert abs(sum(l * l for l in result.coefficients) - 1) < 1e-10


def test_schmidt_rotation_invariance(rng):
    # unitary mixing of the left sector basis leaves the spectrum unchanged
    state = bell_sector()
    pairs = sorted(state.keys())
    m = np.zeros((2, 2), dtype=complex)
    left_keys = [occupation_key([("L", Spin.UP)]), occupation_key([("L", Spin.DOWN)])]
    right_keys = [occupation_key([("R", Spin.UP)]), occupation_key([("R", Spin.DOWN)])]
    for key, value in state.items():
        lk = occupation_key([lab for lab in key if lab[0] == "L"])
        rk = occupation_key([lab for lab in key if lab[0] == "R"])
        m[left_keys.index(lk), right_keys.index(rk)] = value
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    u, _ = np.linalg.qr(x)
    rotated = u @ m
    base = np.linalg.svd(m, compute_uv=False)
    after = np.linalg.svd(rotated, compute_uv=False)
    assert np.allclose(base, after, atol=1e-12)


def test_schmidt_label_split_binomial_formula():
    for n_total in range(2, 7):
        for n_up in range(0, n_total + 1):
            state = dicke_state(n_total, n_up)
            for n_left in range(1, n_total):
                n_right = n_total - n_left
                result = schmidt_decompose(state, LabelSplit(n_left, n_right))
                expected = sorted(
                    (
                        math.sqrt(
                            math.comb(n_left, kx)
                            * math.comb(n_right, n_up - kx)
                            / math.comb(n_total, n_up)
                        )
                        for kx in range(
                            max(0, n_up - n_right), min(n_up, n_left) + 1
                        )
                    ),
                    reverse=True,
                )
                got = list(result.coefficients)
                assert len(got) == len(expected)
                assert max(abs(a - b) for a, b in zip(got, expected)) < 1e-10


def test_schmidt_label_split_three_two():
    result = schmidt_decompose(dicke_state(3, 2), LabelSplit(2, 1))
    expected = sorted([math.sqrt(1 / 3), math.sqrt(2 / 3)], reverse=True)
    assert max(abs(a - b) for a, b in zip(result.coefficients, expected)) < 1e-12


def test_schmidt_bipartition_errors(rng):
    state = dicke_state(3, 2)
    with pytest.raises(BipartitionError):
        schmidt_decompose(state, LabelSplit(2, 2))
    mixed_q = SymmetricKet(
        1,
        Statistics.BOSON,
        {
            occupation_key([("L", Spin.UP)]): 1 / math.sqrt(2),
            occupation_key([("R", Spin.UP)]): 1 / math.sqrt(2),
        },
        normalized=True,
    )
    with pytest.raises(BipartitionError):
        schmidt_decompose(mixed_q, ModeSplit())
    chi_state = SymmetricKet(
        1,
        Statistics.BOSON,
        {occupation_key([("chi", Spin.UP)]): 1.0},
        normalized=True,
    )
    with pytest.raises(BipartitionError):
        schmidt_decompose(chi_state, ModeSplit())
    with pytest.raises(BipartitionError):
        schmidt_decompose(mixed_q, LabelSplit(1, 0))


def test_verify_schmidt_equivalence_three_two():
    report = verify_schmidt_equivalence(3, 2, 0.9, 0.4, (2, 1))
    expected = sorted([math.sqrt(1 / 3), math.sqrt(2 / 3)], reverse=True)
    assert report.max_abs_diff < 1e-10
    assert max(abs(a - b) for a, b in zip(report.input_coefficients, expected)) < 1e-10


def test_verify_schmidt_equivalence_two_one():
    report = verify_schmidt_equivalence(2, 1, 0.8, 1.9, (1, 1))
    expected = (math.sqrt(0.5), math.sqrt(0.5))
    assert report.max_abs_diff < 1e-10
    assert max(abs(a - b) for a, b in zip(report.input_coefficients, expected)) < 1e-10


def test_verify_schmidt_equivalence_partial_overlap_breaks():
    report = verify_schmidt_equivalence(
        3, 2, [0.3, 0.8, 1.2], [0.0, 0.0, 0.0], (2, 1)
    )
    assert report.max_abs_diff > 1e-3


def test_verify_schmidt_equivalence_split_validation():
    with pytest.raises(ConsistencyError):
        verify_schmidt_equivalence(3, 2, 0.5, 0.0, (2, 2))


def test_two_boson_closed_form_grid(rng):
    thetas = np.linspace(0, math.pi / 2, 20)
    for t1 in thetas[::4]:
        for t2 in thetas[::4]:
            expected = two_boson_average_concurrence(float(t1), float(t2))
            for _ in range(3):
                w = rng.uniform(0, 2 * math.pi, 2)
                ens = ParticleEnsemble(
                    1,
                    (
                        SpatialMode(theta=float(t1), omega=float(w[0])),
                        SpatialMode(theta=float(t2), omega=float(w[1])),
                    ),
                )
                assert abs(
                    entanglement_of_particles(ens, "concurrence") - expected
                ) < 1e-10


def test_three_boson_closed_form_branches(rng):
    for same_side in (True, False):
        for _ in range(20):
            if same_side:
                lo, hi = (
                    (0.0, math.pi / 4)
                    if rng.random() < 0.5
                    else (math.pi / 4, math.pi / 2)
                )
                t1, t2 = rng.uniform(lo, hi, 2)
            else:
                t1 = rng.uniform(0, math.pi / 4)
                t2 = rng.uniform(math.pi / 4, math.pi / 2)
            t3 = rng.uniform(0, math.pi / 2)
            w = rng.uniform(0, 2 * math.pi, 3)
            thetas = (float(t1), float(t2), float(t3))
            omegas = tuple(map(float, w))
            ens = ParticleEnsemble(
                2,
                tuple(
                    SpatialMode(theta=t, omega=o) for t, o in zip(thetas, omegas)
                ),
            )
            numeric = entanglement_of_particles(ens, "concurrence")
            theta_form = three_boson_average_concurrence(thetas, omegas)
            coh_form = three_boson_average_concurrence_coherences(
                2 * math.cos(t1) * math.sin(t1),
                2 * math.cos(t2) * math.sin(t2),
                2 * math.cos(t3) * math.sin(t3),
                omegas[0] - omegas[1],
                same_side,
            )
            assert abs(numeric - theta_form) < 1e-9
            assert abs(numeric - coh_form) < 1e-9
            assert abs(theta_form - coh_form) < 1e-11


def test_three_boson_sign_rule_matters():
    # evaluating the coherence form on the wrong branch must disagree
    t1, t2, t3 = 0.3, 0.5, 0.8
    w = (0.4, 1.7, 2.9)
    correct = three_boson_average_concurrence_coherences(
        2 * math.cos(t1) * math.sin(t1),
        2 * math.cos(t2) * math.sin(t2),
        2 * math.cos(t3) * math.sin(t3),
        w[0] - w[1],
        True,
    )
    wrong = three_boson_average_concurrence_coherences(
        2 * math.cos(t1) * math.sin(t1),
        2 * math.cos(t2) * math.sin(t2),
        2 * math.cos(t3) * math.sin(t3),
        w[0] - w[1],
        False,
    )
    reference = three_boson_average_concurrence((t1, t2, t3), w)
    assert abs(correct - reference) < 1e-12
    assert abs(wrong - reference) > 1e-3
