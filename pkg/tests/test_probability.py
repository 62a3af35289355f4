import numpy as np
import pytest

from qdt.errors import ConsistencyError, ImpossibleConditioningError, LayoutError, WindowError
from qdt.measures import AlternativeSet, FeelingAmplitudes, projector, prospect_family, sample_feelings
from qdt.probability import (
    DecisionSequence,
    DecisionStage,
    JointProbabilityRecord,
    ProbabilityRecord,
    behavioral_joint,
    behavioral_joint_table,
    context,
    evolved_probability,
    joint_probability,
    joint_table,
    kirkwood,
    limit_probability,
    luders_probability,
    marginal_probability,
    normalize_joint_feelings,
    post_decision_probability,
    single_probability,
    wigner_probability,
)
from qdt.state import (
    DecisionWindow,
    EvolutionGenerator,
    dephase,
    evolve,
    luders_update,
    make_density,
    random_density,
    random_unitary,
)
from qdt.tensor import SpaceLayout, kron_all

SQRT_HALF = 1.0 / np.sqrt(2.0)
PLUS_MINUS = np.array([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]])


def _sequence(gen_a, gen_b, first=(0.0, 1.0), second=(1.5, 1.0)):
    return DecisionSequence(
        DecisionStage(gen_a, DecisionWindow(*first), 'A'),
        DecisionStage(gen_b, DecisionWindow(*second), 'B'),
    )


def _random_sequence(seed, rate=1.0):
    layout_a = SpaceLayout.from_pairs([('A', 2), ('S', 2)])
    layout_b = SpaceLayout.from_pairs([('B', 2), ('S', 2)])
    rng = np.random.default_rng(seed)
    gen_a = EvolutionGenerator.from_energies(rng.uniform(-3, 3, 4), layout_a, basis=random_unitary(4, seed), rate=rate)
    gen_b = EvolutionGenerator.from_energies(rng.uniform(-3, 3, 4), layout_b, basis=random_unitary(4, seed + 1),
                                             rate=rate)
    return _sequence(gen_a, gen_b)


# --- tek karar ---

def test_single_probability_basics(qubit, standard_alts):
    assert single_probability(make_density([1, 0], qubit), projector(standard_alts, 0)) == pytest.approx(1.0)
    mixed = make_density([(1, [1, 0]), (1, [0, 1])], qubit)
    rank_one = np.outer([0.6, 0.8j], np.conj([0.6, 0.8j]))
    assert single_probability(mixed, rank_one) == pytest.approx(0.5)


def test_single_probability_composite_matches_reduced(alt_subject, plus_minus_alts):
    rho = random_density(alt_subject, seed=14)
    proj = projector(plus_minus_alts, 1)
    assert single_probability(rho, proj, 'A') == pytest.approx(single_probability(rho.reduced(['A']), proj), abs=1e-12)
    rho_a = rho.reduced(['A']).matrix
    assert single_probability(rho, proj, 'A') == pytest.approx(np.trace(proj @ rho_a @ proj).real, abs=1e-12)


def test_single_probability_shape_mismatch(alt_subject):
    with pytest.raises(LayoutError):
        single_probability(random_density(alt_subject, seed=1), np.eye(3), 'A')


def test_evolved_probability_initial_and_frozen(alt_subject, plus_minus_alts):
    rho = random_density(alt_subject, seed=3)
    proj = projector(plus_minus_alts, 0)
    gen = EvolutionGenerator.from_energies([0.2, 0.9, 1.7, 2.4], alt_subject, basis=random_unitary(4, seed=2))
    assert evolved_probability(rho, gen, proj, 0.0) == pytest.approx(single_probability(rho, proj, 'A'))
    zero = EvolutionGenerator.zero(alt_subject)
    values = [evolved_probability(rho, zero, proj, t) for t in (0.0, 0.7, 5.0)]
    np.testing.assert_allclose(values, values[0], atol=1e-12)


def test_evolved_probability_cosine_interference(qubit, standard_alts):
    e1, e2 = 0.4, 2.3
    gen = EvolutionGenerator.from_energies([e1, e2], qubit, basis=PLUS_MINUS)
    rho = make_density([1, 0], qubit)
    for t in (0.3, 1.1, 4.0):
        expected = 0.5 * (1.0 + np.cos((e1 - e2) * t))
        assert evolved_probability(rho, gen, projector(standard_alts, 0), t) == pytest.approx(expected, abs=1e-12)


def test_evolved_probability_generator_on_smaller_layout(three_factor, standard_alts):
    rho = random_density(three_factor, seed=5)
    gen = EvolutionGenerator.from_energies([0.3, 1.0, 1.6, 2.2], three_factor.subset(['A', 'S']),
                                           basis=random_unitary(4, seed=6))
    value = evolved_probability(rho, gen, projector(standard_alts, 1), 1.3, 'A')
    assert 0.0 <= value <= 1.0


# --- limitler ---

def test_slow_limit_matches_tiny_rate(alt_subject, plus_minus_alts):
    rho = random_density(alt_subject, seed=8)
    proj = projector(plus_minus_alts, 0)
    gen = EvolutionGenerator.from_energies([0.3, 1.1, 1.9, 3.2], alt_subject, rate=1e-8)
    slow = limit_probability(rho, gen, proj, 1.0, 'slow')
    assert evolved_probability(rho, gen, proj, 1.0) == pytest.approx(slow, abs=1e-6)


def test_fast_limit_matches_phase_average(alt_subject, plus_minus_alts):
    rho = random_density(alt_subject, seed=9)
    proj = projector(plus_minus_alts, 1)
    gen = EvolutionGenerator.from_energies([1.0, 2.0, 4.0, 7.0], alt_subject)
    samples = 16
    times = 2.0 * np.pi * np.arange(samples) / samples
    average = np.mean([evolved_probability(rho, gen, proj, t) for t in times])
    assert limit_probability(rho, gen, proj, 0.0, 'fast') == pytest.approx(average, abs=1e-3)


def test_limits_agree_for_diagonal_state(qubit, standard_alts):
    rho = make_density([(0.3, [1, 0]), (0.7, [0, 1])], qubit)
    gen = EvolutionGenerator.from_energies([0.5, 1.5], qubit)
    proj = projector(standard_alts, 1)
    assert limit_probability(rho, gen, proj, 1.0, 'slow') == pytest.approx(0.7)
    assert limit_probability(rho, gen, proj, 1.0, 'fast') == pytest.approx(0.7)
    with pytest.raises(ConsistencyError):
        limit_probability(rho, gen, proj, 1.0, 'medium')


# --- karar sonrası ---

def test_post_decision_slow_regime(alt_subject, standard_alts):
    rho = random_density(alt_subject, seed=10)
    gen = EvolutionGenerator.from_energies([0.3, 1.1, 1.9, 3.2], alt_subject, basis=random_unitary(4, seed=1))
    assert post_decision_probability(rho, gen, standard_alts, 0, 1.0, 0, 2.0, 'slow') == pytest.approx(1.0)
    assert post_decision_probability(rho, gen, standard_alts, 0, 1.0, 1, 2.0, 'slow') == pytest.approx(0.0, abs=1e-12)


def test_post_decision_exact_at_decision_time(alt_subject, standard_alts):
    rho = random_density(alt_subject, seed=11)
    gen = EvolutionGenerator.from_energies([0.3, 1.1, 1.9, 3.2], alt_subject, basis=random_unitary(4, seed=2))
    assert post_decision_probability(rho, gen, standard_alts, 1, 0.8, 1, 0.8) == pytest.approx(1.0, abs=1e-12)
    later = post_decision_probability(rho, gen, standard_alts, 1, 0.8, 1, 2.5)
    assert 0.0 <= later <= 1.0 + 1e-12


def test_post_decision_fast_regime(qubit, standard_alts):
    rho = make_density([1, 0], qubit)
    gen = EvolutionGenerator.from_energies([0.0, 1.0], qubit, basis=PLUS_MINUS)
    conditioned = luders_update(dephase(rho, PLUS_MINUS), projector(standard_alts, 0))
    expected = single_probability(dephase(conditioned, PLUS_MINUS), projector(standard_alts, 1))
    value = post_decision_probability(rho, gen, standard_alts, 0, 1.0, 1, 3.0, 'fast')
    assert value == pytest.approx(expected)
    assert value == pytest.approx(0.5)


def test_post_decision_errors(qubit, standard_alts):
    rho = make_density([0, 1], qubit)
    gen = EvolutionGenerator.zero(qubit)
    with pytest.raises(ImpossibleConditioningError):
        post_decision_probability(rho, gen, standard_alts, 0, 1.0, 0, 2.0, 'slow')
    with pytest.raises(WindowError):
        post_decision_probability(rho, gen, standard_alts, 1, 2.0, 0, 1.0)
    with pytest.raises(ConsistencyError):
        post_decision_probability(rho, gen, standard_alts, 1, 1.0, 0, 2.0, 'adiabatic')


# --- Lüders ve Wigner ---

def test_luders_probability_values(qubit, standard_alts, plus_minus_alts):
    rho = random_density(qubit, seed=3)
    p0, p1 = projector(standard_alts, 0), projector(standard_alts, 1)
    plus = projector(plus_minus_alts, 0)
    assert luders_probability(rho, p0, p0) == pytest.approx(1.0)
    assert luders_probability(rho, p0, p1) == pytest.approx(0.0, abs=1e-12)
    assert luders_probability(rho, p0, plus) == pytest.approx(0.5)
    assert luders_probability(rho, plus, p0) == pytest.approx(0.5)


def test_wigner_probability_values(qubit, standard_alts):
    rho = random_density(qubit, seed=4)
    p0, p1 = projector(standard_alts, 0), projector(standard_alts, 1)
    assert wigner_probability(rho, p0, p0) == pytest.approx(single_probability(rho, p0))
    assert wigner_probability(rho, p0, p1) == pytest.approx(0.0, abs=1e-12)


def test_wigner_equals_luders_times_probability():
    layout = SpaceLayout.single('A', 3)
    for seed in range(100):
        rho = random_density(layout, seed=seed)
        p_n = projector(AlternativeSet(random_unitary(3, seed=seed + 1000).T, 'A'), 0)
        p_m = projector(AlternativeSet(random_unitary(3, seed=seed + 2000).T, 'A'), 1)
        p_w = wigner_probability(rho, p_n, p_m)
        p_l = luders_probability(rho, p_n, p_m)
        assert p_w == pytest.approx(p_l * single_probability(rho, p_n), abs=1e-12)


def test_luders_and_wigner_on_composite_state(alt_subject, plus_minus_alts):
    rho = random_density(alt_subject, seed=15)
    p_n, p_m = projector(plus_minus_alts, 0), np.diag([1.0, 0.0])
    p_w = wigner_probability(rho, p_n, p_m, 'A')
    assert p_w == pytest.approx(luders_probability(rho, p_n, p_m, 'A') * single_probability(rho, p_n, 'A'), abs=1e-12)


def test_luders_and_wigner_at_decision_time(qubit, standard_alts, plus_minus_alts):
    rho0 = make_density([1, 0], qubit)
    gen = EvolutionGenerator.from_energies([0.0, 1.0], qubit, basis=PLUS_MINUS)
    p0, p1 = projector(standard_alts, 0), projector(standard_alts, 1)
    plus = projector(plus_minus_alts, 0)
    for t in (0.5, np.pi / 3, 2.0):
        # p(A_0, t) = (1 + cos t) / 2
        assert wigner_probability(rho0, p0, p0, gen=gen, t=t) == pytest.approx(0.5 * (1.0 + np.cos(t)), abs=1e-12)
        rho_t = evolve(rho0, gen, 0.0, t)
        assert luders_probability(rho0, p1, plus, gen=gen, t=t) == pytest.approx(luders_probability(rho_t, p1, plus))
        assert wigner_probability(rho0, p1, plus, gen=gen, t=t) == pytest.approx(wigner_probability(rho_t, p1, plus))
    assert wigner_probability(rho0, p0, p0) == pytest.approx(1.0)
    with pytest.raises(ConsistencyError):
        luders_probability(rho0, p0, p0, t=1.0)


# --- ardışık kararlar ---

def test_overlapping_windows_rejected(three_factor):
    zero_a = EvolutionGenerator.zero(three_factor.subset(['A', 'S']))
    zero_b = EvolutionGenerator.zero(three_factor.subset(['B', 'S']))
    with pytest.raises(WindowError):
        _sequence(zero_a, zero_b, first=(0.0, 2.0), second=(1.0, 1.0))
    touching = _sequence(zero_a, zero_b, first=(0.0, 1.0), second=(1.0, 1.0))
    assert touching.order == ('A', 'B')
    assert touching.swapped().order == ('B', 'A')


def test_joint_probability_factorizes_for_product_state(three_factor, plus_minus_alts):
    rho_a = random_density(SpaceLayout.single('A', 2), seed=1)
    rho_b = random_density(SpaceLayout.single('B', 2), seed=2)
    rho_s = random_density(SpaceLayout.single('S', 2), seed=3)
    state = rho_a.tensor(rho_b).tensor(rho_s)
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    sequence = _random_sequence(4)
    for n in range(2):
        for k in range(2):
            record = joint_probability(state, sequence, plus_minus_alts, n, alts_b, k, 0.0)
            expected = single_probability(rho_a, projector(plus_minus_alts, n)) * single_probability(
                rho_b, projector(alts_b, k))
            assert record.value == pytest.approx(expected, abs=1e-12)


def test_joint_probability_slow_regime_freezes(three_factor, standard_alts):
    state = random_density(three_factor, seed=6)
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    slow = _random_sequence(7, rate=1e-9)
    rho_ab = state.reduced(['A', 'B']).matrix
    for n in range(2):
        for k in range(2):
            expected = np.trace(rho_ab @ np.kron(projector(standard_alts, n), projector(alts_b, k))).real
            value = joint_probability(state, slow, standard_alts, n, alts_b, k, 3.0).value
            assert value == pytest.approx(expected, abs=1e-6)


def test_joint_probability_imaginary_residue_on_random_instances(three_factor, standard_alts):
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    for seed in range(100):
        state = random_density(three_factor, seed=seed)
        record = joint_probability(state, _random_sequence(seed), standard_alts, seed % 2, alts_b, 1, 3.0)
        assert isinstance(record, JointProbabilityRecord)
        assert record.imag_residue <= 1e-12
        assert -1e-10 <= record.value <= 1 + 1e-10


def test_joint_probability_time_reversal(three_factor, standard_alts):
    state = random_density(three_factor, seed=21)
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    sequence = _random_sequence(22)
    forward = joint_probability(state, sequence.swapped(), standard_alts, 0, alts_b, 1, 3.0)
    backward = joint_probability(state, sequence, standard_alts, 0, alts_b, 1, -3.0)
    assert forward.value == pytest.approx(backward.value, abs=1e-10)
    assert backward.order == ('B', 'A')


def test_joint_probability_marginalization(three_factor, plus_minus_alts):
    state = random_density(three_factor, seed=30)
    alts_b = AlternativeSet.standard(2, 'B')
    sequence = _random_sequence(31)
    table = joint_table(state, sequence, plus_minus_alts, alts_b, 2.7)
    assert table.sum() == pytest.approx(1.0, abs=1e-10)
    for n in range(2):
        marginal = marginal_probability(state, sequence, plus_minus_alts, n, 2.7)
        assert table[n].sum() == pytest.approx(marginal, abs=1e-10)


def test_probability_records_clamp_only_when_reported():
    record = ProbabilityRecord(-1e-14, 1.0, context(state_id='rho0', window=DecisionWindow(0.0, 1.0)))
    assert record.value < 0
    assert record.reported() == 0.0
    assert record.context == {'state': 'rho0', 'window': (0.0, 1.0)}
    assert JointProbabilityRecord(1.0 + 1e-13, ('A', 'B'), 0.0, 0, 0).reported() == 1.0


# --- davranışsal ortak olasılık ---

def _behavioral_layout(sa=2, sb=2):
    return SpaceLayout.from_pairs([('A', 2), ('SA', sa), ('B', 2), ('SB', sb)])


def test_behavioral_joint_unit_subjects_match_joint_probability(standard_alts):
    layout = _behavioral_layout(1, 1)
    state = random_density(layout, seed=40)
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    ones = FeelingAmplitudes(np.ones((2, 1)))
    fam_a = prospect_family(standard_alts, ones, 'SA')
    fam_b = prospect_family(alts_b, ones, 'SB')
    sequence = _sequence(EvolutionGenerator.zero(layout.subset(['A', 'SA'])),
                         EvolutionGenerator.zero(layout.subset(['B', 'SB'])))
    for n in range(2):
        for k in range(2):
            expected = joint_probability(state, sequence, standard_alts, n, alts_b, k, 0.0).value
            assert behavioral_joint(state, fam_a[n], fam_b[k]) == pytest.approx(expected, abs=1e-12)


def test_behavioral_joint_normalized_sum(standard_alts):
    layout = _behavioral_layout()
    state = random_density(layout, seed=41)
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    feelings_a, feelings_b = normalize_joint_feelings(
        state, standard_alts, sample_feelings(2, 2, seed=1), alts_b, sample_feelings(2, 2, seed=2)
    )
    table = behavioral_joint_table(state, prospect_family(standard_alts, feelings_a, 'SA'),
                                   prospect_family(alts_b, feelings_b, 'SB'))
    assert table.sum() == pytest.approx(1.0, abs=1e-10)


def test_behavioral_joint_factorizes_for_product_state(standard_alts):
    parts = [random_density(SpaceLayout.single(label, 2), seed=i) for i, label in enumerate(('A', 'SA', 'B', 'SB'))]
    state = parts[0].tensor(parts[1]).tensor(parts[2]).tensor(parts[3])
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    fam_a = prospect_family(standard_alts, sample_feelings(2, 2, seed=5), 'SA')
    fam_b = prospect_family(alts_b, sample_feelings(2, 2, seed=6), 'SB')
    rho_a = kron_all([parts[0].matrix, parts[1].matrix])
    rho_b = kron_all([parts[2].matrix, parts[3].matrix])
    for pa in fam_a:
        for pb in fam_b:
            expected = np.trace(rho_a @ pa.matrix).real * np.trace(rho_b @ pb.matrix).real
            assert behavioral_joint(state, pa, pb) == pytest.approx(expected, abs=1e-12)


def test_behavioral_joint_evolves_initial_state(standard_alts):
    layout = _behavioral_layout()
    state = random_density(layout, seed=42)
    gen = EvolutionGenerator.from_energies(0.37 * np.arange(16), layout, basis=random_unitary(16, seed=3))
    alts_b = AlternativeSet(PLUS_MINUS, 'B')
    fam_a = prospect_family(standard_alts, sample_feelings(2, 2, seed=7), 'SA')
    fam_b = prospect_family(alts_b, sample_feelings(2, 2, seed=8), 'SB')
    rho_t = evolve(state, gen, 0.0, 1.3)
    for pa in fam_a:
        for pb in fam_b:
            expected = behavioral_joint(rho_t, pa, pb)
            assert behavioral_joint(state, pa, pb, gen=gen, t=1.3) == pytest.approx(expected, abs=1e-12)
            assert behavioral_joint(state, pa, pb, gen=gen) == pytest.approx(behavioral_joint(state, pa, pb), abs=1e-12)


def test_behavioral_joint_requires_disjoint_factors(alt_subject, standard_alts):
    state = random_density(alt_subject, seed=1)
    family = prospect_family(standard_alts, sample_feelings(2, 2, seed=1))
    with pytest.raises(LayoutError):
        behavioral_joint(state, family[0], family[1])


# --- Kirkwood ---

def test_kirkwood_commuting_is_real(qubit, standard_alts):
    rho = random_density(qubit, seed=2)
    p0 = projector(standard_alts, 0)
    value = kirkwood(rho, p0, p0)
    assert value.imag == pytest.approx(0.0, abs=1e-15)
    assert value.real == pytest.approx(rho.matrix[0, 0].real)
    assert kirkwood(rho, projector(standard_alts, 1), p0) == pytest.approx(0.0)


def test_kirkwood_complex_instance(qubit, standard_alts, plus_minus_alts):
    rho = make_density([SQRT_HALF, 1j * SQRT_HALF], qubit)
    p_a = projector(standard_alts, 0)
    p_b = projector(plus_minus_alts, 0)
    value = kirkwood(rho, p_b, p_a)
    assert value == pytest.approx(0.25 - 0.25j, abs=1e-12)
    assert abs(value.imag) > 0.01
    assert np.conj(value) == pytest.approx(kirkwood(rho, p_a, p_b), abs=1e-12)


def test_kirkwood_shape_mismatch(qubit):
    with pytest.raises(LayoutError):
        kirkwood(random_density(qubit, seed=0), np.eye(3), np.eye(2))
