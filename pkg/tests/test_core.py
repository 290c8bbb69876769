import math

import numpy as np
import pytest

from obddlab import (
    AcceptanceMode,
    CapExceededError,
    InvalidProgramError,
    ModeKindMismatchError,
    NotStableError,
    ObddProgram,
    computes,
    level_map,
    level_relation,
    level_stochastic,
    level_unitary,
    lift_deterministic,
    natural_order,
    nobdd_to_obdd_subset,
    node_trace,
    pairing_order,
    program_width,
    simulate,
    stable_symbol_chain,
    state_trace,
    validate_program,
)
from obddlab.constructions import (
    build_det_counter,
    build_det_eqs,
    build_det_mod,
    build_det_partialmod,
    build_nobdd_noto_fingerprint,
    build_quantum_partialmod,
)
from obddlab.functions import mod_count, not_o_prefix, partial_mod


def bitstrings(n):
    return (format(i, f"0{n}b") for i in range(1 << n))


def identity_unitary_program(n=3, accept=(0,)):
    eye = level_unitary(np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    return ObddProgram(
        kind="quantum", order=natural_order(n), widths=(2,) * (n + 1),
        levels=(eye,) * n, initial=0, accept=frozenset(accept), stable=True,
    )


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------

def test_natural_order_is_id():
    order = natural_order(5)
    assert order.perm == (0, 1, 2, 3, 4)
    assert order.is_id


def test_pairing_order_interleaves_ends():
    assert pairing_order(4).perm == (0, 3, 1, 2)
    assert pairing_order(5).perm == (0, 4, 1, 3, 2)
    assert not pairing_order(4).is_id


def test_order_rejects_non_permutation():
    with pytest.raises(ValueError):
        natural_order(0)
    with pytest.raises(ValueError):
        from obddlab import VariableOrder
        VariableOrder(3, (0, 1, 1))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_identity_unitary_program_validates():
    assert validate_program(identity_unitary_program()).ok


def test_quantum_construction_validates():
    assert validate_program(build_quantum_partialmod(1, 8)).ok


def test_bad_stochastic_column_is_reported_with_level_and_column():
    good = np.eye(2)
    bad = np.array([[0.5, 0.0], [0.4, 1.0]])  # column 0 sums to 0.9
    levels = (
        level_stochastic(good, good),
        level_stochastic(good, good),
        level_stochastic(bad, good),
    )
    p = ObddProgram(
        kind="probabilistic", order=natural_order(3), widths=(2,) * 4,
        levels=levels, initial=0, accept=frozenset({0}),
    )
    report = validate_program(p)
    assert not report.ok
    assert any("level 3" in v and "column 0" in v and "0.9" in v for v in report.violations)


def test_non_unitary_matrix_is_reported():
    half = np.full((2, 2), 0.5, dtype=complex)
    p = ObddProgram(
        kind="quantum", order=natural_order(1), widths=(2, 2),
        levels=(level_unitary(half, half),), initial=0, accept=frozenset({0}),
    )
    report = validate_program(p)
    assert any("not unitary" in v for v in report.violations)


def test_dimension_chain_mismatch_is_reported():
    p = ObddProgram(
        kind="deterministic", order=natural_order(2), widths=(1, 2, 2),
        levels=(level_map([0], [1]), level_map([0], [1])),  # level 2 source dim 1 != 2
        initial=0, accept=frozenset({0}),
    )
    report = validate_program(p)
    assert any("level 2" in v and "source dimension" in v for v in report.violations)


def test_out_of_range_targets_accept_and_initial_are_reported():
    p = ObddProgram(
        kind="deterministic", order=natural_order(1), widths=(1, 2),
        levels=(level_map([5], [0]),), initial=3, accept=frozenset({7}),
    )
    report = validate_program(p)
    text = " / ".join(report.violations)
    assert "maps to 5" in text
    assert "initial node 3" in text
    assert "accepting nodes [7]" in text


def test_false_stable_flag_is_reported():
    levels = (level_map([0, 1], [1, 0]), level_map([1, 0], [1, 0]))
    p = ObddProgram(
        kind="deterministic", order=natural_order(2), widths=(2,) * 3,
        levels=levels, initial=0, accept=frozenset({0}), stable=True,
    )
    report = validate_program(p)
    assert any("stable flag" in v for v in report.violations)


def test_kind_transition_shape_mismatch_is_reported():
    p = ObddProgram(
        kind="probabilistic", order=natural_order(1), widths=(2, 2),
        levels=(level_map([0, 1], [1, 0]),), initial=0, accept=frozenset({0}),
    )
    assert any("map transition in a probabilistic" in v
               for v in validate_program(p).violations)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def test_parity_counter_accepts_1111():
    parity = build_det_counter(2, 4)
    assert simulate(parity, "1111") == 1.0
    assert simulate(parity, "1110") == 0.0


def test_quantum_partialmod_small_inputs_match_rotation_arithmetic():
    p = build_quantum_partialmod(0, 2)
    # one 1 rotates by pi/2: two of them land back on the accept axis
    assert simulate(p, "11") == pytest.approx(1.0, abs=1e-12)
    assert simulate(p, "10") == pytest.approx(0.0, abs=1e-12)
    assert simulate(p, "01") == pytest.approx(0.0, abs=1e-12)
    theta = math.pi / 2
    for bits, m in (("00", 0), ("10", 1), ("11", 2)):
        assert simulate(p, bits) == pytest.approx(math.cos(m * theta) ** 2, abs=1e-12)


def test_simulate_respects_variable_order():
    # accept iff the bit at position 2 is one, tested first
    from obddlab import VariableOrder
    p = ObddProgram(
        kind="deterministic", order=VariableOrder(3, (2, 0, 1)), widths=(1, 2, 2, 2),
        levels=(level_map([0], [1]), level_map([0, 1], [0, 1]), level_map([0, 1], [0, 1])),
        initial=0, accept=frozenset({1}),
    )
    assert simulate(p, "001") == 1.0
    assert simulate(p, "110") == 0.0


def test_simulate_rejects_wrong_length_and_bad_symbols():
    parity = build_det_counter(2, 4)
    with pytest.raises(ValueError):
        simulate(parity, "101")
    with pytest.raises(ValueError):
        simulate(parity, "10x1")


def test_simulate_refuses_invalid_program():
    p = ObddProgram(
        kind="deterministic", order=natural_order(1), widths=(1, 1),
        levels=(level_map([4], [0]),), initial=0, accept=frozenset(),
    )
    with pytest.raises(InvalidProgramError):
        simulate(p, "1")


def test_nondeterministic_simulation_is_path_existence():
    # two guesses; only the 1-branch can reach the accepting node
    p = ObddProgram(
        kind="nondeterministic", order=natural_order(2), widths=(1, 2, 2),
        levels=(
            level_relation([[0, 1]], [[0, 1]]),
            level_relation([[0], []], [[0], [1]]),
        ),
        initial=0, accept=frozenset({1}),
    )
    assert simulate(p, "01") == 1.0
    assert simulate(p, "00") == 0.0
    assert node_trace(p, "01")[-1] == frozenset({0, 1})


def test_simulate_stays_in_unit_interval_for_all_kinds():
    programs = [
        build_det_mod(3, 6),
        build_nobdd_noto_fingerprint(4, 6),
        lift_deterministic(build_det_mod(3, 6)),
        build_quantum_partialmod(1, 6),
    ]
    for p in programs:
        for bits in bitstrings(6):
            value = simulate(p, bits)
            assert 0.0 <= value <= 1.0 + 1e-12
            if p.kind == "deterministic":
                assert value in (0.0, 1.0)


def test_state_traces_stay_normalized():
    q = build_quantum_partialmod(2, 10)
    for bits in ("1111100000", "0101010101", "1111111111"):
        for sv in state_trace(q, bits):
            assert sv.normalization_defect() <= 1e-9
    r = lift_deterministic(build_det_mod(3, 6))
    for sv in state_trace(r, "110100"):
        assert sv.normalization_defect() <= 1e-9


# ---------------------------------------------------------------------------
# computes
# ---------------------------------------------------------------------------

def test_parity_counter_computes_mod2():
    verdict = computes(build_det_mod(2, 4), mod_count(2, 4), AcceptanceMode.deterministic())
    assert verdict.ok


def test_quantum_partialmod_computes_exactly():
    verdict = computes(
        build_quantum_partialmod(1, 8), partial_mod(1, 8), AcceptanceMode.exact()
    )
    assert verdict.ok


def test_wrong_counter_yields_genuine_counterexample():
    mod3 = build_det_counter(3, 4)
    f = mod_count(2, 4)
    verdict = computes(mod3, f, AcceptanceMode.deterministic())
    assert not verdict.ok
    cex = verdict.counterexample
    assert f(cex) in (0, 1)
    assert float(f(cex)) != simulate(mod3, cex)


def test_classwise_check_matches_exhaustive_for_symmetric_functions():
    p = build_quantum_partialmod(1, 8)
    f = partial_mod(1, 8)
    assert computes(p, f, AcceptanceMode.exact(), classwise=True).ok
    q = build_nobdd_noto_fingerprint(4, 8)
    g = not_o_prefix(4, 8)
    assert computes(q, g, AcceptanceMode.nondeterministic(), classwise=True).ok


def test_mode_kind_mismatch_raises():
    nobdd = build_nobdd_noto_fingerprint(4, 6)
    with pytest.raises(ModeKindMismatchError):
        computes(nobdd, not_o_prefix(4, 6), AcceptanceMode.exact())
    with pytest.raises(ModeKindMismatchError):
        computes(build_det_mod(2, 4), mod_count(2, 4), AcceptanceMode.nondeterministic())


def test_computes_rejects_mismatched_lengths_and_huge_n():
    with pytest.raises(ValueError):
        computes(build_det_mod(2, 4), mod_count(2, 6), AcceptanceMode.deterministic())
    wide = build_det_counter(2, 30)
    with pytest.raises(CapExceededError):
        computes(wide, partial_mod(0, 30), AcceptanceMode.deterministic())


def test_acceptance_mode_parameter_validation():
    with pytest.raises(ValueError):
        AcceptanceMode.bounded_error(0.0)
    with pytest.raises(ValueError):
        AcceptanceMode.bounded_error(0.7)
    with pytest.raises(ValueError):
        AcceptanceMode.nondeterministic(-1.0)
    assert AcceptanceMode.bounded_error(0.5).accepts_yes(1.0)


# ---------------------------------------------------------------------------
# widths
# ---------------------------------------------------------------------------

def test_program_width_examples():
    assert program_width(build_det_mod(3, 6)).max_width == 3
    assert program_width(build_det_eqs(4, 8)).max_width == 11
    one = ObddProgram(
        kind="deterministic", order=natural_order(3), widths=(1,) * 4,
        levels=(level_map([0], [0]),) * 3, initial=0, accept=frozenset({0}), stable=True,
    )
    assert program_width(one).max_width == 1


def test_reachable_width_counts_only_reachable_nodes():
    from obddlab.constructions import build_det_notpal
    widths = program_width(build_det_notpal(6))
    assert widths.max_width == 3
    # the absorbing accept node is not reachable before the second level
    assert widths.reachable_per_level[1] == 2
    assert widths.reachable_max == 3


# ---------------------------------------------------------------------------
# subset construction
# ---------------------------------------------------------------------------

def test_width1_nobdd_determinizes_to_width_at_most_2():
    p = ObddProgram(
        kind="nondeterministic", order=natural_order(3), widths=(1,) * 4,
        levels=(level_relation([[0]], [[]]),) * 3, initial=0, accept=frozenset({0}),
    )
    d = nobdd_to_obdd_subset(p)
    assert program_width(d).max_width <= 2
    for bits in bitstrings(3):
        assert simulate(d, bits) == simulate(p, bits)


def test_subset_construction_agrees_with_fingerprint_nobdd():
    p = build_nobdd_noto_fingerprint(4, 6)
    d = nobdd_to_obdd_subset(p)
    assert d.kind == "deterministic"
    for bits in bitstrings(6):
        assert simulate(d, bits) == simulate(p, bits)


def test_subset_cap_is_enforced():
    p = build_nobdd_noto_fingerprint(6, 8)
    with pytest.raises(CapExceededError):
        nobdd_to_obdd_subset(p, subset_cap=2)


def test_subset_construction_rejects_other_kinds():
    with pytest.raises(ValueError):
        nobdd_to_obdd_subset(build_det_mod(2, 4))


# ---------------------------------------------------------------------------
# stable chains and lifting
# ---------------------------------------------------------------------------

def test_stable_symbol_chain_of_counter_is_cyclic_shift():
    p = build_det_partialmod(1, 8)
    m1 = stable_symbol_chain(p, 1)
    expected = np.roll(np.eye(4), 1, axis=0)
    assert np.array_equal(m1, expected)
    assert np.array_equal(stable_symbol_chain(p, 0), np.eye(4))


def test_stable_symbol_chain_requires_stable_classical_program():
    with pytest.raises(NotStableError):
        stable_symbol_chain(build_det_eqs(4, 8), 1)
    with pytest.raises(ValueError):
        stable_symbol_chain(build_quantum_partialmod(1, 4), 1)
    with pytest.raises(ValueError):
        stable_symbol_chain(build_det_partialmod(1, 4), 2)


def test_deterministic_program_is_a_special_probabilistic_program():
    for p in (build_det_mod(3, 8), build_det_partialmod(1, 8), build_det_mod(5, 12)):
        lifted = lift_deterministic(p)
        assert validate_program(lifted).ok
        for bits in bitstrings(p.n):
            assert simulate(lifted, bits) == pytest.approx(simulate(p, bits), abs=1e-12)


def test_bounded_error_mode_thresholds():
    # a lazy two-state chain: acceptance of the all-ones input after two
    # steps is 0.83, good enough for error 0.3 but not for 0.4
    m = np.array([[0.9, 0.2], [0.1, 0.8]])
    p = ObddProgram(
        kind="probabilistic", order=natural_order(2), widths=(2,) * 3,
        levels=(level_stochastic(m, m),) * 2, initial=0, accept=frozenset({0}),
        stable=True,
    )
    assert simulate(p, "11") == pytest.approx(0.83, abs=1e-12)
    from obddlab.functions import from_table
    always_one = from_table(np.ones(4, dtype=np.int8))
    assert computes(p, always_one, AcceptanceMode.bounded_error(0.3)).ok
    assert not computes(p, always_one, AcceptanceMode.bounded_error(0.4)).ok
