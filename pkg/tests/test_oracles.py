import itertools

import numpy as np
import pytest

from obddlab import (
    AcceptanceMode,
    CapExceededError,
    VariableOrder,
    computes,
    natural_order,
    program_width,
    validate_program,
)
from obddlab.constructions import (
    build_det_eqs,
    build_det_partialmod,
)
from obddlab.functions import (
    eqs,
    from_table,
    mod_count,
    not_o,
    not_pal,
    partial_mod,
)
from obddlab.oracles import (
    distinguishability_lower_bound,
    min_width_over_orders,
    minimal_obdd,
    partial_min_width_exact,
    prefix_classes,
    stable_exhaustive_search,
    subfunction_widths,
)


def random_total_table(rng, n):
    return from_table(rng.integers(0, 2, size=1 << n).astype(np.int8))


# ---------------------------------------------------------------------------
# subfunction counting (total functions)
# ---------------------------------------------------------------------------

def test_not_o_subfunction_widths():
    report = subfunction_widths(not_o(8))
    assert report.max_width == 5
    assert report.per_level[4] == 5
    assert report.kind == "exact"


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_not_o_needs_half_n_plus_one(n):
    assert subfunction_widths(not_o(n)).max_width == n // 2 + 1


def test_mod_subfunction_widths():
    assert subfunction_widths(mod_count(3, 6)).max_width == 3


def test_eqs_subfunction_widths():
    assert subfunction_widths(eqs(4, 8)).max_width == 4


def test_subfunction_widths_rejects_partial_functions_and_big_n():
    with pytest.raises(ValueError):
        subfunction_widths(partial_mod(1, 6))
    with pytest.raises(CapExceededError):
        subfunction_widths(not_o(24))


# ---------------------------------------------------------------------------
# distinguishability lower bound
# ---------------------------------------------------------------------------

def test_partial_mod_distinguishability_profile():
    # only residue pairs at distance 2**k mod 2**(k+1) are comparable and
    # nonequivalent, so each level contributes at most 2 (this is why the
    # full lower bound needs the multi-step pigeonhole argument)
    report = distinguishability_lower_bound(partial_mod(1, 6))
    assert report.per_level == (1, 1, 2, 2, 2, 2, 2)
    assert report.max_width == 2
    assert report.kind == "lower_bound"


def test_total_function_distinguishability_equals_subfunction_count():
    # all prefixes comparable: the clique is every class
    f = mod_count(3, 6)
    assert distinguishability_lower_bound(f).per_level == subfunction_widths(f).per_level


def test_not_o_distinguishability_mid_level():
    assert distinguishability_lower_bound(not_o(8)).per_level[4] == 5


# ---------------------------------------------------------------------------
# exact partial-function oracle
# ---------------------------------------------------------------------------

def test_partial_mod_exact_widths():
    assert partial_min_width_exact(partial_mod(1, 6)).max_width == 4
    assert partial_min_width_exact(partial_mod(0, 2)).max_width == 2
    assert partial_min_width_exact(partial_mod(0, 4)).max_width == 2


def test_exact_oracle_never_exceeds_construction_width():
    for k, n in ((0, 4), (1, 6), (1, 8)):
        oracle = partial_min_width_exact(partial_mod(k, n))
        built = program_width(build_det_partialmod(k, n))
        assert oracle.max_width <= built.max_width


def test_lower_bound_never_exceeds_exact_value():
    for k, n in ((0, 4), (1, 6), (1, 8)):
        f = partial_mod(k, n)
        assert (distinguishability_lower_bound(f).max_width
                <= partial_min_width_exact(f).max_width)


def test_exact_oracle_matches_subfunctions_on_random_total_tables():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        f = random_total_table(rng, n)
        assert (partial_min_width_exact(f, class_cap=64).per_level
                == subfunction_widths(f).per_level)


def test_exact_oracle_rejects_big_n():
    with pytest.raises(CapExceededError):
        partial_min_width_exact(partial_mod(1, 14))


def test_minimal_obdd_achieves_the_oracle_width_and_computes():
    for f in (partial_mod(1, 6), partial_mod(0, 4), mod_count(3, 6), eqs(4, 8)):
        report = partial_min_width_exact(f, class_cap=64)
        program = minimal_obdd(f, class_cap=64)
        assert validate_program(program).ok
        assert program_width(program).max_width == report.max_width
        assert computes(program, f, AcceptanceMode.deterministic()).ok


def test_minimal_obdd_respects_the_requested_order():
    order = VariableOrder(4, (3, 1, 0, 2))
    program = minimal_obdd(mod_count(2, 4), order)
    assert program.order == order
    assert computes(program, mod_count(2, 4), AcceptanceMode.deterministic()).ok


# ---------------------------------------------------------------------------
# prefix classes
# ---------------------------------------------------------------------------

def test_prefix_classes_of_partial_mod():
    classes = prefix_classes(partial_mod(1, 6), None, 2)
    assert len(classes) == 3  # residues 0, 1, 2 are realized by length-2 prefixes
    assert {c.representative for c in classes} == {"00", "01", "11"} or \
           {c.representative for c in classes} <= {format(i, "02b") for i in range(4)}
    star_masks = {c.star_mask for c in classes}
    assert len(star_masks) == 2  # parity of the prefix fixes which suffixes are defined


def test_prefix_classes_level_bounds():
    with pytest.raises(ValueError):
        prefix_classes(partial_mod(1, 6), None, 9)


# ---------------------------------------------------------------------------
# exhaustive stable search
# ---------------------------------------------------------------------------

def test_stable_search_finds_the_counter_at_width_4():
    f = partial_mod(1, 6)
    assert stable_exhaustive_search(f, 3, "deterministic") is None
    found = stable_exhaustive_search(f, 4, "deterministic")
    assert found is not None
    assert found.stable and found.order.is_id
    assert validate_program(found).ok
    assert computes(found, f, AcceptanceMode.deterministic()).ok


def test_stable_search_nondeterministic_small_widths():
    f = partial_mod(1, 6)
    assert stable_exhaustive_search(f, 1, "nondeterministic") is None
    assert stable_exhaustive_search(f, 2, "nondeterministic") is None


def test_stable_search_returns_working_nondeterministic_program():
    f = partial_mod(0, 4)  # parity: width 2 suffices even nondeterministically
    found = stable_exhaustive_search(f, 2, "nondeterministic")
    assert found is not None
    assert computes(found, f, AcceptanceMode.nondeterministic()).ok


def test_stable_search_caps():
    f = partial_mod(1, 6)
    with pytest.raises(CapExceededError):
        stable_exhaustive_search(f, 5, "deterministic")
    with pytest.raises(CapExceededError):
        stable_exhaustive_search(f, 4, "nondeterministic")
    with pytest.raises(ValueError):
        stable_exhaustive_search(f, 2, "quantum")


def test_subset_bound_cross_check():
    # an exact width above 2**w rules out nondeterministic width w
    assert partial_min_width_exact(partial_mod(1, 6)).max_width > 2
    assert stable_exhaustive_search(partial_mod(1, 6), 1, "nondeterministic") is None
    assert subfunction_widths(not_o(8)).max_width > 4
    assert stable_exhaustive_search(not_o(8), 2, "nondeterministic") is None


# ---------------------------------------------------------------------------
# order enumeration
# ---------------------------------------------------------------------------

def test_not_pal_minimum_over_orders_is_3_but_natural_is_worse():
    report = min_width_over_orders(not_pal(4))
    assert report.max_width == 3
    assert subfunction_widths(not_pal(4)).max_width == 4
    # the witnessing order pairs mirrored positions
    assert report.order in ((0, 3, 1, 2), (3, 0, 2, 1), (0, 3, 2, 1), (3, 0, 1, 2))
    assert subfunction_widths(not_pal(4), VariableOrder(4, report.order)).max_width == 3


def test_symmetric_functions_are_order_insensitive():
    for f in (mod_count(2, 4), not_o(6)):
        values = {
            subfunction_widths(f, VariableOrder(f.n, perm)).max_width
            for perm in itertools.permutations(range(f.n))
        }
        assert len(values) == 1


def test_min_width_over_orders_on_partial_function():
    assert min_width_over_orders(partial_mod(1, 6)).max_width == 4


def test_min_width_over_orders_cap():
    with pytest.raises(CapExceededError):
        min_width_over_orders(not_o(10))


# ---------------------------------------------------------------------------
# oracle versus a construction it knows nothing about
# ---------------------------------------------------------------------------

def test_eqs_oracle_vs_construction():
    f = eqs(4, 8)
    oracle = subfunction_widths(f)
    built = program_width(build_det_eqs(4, 8))
    assert 2 <= oracle.max_width <= built.max_width
