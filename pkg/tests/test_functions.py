import io

import numpy as np
import pytest

from obddlab import STAR
from obddlab.functions import (
    count_profile,
    eqs,
    format_truth_table,
    from_table,
    make_function,
    mod_count,
    not_eqs,
    not_o,
    not_o_prefix,
    not_pal,
    not_power,
    not_square,
    partial_mod,
    read_truth_table,
    split_marker_value,
)


# ---------------------------------------------------------------------------
# definitions on concrete inputs
# ---------------------------------------------------------------------------

def test_partial_mod_values():
    f = partial_mod(1, 4)
    assert f("1111") == 1        # four ones, 0 mod 4
    assert f("0011") == 0        # two ones, 2 mod 4
    assert f("0001") is None     # odd counts are undefined
    assert f("0000") == 1


def test_not_o_values():
    f = not_o(4)
    assert f("0101") == 0
    assert f("0111") == 1
    assert all(not_o(5)(format(i, "05b")) == 1 for i in range(32))


def test_not_square_and_not_power_values():
    f = not_square(6)
    assert f("001111") == 0      # two zeros, four ones: 2**2 == 4
    assert f("011111") == 1      # one zero: 1 != 5
    g = not_power(6)
    assert g("001111") == 0      # 2**2 == 4 ones
    assert g("000111") == 1      # 2**3 != 3
    # all-ones input: zero zeros, 2**0 = 1 one required
    assert not_power(1)("1") == 0
    assert not_power(3)("111") == 1


def test_eqs_values_from_marker_rule():
    f = eqs(4, 8)
    assert f("01110000") == 1    # alpha = (1), beta = (1)
    assert f("01100000") == 0    # alpha = (1), beta = (0)
    assert f("00110000") == 0    # alpha = (0), beta = (1)
    assert f("00000000") == 0    # alpha = (0,0), beta = () differ in length


def test_not_pal_values():
    f = not_pal(4)
    assert f("0110") == 0
    assert f("0111") == 1
    assert not_pal(5)("01110") == 0
    assert not_pal(5)("01100") == 1


def test_split_marker_value_examples():
    s = split_marker_value("01110000", 4)
    assert (s.alpha, s.beta) == ((1,), (1,))
    s = split_marker_value("00000000", 4)
    assert (s.alpha, s.beta) == ((0, 0), ())
    # markers both 1 route both value bits right
    s = split_marker_value("10100000", 4)
    assert (s.alpha, s.beta) == ((), (0, 0))


def test_split_marker_value_parameter_checks():
    with pytest.raises(ValueError):
        split_marker_value("0101", 2)
    with pytest.raises(ValueError):
        split_marker_value("01", 4)


# ---------------------------------------------------------------------------
# count profiles and symmetry metadata
# ---------------------------------------------------------------------------

def test_mod_profile():
    assert count_profile(mod_count(3, 6)) == {0: 1, 1: 0, 2: 0, 3: 1, 4: 0, 5: 0, 6: 1}


def test_partial_mod_profile_at_k0():
    assert count_profile(partial_mod(0, 2)) == {0: 1, 1: 0, 2: 1}


def test_not_ok_profile_runs_over_prefix_counts():
    profile = count_profile(not_o_prefix(4, 10))
    assert profile == {0: 1, 1: 1, 2: 0, 3: 1, 4: 1}


def test_eqs_is_not_symmetric():
    f = eqs(4, 8)
    assert count_profile(f) is None
    # two inputs with three ones each but different values
    assert f("01110000") == 1 and f("01101000") == 0


def test_symmetric_metadata_agrees_with_tables():
    # every input in a count class takes the class value
    for f in (partial_mod(1, 6), mod_count(3, 7), not_o(6), not_square(6), not_power(6)):
        profile = count_profile(f)
        table = f.truth_table()
        for i in range(1 << f.n):
            want = profile[bin(i).count("1")]
            assert table[i] == (STAR if want is None else want)


def test_prefix_symmetry_agrees_with_tables():
    f = not_o_prefix(4, 7)
    profile = count_profile(f)
    table = f.truth_table()
    for i in range(1 << 7):
        prefix_ones = bin(i >> 3).count("1")
        assert table[i] == profile[prefix_ones]


# ---------------------------------------------------------------------------
# family invariants
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k,n", [(0, 5), (0, 16), (1, 9), (1, 16), (2, 16), (3, 16)])
def test_partial_mod_class_counts(k, n):
    period, half = 1 << (k + 1), 1 << k
    profile = count_profile(partial_mod(k, n))
    ones = [m for m, v in profile.items() if v == 1]
    zeros = [m for m, v in profile.items() if v == 0]
    stars = [m for m, v in profile.items() if v is None]
    assert len(ones) == n // period + 1
    assert ones == [m for m in range(n + 1) if m % period == 0]
    assert zeros == [m for m in range(n + 1) if m % period == half]
    assert len(stars) == n + 1 - len(ones) - len(zeros)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14])
def test_not_ok_with_k_equal_n_is_not_o(n):
    assert np.array_equal(not_o_prefix(n, n).truth_table(), not_o(n).truth_table())


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_eqs_ignores_bits_past_k(n):
    table = eqs(4, n).truth_table().reshape(1 << 4, -1)
    assert np.all(table == table[:, :1])


@pytest.mark.parametrize("n", [4, 7, 10])
def test_not_eqs_is_the_inversion_of_eqs(n):
    assert np.array_equal(not_eqs(4, n).truth_table(), 1 - eqs(4, n).truth_table())


# ---------------------------------------------------------------------------
# construction and dispatch
# ---------------------------------------------------------------------------

def test_parameter_constraints():
    with pytest.raises(ValueError):
        mod_count(1, 6)          # k must exceed 1
    with pytest.raises(ValueError):
        mod_count(4, 6)          # k must stay below n/2
    with pytest.raises(ValueError):
        partial_mod(-1, 4)
    with pytest.raises(ValueError):
        not_o_prefix(3, 6)       # odd k
    with pytest.raises(ValueError):
        not_o_prefix(8, 6)       # k > n
    with pytest.raises(ValueError):
        eqs(6, 12)               # k not a multiple of 4
    with pytest.raises(ValueError):
        eqs(8, 6)                # k > n
    with pytest.raises(ValueError):
        not_pal(0)


def test_make_function_dispatch():
    assert make_function("PartialMOD", k=1, n=6).name == "PartialMOD"
    assert make_function("noteqs", k=4, n=8).name == "NotEQS"
    assert make_function("NotPAL", n=5).name == "NotPAL"
    with pytest.raises(ValueError):
        make_function("NotO", k=3, n=6)     # spurious k
    with pytest.raises(ValueError):
        make_function("MOD", n=6)           # missing k
    with pytest.raises(ValueError):
        make_function("frobnicate", n=4)


def test_total_flag():
    assert mod_count(2, 4).total
    assert not partial_mod(1, 6).total


# ---------------------------------------------------------------------------
# truth-table text format
# ---------------------------------------------------------------------------

def test_truth_table_round_trip():
    f = partial_mod(1, 4)
    text = format_truth_table(f)
    assert "0001 *" in text.splitlines()
    g = read_truth_table(io.StringIO(text))
    assert np.array_equal(g.truth_table(), f.truth_table())
    assert g("1111") == 1 and g("0001") is None


def test_read_truth_table_rejects_malformed_documents():
    with pytest.raises(ValueError):
        read_truth_table(io.StringIO("01 x\n"))
    with pytest.raises(ValueError):
        read_truth_table(io.StringIO("00 1\n01 0\n"))      # missing rows
    with pytest.raises(ValueError):
        read_truth_table(io.StringIO("0 1\n0 1\n"))        # duplicate input
    with pytest.raises(ValueError):
        read_truth_table(io.StringIO(""))


def test_from_table_checks_entries():
    with pytest.raises(ValueError):
        from_table(np.array([0, 1, 3, 0], dtype=np.int8))
    with pytest.raises(ValueError):
        from_table(np.array([0, 1, 1], dtype=np.int8))
