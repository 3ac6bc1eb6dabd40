from fractions import Fraction as F

from hypothesis import given, strategies as st

from invcorr.correspond import density_table, extract_subsequence

ALTERNATING = ["01" * 4, "0" * 8] * 3


def test_density_table_examples():
    assert density_table(["01", "0000"], 1).column("1") == [F(1, 2), 0]
    assert density_table(["1"], 0).column("") == [1]
    assert density_table(["0011", "0101"], 2).column("01") == [F(1, 4), F(1, 2)]


def test_extract_alternating_family():
    t = density_table(ALTERNATING, 1)
    assert extract_subsequence(t, F(1, 10)) == [0, 2, 4]
    t2 = density_table(ALTERNATING + ["01010101"], 1)
    assert extract_subsequence(t2, F(1, 10)) == [0, 2, 4, 6]


def test_extract_degenerate_inputs():
    assert extract_subsequence(density_table(["0110"], 2), F(1, 10)) == [0]
    assert extract_subsequence(density_table(["011"] * 4, 2), F(1, 10)) == [0, 1, 2, 3]


families = st.lists(st.text(alphabet="01", min_size=1, max_size=12), min_size=1, max_size=10)
tols = st.sampled_from([F(1, 10), F(1, 4), F(1, 3), F(1, 2)])


@given(families, tols)
def test_extraction_properties(words, tol):
    t = density_table(words, 2)
    keep = extract_subsequence(t, tol)
    assert keep
    for a in keep:
        for b in keep:
            assert all(abs(x - y) <= tol for x, y in zip(t.cells[a], t.cells[b]))
    sub = density_table([words[i] for i in keep], 2)
    assert extract_subsequence(sub, tol) == list(range(len(keep)))
