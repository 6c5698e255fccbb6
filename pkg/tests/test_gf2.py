import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icpsk.codes import parse_code
from icpsk.gf2 import (
    BitMatrix,
    BitVec,
    Subspace,
    coset_enumerate,
    in_span,
    mat_vec_mul,
    rank,
    row_space,
)


@pytest.fixture
def L1():
    return parse_code("x1+x4+x5, x1+x2+x3+x4+x5, x4+x5", 5).matrix


def bv(s):
    return BitVec.from_bits(s)


class TestBitVec:
    def test_bits_and_str(self):
        v = bv("10110")
        assert v.value == 0b10110 and v.width == 5
        assert list(v) == [1, 0, 1, 1, 0]
        assert str(v) == "10110"

    def test_add_is_xor(self):
        assert bv("110") + bv("011") == bv("101")

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            bv("11") + bv("111")

    def test_out_of_range_index(self):
        with pytest.raises(IndexError):
            bv("101")[3]

    def test_width_cap(self):
        BitVec(0, 64)
        with pytest.raises(ValueError):
            BitVec(0, 65)

    def test_select(self):
        assert bv("110100").select([2, 0, 4]) == bv("100")


class TestMatVec:
    def test_zero(self, L1):
        assert mat_vec_mul(bv("00000"), L1) == bv("000")

    def test_first_row(self, L1):
        assert mat_vec_mul(bv("10000"), L1) == bv("110")

    def test_rows_cancel(self, L1):
        assert mat_vec_mul(bv("00011"), L1) == bv("000")

    def test_dimension_mismatch(self, L1):
        with pytest.raises(ValueError):
            mat_vec_mul(bv("000"), L1)

    def test_matrix_layout(self, L1):
        assert L1.to_lists() == [[1, 1, 0], [0, 1, 0], [0, 1, 0], [1, 1, 1], [1, 1, 1]]


class TestRank:
    def test_identity(self):
        assert rank(BitMatrix.identity(3)) == 3

    def test_zero(self):
        assert rank(BitMatrix((0,) * 5, 3)) == 0

    def test_example_matrix(self, L1):
        assert rank(L1) == 3

    def test_transpose(self, L1):
        assert rank(L1.transpose()) == 3


class TestSubspace:
    def test_identity_is_full(self):
        assert row_space(BitMatrix.identity(3)) == Subspace.full(3)

    def test_row_permutation(self, L1):
        perm = BitMatrix(tuple(reversed(L1.rows)), L1.ncols)
        assert row_space(perm) == row_space(L1)

    def test_in_span(self):
        S = Subspace.span([0b110, 0b010], 3)
        assert in_span(bv("000"), S)
        assert in_span(bv("100"), S)
        assert not in_span(bv("001"), S)

    def test_in_span_width(self):
        with pytest.raises(ValueError):
            in_span(bv("0000"), Subspace.span([0b110], 3))

    def test_coset_representatives_cover(self):
        S = Subspace.span([0b110, 0b011], 4)
        reps = S.coset_representatives()
        assert len(reps) == 4
        members = {r ^ e for r in reps for e in S.elements()}
        assert members == set(range(16))


class TestCosets:
    def test_empty_basis(self):
        assert coset_enumerate([], bv("101")) == {bv("101")}

    def test_single(self):
        assert coset_enumerate([bv("001")], bv("000")) == {bv("000"), bv("001")}

    def test_pair(self):
        got = coset_enumerate([bv("110"), bv("010")], bv("000"))
        assert got == {bv("000"), bv("110"), bv("010"), bv("100")}

    def test_dependent(self):
        with pytest.raises(ValueError):
            coset_enumerate([0b110, 0b011, 0b101], 0)


rows_strategy = st.integers(1, 8).flatmap(
    lambda w: st.tuples(st.just(w), st.lists(st.integers(0, (1 << w) - 1), min_size=1, max_size=8))
)


@settings(max_examples=200, deadline=None)
@given(rows_strategy)
def test_rank_equals_basis_size(wr):
    w, rows = wr
    assert rank(BitMatrix(tuple(rows), w)) == Subspace.span(rows, w).dimension


@settings(max_examples=200, deadline=None)
@given(rows_strategy, st.data())
def test_row_space_invariant_under_row_ops(wr, data):
    w, rows = wr
    rows = list(rows)
    before = Subspace.span(rows, w)
    for _ in range(data.draw(st.integers(0, 10))):
        i = data.draw(st.integers(0, len(rows) - 1))
        j = data.draw(st.integers(0, len(rows) - 1))
        if data.draw(st.booleans()):
            rows[i], rows[j] = rows[j], rows[i]
        elif i != j:
            rows[i] ^= rows[j]
    assert Subspace.span(rows, w) == before


@settings(max_examples=100, deadline=None)
@given(rows_strategy)
def test_coset_size(wr):
    w, rows = wr
    basis = list(Subspace.span(rows, w).basis)
    assert len(coset_enumerate(basis, 0)) == 2 ** len(basis)
