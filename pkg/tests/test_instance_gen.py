import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permsample import GenSpec, Instance, exact_permanent, generate
from permsample.gen import cyclic_regular
from permsample.instance import MatrixFormatError, check_adjacency, format_matrix, parse_matrix


class TestInstance:
    def test_sums(self, fig1):
        assert fig1.row_sums.tolist() == [2, 3, 4, 1]
        assert fig1.col_sums.tolist() == [3, 2, 3, 2]
        assert fig1.row_sums.sum() == fig1.col_sums.sum()

    def test_read_only(self, fig1):
        with pytest.raises(ValueError):
            fig1.adj[0, 0] = 0

    @pytest.mark.parametrize("bad", [[[1, 0]], [[1, 2], [0, 1]], [[-1, 0], [0, 1]], np.zeros((0, 0))])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            check_adjacency(bad)

    def test_bool_input(self):
        assert Instance.from_array(np.eye(3, dtype=bool)) == Instance.identity(3)

    def test_perfect_matching_detection(self, fig1):
        assert fig1.has_perfect_matching()
        assert not Instance([[1, 1, 1], [1, 0, 0], [1, 0, 0]]).has_perfect_matching()


class TestMatrixFormat:
    def test_round_trip(self, fig1):
        text = format_matrix(fig1)
        assert text == "4\n1 0 1 0\n1 1 0 1\n1 1 1 1\n0 0 1 0\n"
        assert parse_matrix(text) == fig1

    @pytest.mark.parametrize(
        "text, line, column",
        [
            ("", 1, None),
            ("x\n1\n", 1, 1),
            ("2 3\n", 1, None),
            ("2\n1 0\n", 3, None),
            ("2\n1 0\n0 1 1\n", 3, None),
            ("2\n1 0\n0 2\n", 3, 2),
        ],
    )
    def test_diagnostics(self, text, line, column):
        with pytest.raises(MatrixFormatError) as info:
            parse_matrix(text)
        assert info.value.line == line
        assert info.value.column == column

    def test_trailing_blank_lines(self):
        assert parse_matrix("1\n1\n\n\n") == Instance.identity(1)


class TestGenerate:
    def test_complete(self):
        assert generate(GenSpec(5, 5, seed=0)) == Instance.ones(5)

    def test_permutation(self):
        inst = generate(GenSpec(5, 1, seed=4))
        assert exact_permanent(inst) == 1

    def test_nearly_regular(self):
        inst = generate(GenSpec(8, 4, jitter=1, model="nearly_regular", seed=2))
        assert set(inst.row_sums.tolist()) | set(inst.col_sums.tolist()) <= {3, 4, 5}
        assert not inst.has_zero_line()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 14), st.data())
    def test_regular_union(self, n, data):
        degree = data.draw(st.integers(1, n))
        seed = data.draw(st.integers(0, 2**32 - 1))
        inst = generate(GenSpec(n, degree, seed=seed))
        assert (inst.row_sums == degree).all() and (inst.col_sums == degree).all()
        assert inst.has_perfect_matching()
        assert generate(GenSpec(n, degree, seed=seed)) == inst
        assert parse_matrix(format_matrix(inst)) == inst

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 14), st.data())
    def test_nearly_regular_band(self, n, data):
        degree = data.draw(st.integers(2, n - 1))
        jitter = data.draw(st.integers(0, min(degree - 1, n - degree)))
        seed = data.draw(st.integers(0, 2**32 - 1))
        inst = generate(GenSpec(n, degree, jitter, "nearly_regular", seed))
        for sums in (inst.row_sums, inst.col_sums):
            assert sums.min() >= degree - jitter and sums.max() <= degree + jitter
        assert inst.has_perfect_matching()
        assert generate(GenSpec(n, degree, jitter, "nearly_regular", seed)) == inst

    def test_cyclic_fallback_shape(self):
        a = cyclic_regular(6, 4)
        assert (a.sum(axis=0) == 4).all() and (a.sum(axis=1) == 4).all()

    def test_fallback_used_when_redraws_fail(self, monkeypatch):
        import permsample.gen as gen

        monkeypatch.setattr(gen, "MAX_REDRAWS", 0)
        assert np.array_equal(generate(GenSpec(6, 3, seed=1)).adj, cyclic_regular(6, 3))

    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=0, degree=1), dict(n=3, degree=4), dict(n=4, degree=3, jitter=2), dict(n=4, degree=2, model="x")],
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ValueError):
            GenSpec(**kwargs)
