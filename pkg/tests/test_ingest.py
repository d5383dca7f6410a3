import statistics

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dpkmeans.errors import DatasetShapeMismatch, DimensionMismatch, MissingValue, NonNumericCell, RaggedRows
from dpkmeans.ingest import (
    REGISTRY,
    Normalization,
    NormalizationParams,
    compute_stats,
    inverse_transform,
    load_csv,
    load_dataset,
    normalize,
    parse_csv_text,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
matrices = st.tuples(st.integers(1, 12), st.integers(1, 5)).flatmap(
    lambda shape: arrays(np.float64, shape, elements=finite)
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLoadCsv:
    def test_plain(self, tmp_path):
        m = load_csv(write(tmp_path, "1,2\n3,4"))
        np.testing.assert_array_equal(m, [[1, 2], [3, 4]])

    def test_header_skipped(self, tmp_path):
        m = load_csv(write(tmp_path, "a,b\n1,2"), has_header=True)
        np.testing.assert_array_equal(m, [[1, 2]])

    def test_label_column_dropped(self, tmp_path):
        m = load_csv(write(tmp_path, "1,x,2\n3,y,4\n"), label_column=1)
        np.testing.assert_array_equal(m, [[1, 2], [3, 4]])

    def test_custom_delimiter(self, tmp_path):
        m = load_csv(write(tmp_path, "1;2\n3;4\n"), delimiter=";")
        assert m.shape == (2, 2)

    def test_whitespace_delimiter(self, tmp_path):
        m = load_csv(write(tmp_path, "1\t\t2 3\n4\t5\t6\n"), delimiter=None)
        np.testing.assert_array_equal(m, [[1, 2, 3], [4, 5, 6]])

    def test_blank_lines_ignored(self, tmp_path):
        assert load_csv(write(tmp_path, "1,2\n\n3,4\n\n")).shape == (2, 2)

    def test_order_preserved(self, tmp_path, rng):
        values = rng.normal(size=(40, 3))
        text = "\n".join(",".join(repr(float(v)) for v in row) for row in values)
        np.testing.assert_array_equal(load_csv(write(tmp_path, text)), values)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_csv(tmp_path / "nope.csv")

    def test_ragged_reports_line(self, tmp_path):
        with pytest.raises(RaggedRows) as exc:
            load_csv(write(tmp_path, "1,2\n3,4\n5\n"))
        assert exc.value.line == 3

    def test_non_numeric(self, tmp_path):
        with pytest.raises(NonNumericCell, match="'abc'") as exc:
            load_csv(write(tmp_path, "1,2\nabc,4\n"))
        assert (exc.value.line, exc.value.column) == (2, 0)

    @pytest.mark.parametrize("text", ["1,\n3,4", "1,2\n?,4"])
    def test_missing_value(self, tmp_path, text):
        with pytest.raises(MissingValue):
            load_csv(write(tmp_path, text))

    def test_nan_rejected(self):
        with pytest.raises(NonNumericCell):
            parse_csv_text("1,nan\n")

    def test_bad_delimiter(self, tmp_path):
        with pytest.raises(ValueError):
            load_csv(write(tmp_path, "1,2"), delimiter=";;")

    def test_result_is_read_only(self, tmp_path):
        m = load_csv(write(tmp_path, "1,2"))
        with pytest.raises(ValueError):
            m[0, 0] = 5


class TestRegistry:
    def test_entries(self):
        shapes = {name: (d.n_attributes, d.n_records) for name, d in REGISTRY.items()}
        assert shapes == {
            "iris": (4, 150),
            "ionosphere": (34, 351),
            "seeds": (7, 210),
            "user_modeling": (5, 258),
        }

    def test_bundled_iris(self, iris):
        assert iris.shape == (150, 4)
        np.testing.assert_array_equal(iris[0], [5.1, 3.5, 1.4, 0.2])

    def test_ionosphere_fixture(self, ionosphere):
        assert ionosphere.shape == (351, 34)

    def test_shape_mismatch(self, tmp_path):
        path = write(tmp_path, "1,2,3,4,a\n")
        with pytest.raises(DatasetShapeMismatch):
            load_dataset(f"iris={path}")

    def test_data_dir_lookup(self, tmp_path):
        rows = "\n".join(f"{i},{i},{i},{i},{i},L" for i in range(258))
        write(tmp_path, "STG,SCG,STR,LPR,PEG,UNS\n" + rows, "user_modeling.csv")
        name, m = load_dataset("user_modeling", data_dir=tmp_path)
        assert name == "user_modeling" and m.shape == (258, 5)

    def test_missing_registry_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="seeds_dataset.txt"):
            load_dataset("seeds", data_dir=tmp_path)

    def test_plain_path(self, tmp_path):
        name, m = load_dataset(str(write(tmp_path, "1,2\n3,4\n", "toy.csv")))
        assert name == "toy" and m.shape == (2, 2)


class TestStats:
    def test_two_points(self):
        s = compute_stats([[1], [3]])
        assert (s.minimum[0], s.maximum[0], s.mean[0], s.variance[0]) == (1, 3, 2, 1)

    def test_constant(self):
        assert compute_stats([[5], [5], [5]]).variance[0] == 0

    def test_hand_computed_variances(self):
        m = [[1, 10], [2, 20], [3, 30], [4, 40]]
        expected = [statistics.pvariance([1, 2, 3, 4]), statistics.pvariance([10, 20, 30, 40])]
        assert expected == [1.25, 125]
        np.testing.assert_allclose(compute_stats(m).variance, expected, rtol=1e-15)

    def test_max_abs(self):
        np.testing.assert_array_equal(compute_stats([[1, -7], [-3, 2]]).max_abs, [3, 7])

    @given(matrices)
    def test_matches_two_pass_reference(self, m):
        s = compute_stats(m)
        for j in range(m.shape[1]):
            col = [float(v) for v in m[:, j]]
            mean = sum(col) / len(col)
            var = sum((v - mean) ** 2 for v in col) / len(col)
            assert s.minimum[j] <= s.mean[j] + 1e-9 * max(1, abs(mean))
            assert s.mean[j] <= s.maximum[j] + 1e-9 * max(1, abs(mean))
            assert s.mean[j] == pytest.approx(mean, rel=1e-12, abs=1e-9)
            assert s.variance[j] == pytest.approx(var, rel=1e-12, abs=1e-6)
            assert s.variance[j] >= 0


class TestNormalize:
    def test_max_abs_example(self):
        out, params = normalize([[1, -2], [3, 4]], "max-abs")
        np.testing.assert_allclose(out, [[1 / 3, -0.5], [1, 1]])
        np.testing.assert_array_equal(params.scale, [3, 4])

    def test_none_is_identity(self, rng):
        m = rng.normal(size=(7, 3))
        out, _ = normalize(m, "none")
        np.testing.assert_array_equal(out, m)

    def test_all_zero_attribute(self):
        out, params = normalize([[0], [0]], "max-abs")
        np.testing.assert_array_equal(out, [[0], [0]])
        assert params.scale[0] == 1

    def test_min_max_range(self, rng):
        out, _ = normalize(rng.normal(size=(30, 4)), Normalization.MIN_MAX)
        np.testing.assert_allclose(out.min(axis=0), 0)
        np.testing.assert_allclose(out.max(axis=0), 1)

    def test_min_max_constant_attribute(self):
        out, params = normalize([[5, 1], [5, 2]], "min-max")
        assert params.scale[0] == 1
        np.testing.assert_array_equal(out[:, 0], [0, 0])

    def test_global_max_abs(self):
        out, params = normalize([[1, -8], [2, 4]], "global-max-abs")
        np.testing.assert_array_equal(params.scale, [8, 8])
        np.testing.assert_allclose(out, [[0.125, -1], [0.25, 0.5]])

    @pytest.mark.parametrize("alias,method", [("maxabs", "max-abs"), ("minmax", "min-max"),
                                              ("globalmax", "global-max-abs"), ("none", "none")])
    def test_aliases(self, alias, method):
        assert Normalization.parse(alias).value == method

    @given(matrices, st.sampled_from(list(Normalization)))
    def test_round_trip(self, m, method):
        out, params = normalize(m, method)
        back = inverse_transform(out, params)
        np.testing.assert_allclose(back, m, rtol=1e-9, atol=1e-9 * max(1.0, np.abs(m).max()))
        assert np.all(params.scale > 0)

    @given(matrices)
    def test_max_abs_hits_one(self, m):
        out, _ = normalize(m, "max-abs")
        peak = np.abs(out).max(axis=0)
        zero = np.all(m == 0, axis=0)
        np.testing.assert_array_equal(peak[~zero], 1.0)
        np.testing.assert_array_equal(peak[zero], 0.0)


class TestInverseTransform:
    def test_max_abs(self):
        params = NormalizationParams(Normalization.MAX_ABS, np.array([3.0, 4.0]), np.zeros(2))
        np.testing.assert_array_equal(inverse_transform([[1, 1]], params), [[3, 4]])

    def test_none(self, rng):
        pts = rng.normal(size=(3, 2))
        _, params = normalize(rng.normal(size=(5, 2)), "none")
        np.testing.assert_array_equal(inverse_transform(pts, params), pts)

    def test_min_max(self):
        _, params = normalize([[2], [6]], "min-max")
        np.testing.assert_array_equal(inverse_transform([[0.5]], params), [[4]])

    def test_dimension_mismatch(self):
        _, params = normalize([[1, 2]], "max-abs")
        with pytest.raises(DimensionMismatch):
            inverse_transform([[1, 2, 3]], params)
