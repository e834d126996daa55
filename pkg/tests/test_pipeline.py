import numpy as np
import pytest

from qembench.exceptions import (
    BalanceError,
    DataError,
    SchemaError,
    ShapeError,
    StratificationError,
)
from qembench.pipeline import (
    CATEGORICAL_COLUMNS,
    LabeledDataset,
    OneHotEncoder,
    SplitSpec,
    Standardizer,
    elbow_index,
    load_churn_csv,
    one_hot,
    pca_fit,
    pca_transform,
    pearson_corr,
    train_test_split,
    undersample,
    vif_scores,
)


def tiny_dataset(labels, **columns):
    labels = np.asarray(labels, dtype=np.int8)
    data = {}
    for name, values in columns.items():
        arr = np.asarray(values)
        data[name] = arr.astype(float) if arr.dtype.kind in "fi" else arr.astype(object)
    return LabeledDataset(columns=list(columns), data=data, labels=labels)


class TestLoadChurnCsv:
    def test_fixture_loads(self, fixture_csv_20):
        ds = load_churn_csv(fixture_csv_20)
        assert ds.row_count == 20
        assert ds.meta["rows_ingested"] == 20
        assert "customerID" not in ds.columns
        assert len(ds.columns) == 19
        assert set(ds.labels) <= {0, 1}

    def test_renamed_column_is_schema_error(self, fixture_csv_20, tmp_path):
        text = open(fixture_csv_20).read().replace("PaymentMethod", "PayMethod")
        bad = tmp_path / "renamed.csv"
        bad.write_text(text)
        with pytest.raises(SchemaError, match="PaymentMethod"):
            load_churn_csv(bad)

    def test_blank_total_charges_dropped(self, tmp_path, fixture_csv_20):
        lines = open(fixture_csv_20).read().splitlines()
        parts = lines[1].split(",")
        parts[-2] = ""
        lines[1] = ",".join(parts)
        path = tmp_path / "blank.csv"
        path.write_text("\n".join(lines) + "\n")
        ds = load_churn_csv(path, blank_total_charges="drop")
        assert ds.row_count == 19
        assert ds.meta["rows_dropped"] == 1

    def test_blank_total_charges_imputed(self, tmp_path, fixture_csv_20):
        lines = open(fixture_csv_20).read().splitlines()
        parts = lines[1].split(",")
        parts[-2] = ""
        lines[1] = ",".join(parts)
        path = tmp_path / "blank.csv"
        path.write_text("\n".join(lines) + "\n")
        ds = load_churn_csv(path, blank_total_charges="impute")
        assert ds.row_count == 20
        assert ds.meta["rows_imputed"] == 1
        assert np.isfinite(ds.data["TotalCharges"]).all()

    def test_unparseable_numeric_is_row_indexed(self, tmp_path, fixture_csv_20):
        lines = open(fixture_csv_20).read().splitlines()
        parts = lines[3].split(",")
        parts[5] = "forty"  # tenure
        lines[3] = ",".join(parts)
        path = tmp_path / "badnum.csv"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataError, match="row 2"):
            load_churn_csv(path)


class TestOneHot:
    def test_three_row_indicator_example(self):
        ds = tiny_dataset([0, 1, 0], color=["a", "b", "a"])
        out = one_hot(ds, ["color"])
        assert out.columns == ["color=a", "color=b"]
        assert np.array_equal(out.matrix(), [[1, 0], [0, 1], [1, 0]])

    def test_single_category_column(self):
        ds = tiny_dataset([0, 1], flag=["only", "only"])
        out = one_hot(ds, ["flag"])
        assert out.columns == ["flag=only"]
        assert np.array_equal(out.matrix().ravel(), [1.0, 1.0])

    def test_numeric_columns_pass_through(self):
        ds = tiny_dataset([0, 1], age=[1.0, 2.0], color=["x", "y"])
        out = one_hot(ds, ["color"])
        assert out.columns == ["age", "color=x", "color=y"]

    def test_indicator_partition_property(self, fixture_csv_20):
        ds = load_churn_csv(fixture_csv_20)
        out = one_hot(ds, CATEGORICAL_COLUMNS)
        for col in CATEGORICAL_COLUMNS:
            group = [c for c in out.columns if c.startswith(f"{col}=")]
            sums = sum(out.data[c] for c in group)
            assert np.array_equal(sums, np.ones(out.row_count))

    def test_unseen_category_maps_to_zeros(self):
        train = tiny_dataset([0, 1], color=["a", "b"])
        encoder = OneHotEncoder(["color"]).fit(train)
        test = tiny_dataset([0], color=["c"])
        out = encoder.transform(test)
        assert np.array_equal(out.matrix(), [[0.0, 0.0]])
        assert encoder.unseen_report == [("color", "c", 1)]

    def test_telco_width_is_42_after_drops(self, synth_csv):
        ds = load_churn_csv(synth_csv).drop_columns(
            ["TotalCharges", "PhoneService", "MonthlyCharges"]
        )
        out = one_hot(ds, [c for c in CATEGORICAL_COLUMNS if c in ds.columns])
        assert len(out.columns) == 42


class TestCorrelation:
    def test_self_correlation_is_one(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(100, 1))
        m = np.hstack([x, x])
        corr = pearson_corr(m)
        assert corr[0, 1] == pytest.approx(1.0)

    def test_negated_column(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(100, 1))
        corr = pearson_corr(np.hstack([x, -x]))
        assert corr[0, 1] == pytest.approx(-1.0)

    def test_zero_variance_flagged(self):
        m = np.column_stack([np.ones(10), np.arange(10.0)])
        corr, flags = pearson_corr(m, return_flags=True)
        assert flags[0] and not flags[1]
        assert corr[0, 1] == 0.0
        assert corr[0, 0] == 1.0

    def test_symmetric_unit_diagonal_bounded(self):
        rng = np.random.default_rng(2)
        m = rng.normal(size=(50, 5))
        corr = pearson_corr(m)
        assert np.array_equal(corr, corr.T)
        assert np.allclose(np.diag(corr), 1.0)
        assert np.all(np.abs(corr) <= 1.0)


class TestVif:
    def test_independent_columns_near_one(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(10_000, 2))
        vifs = vif_scores(m)
        assert np.allclose(vifs, 1.0, atol=0.05)

    def test_duplicated_column_hits_cap(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(200, 1))
        vifs = vif_scores(np.hstack([x, x, rng.normal(size=(200, 1))]))
        assert vifs[0] == 1e6 and vifs[1] == 1e6

    def test_correlated_column_oracle(self):
        # y = 0.9 x + 0.1 eps: R^2 -> 0.81/0.82, VIF -> ~82
        rng = np.random.default_rng(5)
        x = rng.normal(size=50_000)
        y = 0.9 * x + 0.1 * rng.normal(size=50_000)
        vifs = vif_scores(np.column_stack([x, y]))
        assert vifs[1] > 5.0
        assert vifs[1] == pytest.approx(82.0, rel=0.15)

    def test_constant_column_flagged_at_cap(self):
        m = np.column_stack([np.ones(30), np.arange(30.0)])
        vifs, flags = vif_scores(m, return_flags=True)
        assert vifs[0] == 1e6 and flags[0]
        assert not flags[1]

    def test_orthogonal_design_is_one(self):
        # exactly orthogonal, centered columns
        n = 64
        t = np.arange(n)
        m = np.column_stack([np.cos(2 * np.pi * t / n), np.sin(2 * np.pi * t / n)])
        assert np.allclose(vif_scores(m), 1.0, atol=1e-9)


class TestUndersample:
    def test_balances_to_minority_count(self):
        rng = np.random.default_rng(6)
        ds = tiny_dataset([1] * 10 + [0] * 90, x=rng.normal(size=100))
        out = undersample(ds, seed=0)
        assert out.row_count == 20
        assert out.class_counts() == (10, 10)

    def test_minority_rows_all_kept_and_subset(self):
        rng = np.random.default_rng(7)
        values = np.arange(100.0)
        ds = tiny_dataset([1] * 10 + [0] * 90, x=values)
        out = undersample(ds, seed=3)
        assert set(out.data["x"][out.labels == 1]) == set(values[:10])
        assert set(out.data["x"]) <= set(values)

    def test_balanced_input_only_reordered(self):
        ds = tiny_dataset([0, 1, 0, 1], x=[1.0, 2.0, 3.0, 4.0])
        out = undersample(ds, seed=1)
        assert sorted(out.data["x"]) == [1.0, 2.0, 3.0, 4.0]

    def test_single_class_rejected(self):
        ds = tiny_dataset([1, 1], x=[0.0, 1.0])
        with pytest.raises(BalanceError):
            undersample(ds, seed=0)

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(8)
        ds = tiny_dataset([1] * 20 + [0] * 80, x=rng.normal(size=100))
        a = undersample(ds, seed=5)
        b = undersample(ds, seed=5)
        assert np.array_equal(a.data["x"], b.data["x"])


class TestSplit:
    def test_floor_convention_counts(self):
        rng = np.random.default_rng(9)
        ds = tiny_dataset([0, 1] * 1869, x=rng.normal(size=3738))
        train, test = train_test_split(ds, SplitSpec(0.8, seed=0))
        assert train.row_count == 2990
        assert test.row_count == 748

    def test_disjoint_exhaustive(self):
        ds = tiny_dataset([0, 1] * 25, x=np.arange(50.0))
        train, test = train_test_split(ds, SplitSpec(0.8, seed=2))
        assert sorted(np.concatenate([train.data["x"], test.data["x"]])) == list(
            np.arange(50.0)
        )

    def test_stratified_balance_within_one_row(self):
        ds = tiny_dataset([0] * 30 + [1] * 30, x=np.arange(60.0))
        train, _ = train_test_split(ds, SplitSpec(0.8, seed=3, stratified=True))
        n0, n1 = train.class_counts()
        assert abs(n0 - n1) <= 1

    def test_deterministic_per_seed(self):
        ds = tiny_dataset([0, 1] * 20, x=np.arange(40.0))
        a_train, a_test = train_test_split(ds, SplitSpec(0.8, seed=4))
        b_train, b_test = train_test_split(ds, SplitSpec(0.8, seed=4))
        assert np.array_equal(a_train.data["x"], b_train.data["x"])
        assert np.array_equal(a_test.data["x"], b_test.data["x"])

    def test_tiny_class_stratification_error(self):
        ds = tiny_dataset([0] * 9 + [1], x=np.arange(10.0))
        with pytest.raises(StratificationError):
            train_test_split(ds, SplitSpec(0.8, seed=0, stratified=True))

    def test_bad_fraction_rejected(self):
        with pytest.raises(DataError):
            SplitSpec(train_fraction=1.0)


class TestPca:
    def test_degenerate_line(self):
        rng = np.random.default_rng(10)
        t = rng.normal(size=50)
        m = np.column_stack([t, t])
        model = pca_fit(m, 2)
        assert model.explained_variance_ratio[0] == pytest.approx(1.0, abs=1e-12)
        assert model.explained_variance_ratio[1] == pytest.approx(0.0, abs=1e-12)

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(11)
        m = rng.normal(size=(40, 6))
        model = pca_fit(m, 6)
        projected = pca_transform(model, m)
        reconstructed = projected @ model.components + model.mean
        assert np.max(np.abs(reconstructed - m)) < 1e-8

    def test_matches_eigendecomposition_oracle(self):
        rng = np.random.default_rng(12)
        m = rng.normal(size=(50, 8))
        model = pca_fit(m, 8)
        centered = m - m.mean(axis=0)
        cov = centered.T @ centered / (m.shape[0] - 1)
        eigvals = np.linalg.eigh(cov)[0][::-1]
        oracle_ratios = eigvals / eigvals.sum()
        assert np.allclose(model.explained_variance_ratio, oracle_ratios, atol=1e-8)

    def test_components_orthonormal(self):
        rng = np.random.default_rng(13)
        model = pca_fit(rng.normal(size=(30, 5)), 5)
        gram = model.components @ model.components.T
        assert np.allclose(gram, np.eye(5), atol=1e-9)

    def test_train_projection_centered(self):
        rng = np.random.default_rng(14)
        m = rng.normal(size=(60, 4)) + 3.0
        model = pca_fit(m, 3)
        projected = pca_transform(model, m)
        assert np.max(np.abs(projected.mean(axis=0))) < 1e-9

    def test_ratios_sorted_descending_and_bounded(self):
        rng = np.random.default_rng(15)
        model = pca_fit(rng.normal(size=(25, 7)), 7)
        ratios = model.explained_variance_ratio
        assert np.all(np.diff(ratios) <= 1e-12)
        assert ratios.sum() <= 1.0 + 1e-9

    def test_n_components_validation(self):
        with pytest.raises(ShapeError):
            pca_fit(np.eye(4), 5)


class TestElbow:
    def test_hand_evaluated_chord_rule(self):
        assert elbow_index([0.9, 0.05, 0.03, 0.02]) == 1

    def test_linear_curve_ties_to_zero(self):
        assert elbow_index([0.25, 0.25, 0.25, 0.25]) == 0

    def test_needs_three_components(self):
        with pytest.raises(DataError):
            elbow_index([0.9, 0.1])

    def test_requires_descending(self):
        with pytest.raises(DataError):
            elbow_index([0.1, 0.9, 0.0])


class TestStandardizer:
    def test_zscore_train_columns(self):
        rng = np.random.default_rng(16)
        m = rng.normal(3.0, 2.5, size=(200, 3))
        scaler = Standardizer().fit(m)
        out = scaler.transform(m)
        assert np.allclose(out.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(out.std(axis=0), 1.0, atol=1e-12)

    def test_constant_column_flagged(self):
        m = np.column_stack([np.ones(10), np.arange(10.0)])
        scaler = Standardizer().fit(m)
        assert scaler.constant_columns[0]
        out = scaler.transform(m)
        assert np.array_equal(out[:, 0], np.zeros(10))
