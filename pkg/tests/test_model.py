import pytest

from mlrepo.errors import DataError
from mlrepo.model import (AttributeSpec, Dataset, ExperimentKey, FixedSplit,
                          FoldAssignment, KFold, PercentSplit, PredictionSet,
                          aggregate_accuracy, check_kfold_coverage,
                          format_accuracy, parse_partition_key,
                          validate_dataset)

from helpers import one_attribute_dataset


def small_dataset():
    attrs = [AttributeSpec("x"), AttributeSpec("c", ("a", "b"))]
    rows = [[1.0, 0], [2.0, 1], [3.0, 0], [4.0, 1]]
    return Dataset.build("small", attrs, rows)


class TestValidateDataset:
    def test_well_formed(self):
        assert validate_dataset(small_dataset()) == []

    def test_missing_class_label(self):
        ds = Dataset.build("bad", small_dataset().attributes,
                           [[1.0, 0], [2.0, None]])
        violations = validate_dataset(ds)
        assert len(violations) == 1
        assert violations[0].row == 1
        assert "missing class" in violations[0].message

    def test_nominal_index_out_of_range(self):
        ds = Dataset.build("bad", small_dataset().attributes,
                           [[1.0, 0], [2.0, 5]])
        violations = validate_dataset(ds)
        assert len(violations) == 1
        assert violations[0].row == 1
        assert violations[0].attribute == 1

    def test_row_arity(self):
        ds = Dataset("bad", small_dataset().attributes, ((1.0,),), 1)
        assert any("expected 2 values" in v.message
                   for v in validate_dataset(ds))

    def test_duplicate_attribute_names(self):
        attrs = (AttributeSpec("x"), AttributeSpec("x", ("a", "b")))
        ds = Dataset("bad", attrs, ((1.0, 0),), 1)
        assert any("duplicate attribute" in v.message
                   for v in validate_dataset(ds))

    def test_numeric_class_is_flagged(self):
        ds = Dataset("bad", (AttributeSpec("x"), AttributeSpec("y")),
                     ((1.0, 2.0),), 1)
        assert any("not nominal" in v.message for v in validate_dataset(ds))


def kfold_assignment(n, folds, fold_index, toolkit="weka", seed=1):
    roles = [1.0] * n
    per_fold = n // folds
    start = (fold_index - 1) * per_fold
    for i in range(start, start + per_fold):
        roles[i] = None
    return FoldAssignment(toolkit, seed, KFold(folds), fold_index,
                          tuple(roles))


class TestFoldAssignment:
    def test_kfold_key(self):
        assert kfold_assignment(20, 10, 1).key == "weka_1_10_1"

    def test_fixed_split_key(self):
        fa = FoldAssignment("weka", 0, FixedSplit(), 1, (None, 1.0))
        assert fa.key == "weka_0_0_1"

    def test_percent_split_key(self):
        fa = FoldAssignment("weka", 3, PercentSplit(33), 1, (None, 1.0))
        assert fa.key == "weka_3_33_1"

    def test_render_parse_round_trip(self):
        for key, n in (("weka_1_10_4", 20), ("weka_0_0_1", 2),
                       ("builtin_7_10_10", 30)):
            parsed = parse_partition_key(key, n)
            assert parsed.key == key

    def test_percent_split_parse(self):
        parsed = parse_partition_key("weka_3_33_1", 4, percent_split=True)
        assert parsed.scheme == PercentSplit(33)
        assert parsed.key == "weka_3_33_1"

    def test_fold_outside_range_rejected(self):
        with pytest.raises(DataError):
            parse_partition_key("weka_2_1_10", 4)

    def test_weight_out_of_range(self):
        with pytest.raises(DataError):
            FoldAssignment("weka", 1, KFold(2), 1, (1.5, None))

    def test_kfold_coverage(self):
        folds = [kfold_assignment(20, 10, f) for f in range(1, 11)]
        check_kfold_coverage(folds)

    def test_kfold_coverage_violation(self):
        folds = [kfold_assignment(20, 10, f) for f in range(1, 11)]
        folds[3] = folds[2]
        with pytest.raises(DataError, match="coverage"):
            check_kfold_coverage(folds)


class TestExperimentKey:
    def test_label(self):
        key = ExperimentKey("weka", "BP", 1, "-L 0.25")
        assert key.label == "BP_1"
        assert not key.is_default_setting

    def test_defaults_seed(self):
        assert ExperimentKey("weka", "C4.5", -1).label == "C4.5_-1"
        assert ExperimentKey("weka", "C4.5", -1).is_default_setting


def build_ten_fold_run(n=150, wrong=5):
    """150 instances, 3 classes, 10 folds; `wrong` test predictions flipped."""
    labels = [i % 3 for i in range(n)]
    ds = one_attribute_dataset([float(i) for i in range(n)], labels,
                               n_classes=3)
    key = ExperimentKey("weka", "BP", 1, "-L 0.2")
    sets = []
    flipped = 0
    for f in range(1, 11):
        roles = [1.0] * n
        start = (f - 1) * (n // 10)
        test = list(range(start, start + n // 10))
        for i in test:
            roles[i] = None
        fa = FoldAssignment("weka", 1, KFold(10), f, tuple(roles))
        predictions = {}
        for i in test:
            if flipped < wrong:
                predictions[i] = (labels[i] + 1) % 3
                flipped += 1
            else:
                predictions[i] = labels[i]
        sets.append(PredictionSet(key, fa, predictions))
    return ds, sets


class TestAggregateAccuracy:
    def test_all_correct(self):
        ds, sets = build_ten_fold_run(wrong=0)
        assert aggregate_accuracy(sets, ds) == 1.0

    def test_hand_counted_145_of_150(self):
        ds, sets = build_ten_fold_run(n=150, wrong=5)
        assert abs(aggregate_accuracy(sets, ds) - 145 / 150) < 1e-12

    def test_permutation_invariant(self):
        ds, sets = build_ten_fold_run()
        assert (aggregate_accuracy(sets, ds)
                == aggregate_accuracy(list(reversed(sets)), ds))

    def test_empty_input(self):
        ds, _ = build_ten_fold_run()
        with pytest.raises(DataError, match="no predictions to aggregate"):
            aggregate_accuracy([], ds)

    def test_prediction_for_non_test_instance(self):
        ds, sets = build_ten_fold_run()
        bad = PredictionSet(sets[0].experiment, sets[0].partition,
                            {149: 0})   # instance 149 trains in fold 1
        with pytest.raises(DataError, match="prediction/partition mismatch"):
            aggregate_accuracy([bad], ds)

    def test_mixed_experiments_rejected(self):
        ds, sets = build_ten_fold_run()
        other = PredictionSet(ExperimentKey("weka", "BP", 2),
                              sets[1].partition, sets[1].predictions)
        with pytest.raises(DataError, match="mix experiments"):
            aggregate_accuracy([sets[0], other], ds)

    def test_two_decimal_rendering(self):
        assert format_accuracy(0.968) == "96.80"
        assert format_accuracy(145 / 150) == "96.67"
