"""Built-in learners: distance metric, nearest neighbors, linear separator,
Fisher discriminant, decision stumps, gain-ratio tree, and class-conditional
densities."""

from .bayes import ClassConditionalModel, fit_class_conditionals
from .crossval import cross_val_accuracy, cross_val_predictions, stratified_folds
from .distance import (distances_to, knn_predict, loo_1nn_error,
                       nearest_neighbor_indices, pairwise_distances)
from .encoding import (DistanceEncoding, FeatureEncoding, distance_encoding,
                       feature_encoding)
from .lda import LdaModel, fit_lda, train_lda
from .linear import (LinearConfig, LinearModel, linear_error_distance,
                     one_vs_rest_predict, train_linear, training_error)
from .splits import information_gain
from .stump import StumpMode, StumpModel, StumpResult, fit_stump, train_stump
from .tree import TreeModel, TreeNode, train_tree

__all__ = [
    "ClassConditionalModel", "DistanceEncoding", "FeatureEncoding",
    "LdaModel", "LinearConfig", "LinearModel", "StumpMode", "StumpModel",
    "StumpResult", "TreeModel", "TreeNode", "cross_val_accuracy",
    "cross_val_predictions", "distance_encoding", "distances_to",
    "feature_encoding", "fit_class_conditionals", "fit_lda", "fit_stump",
    "information_gain", "knn_predict", "linear_error_distance",
    "loo_1nn_error", "nearest_neighbor_indices", "one_vs_rest_predict",
    "pairwise_distances", "stratified_folds", "train_lda", "train_linear",
    "train_stump", "train_tree", "training_error",
]
