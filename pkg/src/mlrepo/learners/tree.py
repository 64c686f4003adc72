"""Gain-ratio decision tree with optional pessimistic error pruning.

Splits follow C4.5: gain-ratio selection among candidates whose gain is at
least the mean positive gain, numeric splits at the gain-optimal midpoint,
nominal splits one branch per observed category, and a minimum of 2
training instances per leaf.  Instances whose split value is missing are
routed to the largest branch.  Pruning replaces a subtree by a leaf when
the leaf's pessimistic error estimate (upper binomial confidence bound,
CF 0.25) does not exceed the subtree's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.special import betaincinv

from ..model import CellValue, Dataset
from .splits import (Split, best_split_of_attribute, class_histogram,
                     majority_class)

_EPS = 1e-12
MIN_LEAF = 2
CONFIDENCE = 0.25


@dataclass
class TreeNode:
    depth: int
    class_counts: list[int]
    covered: tuple[int, ...]
    # internal-node fields
    attribute: int | None = None
    threshold: float | None = None
    categories: tuple[int, ...] | None = None
    children: list["TreeNode"] = field(default_factory=list)
    majority_branch: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def label(self) -> int:
        return majority_class(self.class_counts)

    @property
    def size(self) -> int:
        return sum(self.class_counts)

    @property
    def errors(self) -> int:
        return self.size - self.class_counts[self.label]

    def route(self, value: CellValue) -> "TreeNode":
        if value is None:
            return self.children[self.majority_branch]
        if self.threshold is not None:
            return self.children[0 if value <= self.threshold else 1]
        try:
            return self.children[self.categories.index(int(value))]
        except ValueError:
            return self.children[self.majority_branch]


@dataclass
class TreeModel:
    root: TreeNode
    pruned: bool
    n_training: int
    #: covering leaf per training row index
    leaf_of: dict[int, TreeNode]

    def leaves(self) -> list[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def classify(self, row) -> int:
        return self._leaf_for(row).label

    def depth_of(self, row) -> int:
        return self._leaf_for(row).depth

    def _leaf_for(self, row) -> TreeNode:
        node = self.root
        while not node.is_leaf:
            node = node.route(row[node.attribute])
        return node

    def max_depth(self) -> int:
        return max(leaf.depth for leaf in self.leaves())


def _choose_split(dataset: Dataset, rows) -> Split | None:
    candidates = []
    for attribute in dataset.non_class_indices:
        split = best_split_of_attribute(dataset, rows, attribute, MIN_LEAF)
        if split is not None and split.gain > _EPS:
            candidates.append(split)
    if not candidates:
        return None
    mean_gain = sum(s.gain for s in candidates) / len(candidates)
    eligible = [s for s in candidates if s.gain >= mean_gain - _EPS]
    return max(eligible,
               key=lambda s: (s.gain_ratio, -s.attribute,
                              -(s.threshold or 0.0)))


def _grow(dataset: Dataset, rows, depth: int) -> TreeNode:
    counts = class_histogram(dataset, rows)
    node = TreeNode(depth, counts, tuple(rows))
    if counts[majority_class(counts)] == len(rows):
        return node
    split = _choose_split(dataset, rows)
    if split is None:
        return node
    branches = [list(b) for b in split.branches]
    sizes = [len(b) for b in branches]
    largest = sizes.index(max(sizes))
    branches[largest].extend(split.unrouted)
    node.attribute = split.attribute
    node.threshold = split.threshold
    node.categories = split.categories
    node.majority_branch = largest
    node.children = [_grow(dataset, sorted(b), depth + 1) for b in branches]
    return node


def pessimistic_errors(errors: int, n: int, cf: float = CONFIDENCE) -> float:
    """Predicted error count at a leaf: n times the upper confidence bound
    of the observed binomial error rate."""
    if n == 0:
        return 0.0
    if errors >= n:
        return float(n)
    if errors == 0:
        return n * (1.0 - math.pow(cf, 1.0 / n))
    return n * (1.0 - float(betaincinv(n - errors, errors + 1, cf)))


def _subtree_estimate(node: TreeNode) -> float:
    if node.is_leaf:
        return pessimistic_errors(node.errors, node.size)
    return sum(_subtree_estimate(child) for child in node.children)


def _prune(node: TreeNode) -> None:
    if node.is_leaf:
        return
    for child in node.children:
        _prune(child)
    as_leaf = pessimistic_errors(node.errors, node.size)
    if as_leaf <= _subtree_estimate(node) + _EPS:
        node.children = []
        node.attribute = None
        node.threshold = None
        node.categories = None


def train_tree(dataset: Dataset, pruned: bool = False,
               rows=None) -> TreeModel:
    """Induce a decision tree on the given rows (default: all instances)."""
    rows = list(range(dataset.n_instances)) if rows is None else list(rows)
    root = _grow(dataset, rows, 0)
    if pruned:
        _prune(root)
    leaf_of: dict[int, TreeNode] = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            for i in node.covered:
                leaf_of[i] = node
        else:
            stack.extend(node.children)
    return TreeModel(root, pruned, len(rows), leaf_of)
