import numpy as np
import pytest

from trustboost import (
    ClampConfig,
    DomainError,
    InfeasibleRadiusError,
    Leaf,
    LossKind,
    Split,
    TreeConfig,
    fit_tree,
    grad_quad,
    leaf_objective,
    leaf_value,
    predict_tree,
    predict_tree_batch,
    split_gain,
)
from trustboost.tree import scale_leaf_values, tree_from_dict, tree_to_dict


def leaves(node):
    if isinstance(node, Leaf):
        return [node]
    return leaves(node.left) + leaves(node.right)


def test_leaf_value_examples():
    assert leaf_value(0.0, 3.0, 0.1, 7, 2.0) == 0.0
    assert leaf_value(10.0, 5.0, 0.1, 10, 10.0) == pytest.approx(-0.625, abs=1e-15)
    assert leaf_value(4.0, 0.0, 0.0, 9, 2.0) == pytest.approx(-2.0, abs=1e-15)
    with pytest.raises(InfeasibleRadiusError):
        leaf_value(1.0, -5.0, 0.1, 2, 1.0)


def test_leaf_objective_examples():
    assert leaf_objective(10.0, 5.0, 0.0) == 0.0
    assert leaf_objective(10.0, 5.0, -0.625) == pytest.approx(-5.2734375, abs=1e-12)
    assert leaf_objective(-2.0, 2.0, 1.0) == pytest.approx(-1.0, abs=1e-15)


def test_split_gain_zero_and_separation():
    assert split_gain(0.0, 1.0, 3, 0.0, 1.0, 4, 0.1, 1.0) == 0.0
    # opposite-sign children cancel in the parent, so separating them pays off
    assert split_gain(-5.0, 2.0, 5, 5.0, 2.0, 5, 0.0, 0.0) > 0.0


def test_split_gain_symmetry_and_composition_oracle():
    rng = np.random.default_rng(4)
    for _ in range(50):
        gl, gr = rng.normal(size=2) * 3
        bl, br = np.abs(rng.normal(size=2)) * 2
        nl, nr = rng.integers(1, 20, size=2)
        alpha, beta = rng.uniform(0, 1), rng.uniform(0.1, 5)
        gain = split_gain(gl, bl, int(nl), gr, br, int(nr), alpha, beta)
        assert gain == split_gain(gr, br, int(nr), gl, bl, int(nl), alpha, beta)

        def opt(g, b, n):
            c = leaf_value(g, b, alpha, n, beta)
            return leaf_objective(g, b, c)

        oracle = opt(gl + gr, bl + br, int(nl + nr)) - opt(gl, bl, int(nl)) - opt(gr, br, int(nr))
        assert gain == pytest.approx(oracle, abs=1e-12)


def test_fit_single_instance():
    tree = fit_tree(np.array([[1.0]]), [2.0], [2.0], 0.5, 1.5, TreeConfig())
    assert isinstance(tree, Leaf)
    assert tree.value == pytest.approx(-2.0 / (2.0 + 0.5 + 1.5), abs=1e-15)
    assert tree.count == 1


def test_fit_two_instances_split():
    X = np.array([[0.0], [1.0]])
    tree = fit_tree(X, [-2.0, 2.0], [2.0, 2.0], 0.0, 0.0, TreeConfig(max_depth=2))
    assert isinstance(tree, Split)
    assert tree.feature == 0 and tree.threshold == 0.5
    assert predict_tree(tree, [0.4]) == pytest.approx(1.0)
    assert predict_tree(tree, [0.6]) == pytest.approx(-1.0)


def test_fit_zero_gradients_single_leaf():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    tree = fit_tree(X, np.zeros(40), np.full(40, 2.0), 0.1, 10.0, TreeConfig(max_depth=6))
    assert isinstance(tree, Leaf)
    assert tree.value == 0.0


def test_fit_empty_and_bad_shapes():
    with pytest.raises(DomainError):
        fit_tree(np.zeros((0, 2)), [], [], 0.1, 1.0, TreeConfig())
    with pytest.raises(DomainError):
        fit_tree(np.zeros((3, 2)), [1.0, 2.0], [1.0, 2.0, 3.0], 0.1, 1.0, TreeConfig())


def test_fitted_leaves_never_increase_local_objective():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(100, 4))
    g = rng.normal(size=100)
    b = np.abs(rng.normal(size=100)) + 0.1
    tree = fit_tree(X, g, b, 0.1, 1.0, TreeConfig(max_depth=4))
    for leaf in leaves(tree):
        assert leaf_objective(leaf.g_sum, leaf.b_sum, leaf.value) <= 0.0


def test_min_samples_leaf_respected():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(60, 3))
    g = rng.normal(size=60)
    b = np.full(60, 2.0)
    tree = fit_tree(X, g, b, 0.0, 1.0, TreeConfig(max_depth=8, min_samples_leaf=7))
    assert all(leaf.count >= 7 for leaf in leaves(tree))


def test_newton_style_leaf_values():
    # alpha=0, beta=lam reproduces -G/(B+lam) at every leaf
    rng = np.random.default_rng(10)
    X = rng.normal(size=(50, 2))
    g = rng.normal(size=50)
    b = np.abs(rng.normal(size=50)) + 0.5
    lam = 0.7
    tree = fit_tree(X, g, b, 0.0, lam, TreeConfig(max_depth=3))
    for leaf in leaves(tree):
        assert leaf.value == pytest.approx(-leaf.g_sum / (leaf.b_sum + lam), abs=1e-15)


def test_first_order_zeroes_quads():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(30, 2))
    g = rng.normal(size=30)
    b = np.full(30, 2.0)
    tree = fit_tree(X, g, b, 0.1, 5.0, TreeConfig(max_depth=3, first_order=True))
    for leaf in leaves(tree):
        assert leaf.b_sum == 0.0
        assert leaf.value == pytest.approx(-leaf.g_sum / (0.1 * leaf.count + 5.0), abs=1e-15)


def test_logistic_leaf_bound():
    clamp = ClampConfig(rho=1e-4)
    rng = np.random.default_rng(13)
    X = rng.normal(size=(200, 3))
    y = (rng.random(200) < 0.5).astype(float)
    raw = rng.normal(size=200) * 8.0
    g, b = grad_quad(LossKind.logistic(), y, raw, clamp)
    tree = fit_tree(X, g, b, 0.1, 10.0, TreeConfig(max_depth=5))
    bound = 1.0 / (2.0 * clamp.rho)
    assert all(abs(leaf.value) <= bound + 1e-9 for leaf in leaves(tree))


def test_fit_deterministic():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(80, 4))
    g = rng.normal(size=80)
    b = np.abs(rng.normal(size=80)) + 0.2
    t1 = fit_tree(X, g, b, 0.1, 1.0, TreeConfig(max_depth=5))
    t2 = fit_tree(X, g, b, 0.1, 1.0, TreeConfig(max_depth=5))
    assert tree_to_dict(t1) == tree_to_dict(t2)


def test_tie_break_prefers_lowest_feature_and_threshold():
    # duplicated feature columns give identical gains; feature 0 must win
    X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    g = np.array([-2.0, -2.0, 2.0, 2.0])
    b = np.full(4, 2.0)
    tree = fit_tree(X, g, b, 0.0, 0.0, TreeConfig(max_depth=1))
    assert isinstance(tree, Split)
    assert tree.feature == 0
    # symmetric gradients make the 0.5 and 2.5 cuts equal-gain; lowest wins
    X2 = np.array([[0.0], [1.0], [2.0], [3.0]])
    g2 = np.array([-2.0, 2.0, -2.0, 2.0])
    tree2 = fit_tree(X2, g2, b, 0.0, 0.0, TreeConfig(max_depth=1))
    assert isinstance(tree2, Split)
    assert tree2.threshold == 0.5


def test_predict_routing_and_errors():
    leaf = Leaf(value=3.0, count=1, g_sum=0.0, b_sum=0.0)
    assert predict_tree(leaf, [1.0, 2.0]) == 3.0
    split = Split(feature=1, threshold=0.0, left=Leaf(1.0, 1, 0, 0), right=Leaf(2.0, 1, 0, 0))
    with pytest.raises(DomainError):
        predict_tree(split, [1.0])
    with pytest.raises(DomainError):
        predict_tree_batch(split, np.zeros((3, 1)))


def test_batch_predict_matches_rowwise():
    rng = np.random.default_rng(15)
    X = rng.normal(size=(60, 3))
    g = rng.normal(size=60)
    b = np.full(60, 2.0)
    tree = fit_tree(X, g, b, 0.1, 1.0, TreeConfig(max_depth=4))
    batch = predict_tree_batch(tree, X)
    rows = np.array([predict_tree(tree, row) for row in X])
    np.testing.assert_array_equal(batch, rows)


def test_serialization_round_trip_bit_exact():
    rng = np.random.default_rng(16)
    X = rng.normal(size=(70, 3))
    g = rng.normal(size=70)
    b = np.abs(rng.normal(size=70)) + 0.1
    tree = fit_tree(X, g, b, 0.1, 1.0, TreeConfig(max_depth=5))
    clone = tree_from_dict(tree_to_dict(tree))
    np.testing.assert_array_equal(predict_tree_batch(tree, X), predict_tree_batch(clone, X))


def test_scale_leaf_values():
    tree = Split(0, 0.5, Leaf(2.0, 1, -4.0, 2.0), Leaf(-1.0, 1, 2.0, 2.0))
    scaled = scale_leaf_values(tree, 0.5)
    assert predict_tree(scaled, [0.0]) == 1.0
    assert predict_tree(scaled, [1.0]) == -0.5
