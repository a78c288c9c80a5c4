import math

import numpy as np
import pytest

from welldesc import KernelSpec, eval_kernel, gram, kernel_row
from welldesc.errors import DimensionMismatch, InvalidConfig, MalformedFile


def test_gaussian_is_one_at_zero_distance():
    spec = KernelSpec(width=2.0)
    x = np.array([0.3, -1.2, 4.0])
    assert eval_kernel(spec, x, x) == 1.0


def test_gaussian_hand_value():
    # squared distance 4, width 2 -> exp(-4/4)
    spec = KernelSpec(width=2.0)
    k = eval_kernel(spec, np.array([0.0, 0.0]), np.array([2.0, 0.0]))
    assert abs(k - math.exp(-1.0)) < 1e-12
    assert k == pytest.approx(0.367879, abs=1e-6)


def test_polynomial_hand_value():
    spec = KernelSpec(family="polynomial", degree=2, offset=0.0)
    k = eval_kernel(spec, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    assert k == 4.0


def test_erbf_hand_value():
    # distance 5, width 2 -> exp(-2.5); and the self-value stays exactly 1
    spec = KernelSpec(family="erbf", width=2.0)
    k = eval_kernel(spec, np.array([0.0, 0.0]), np.array([3.0, 4.0]))
    assert abs(k - math.exp(-2.5)) < 1e-12
    assert eval_kernel(spec, np.array([7.0]), np.array([7.0])) == 1.0


def test_dimension_mismatch_rejected():
    spec = KernelSpec()
    with pytest.raises(DimensionMismatch):
        eval_kernel(spec, np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))


def test_bounds_and_symmetry():
    rng = np.random.default_rng(5)
    specs = [KernelSpec(width=0.7), KernelSpec(family="erbf", width=1.3),
             KernelSpec(family="polynomial", degree=3, offset=1.0)]
    for _ in range(50):
        x = rng.normal(size=4)
        y = rng.normal(size=4)
        for spec in specs:
            a = eval_kernel(spec, x, y)
            b = eval_kernel(spec, y, x)
            assert a == b
            if spec.family != "polynomial":
                assert 0.0 < a <= 1.0


def test_width_must_be_positive():
    with pytest.raises(InvalidConfig):
        KernelSpec(width=0.0)
    with pytest.raises(InvalidConfig):
        KernelSpec(width=-1.5)


def test_polynomial_parameter_ranges():
    with pytest.raises(InvalidConfig):
        KernelSpec(family="polynomial", degree=1)
    with pytest.raises(InvalidConfig):
        KernelSpec(family="polynomial", degree=11)
    with pytest.raises(InvalidConfig):
        KernelSpec(family="polynomial", offset=-0.1)
    KernelSpec(family="polynomial", degree=2, offset=0.0)
    KernelSpec(family="polynomial", degree=10)


def test_unknown_family_rejected():
    with pytest.raises(InvalidConfig):
        KernelSpec(family="sigmoid")


def test_gram_single_point_gaussian():
    G = gram(KernelSpec(width=1.0), np.array([[2.0, 3.0]]))
    assert G.shape == (1, 1)
    assert G[0, 0] == 1.0


def test_gram_duplicated_rows_all_ones():
    X = np.tile(np.array([0.5, -0.5, 2.0]), (4, 1))
    G = gram(KernelSpec(width=2.0), X)
    assert np.array_equal(G, np.ones((4, 4)))


def test_gram_matches_eval_kernel_entrywise():
    """Every Gram entry must equal the scalar kernel, not just approximately."""
    rng = np.random.default_rng(11)
    X = rng.normal(size=(5, 3))
    for spec in (KernelSpec(width=1.7), KernelSpec(family="erbf", width=0.9),
                 KernelSpec(family="polynomial", degree=4, offset=0.5)):
        G = gram(spec, X)
        for i in range(5):
            for j in range(5):
                assert G[i, j] == eval_kernel(spec, X[i], X[j])


def test_gram_exactly_symmetric():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(8, 4))
    G = gram(KernelSpec(width=1.1), X)
    assert np.array_equal(G, G.T)


def test_gram_positive_semidefinite():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(2, 31))
        d = int(rng.integers(1, 6))
        X = rng.normal(size=(n, d))
        G = gram(KernelSpec(width=float(rng.uniform(0.5, 3.0))), X)
        assert np.linalg.eigvalsh(G)[0] >= -1e-8


def test_gram_permutation_consistency():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(7, 3))
    perm = rng.permutation(7)
    spec = KernelSpec(width=1.4)
    G = gram(spec, X)
    Gp = gram(spec, X[perm])
    assert np.array_equal(Gp, G[np.ix_(perm, perm)])


def test_kernel_row_matches_eval():
    rng = np.random.default_rng(15)
    X = rng.normal(size=(6, 2))
    q = rng.normal(size=2)
    spec = KernelSpec(width=2.0)
    row = kernel_row(spec, q, X)
    for i in range(6):
        assert row[i] == eval_kernel(spec, q, X[i])


def test_describe_parse_round_trip():
    for spec in (KernelSpec(width=2.0),
                 KernelSpec(family="erbf", width=0.25),
                 KernelSpec(family="polynomial", degree=5, offset=1.5)):
        assert KernelSpec.parse(spec.describe()) == spec


def test_describe_format_is_stable():
    assert KernelSpec(width=2.0).describe() == "kernel=gaussian width=2.0"
    assert (KernelSpec(family="polynomial", degree=3, offset=1.0).describe()
            == "kernel=polynomial degree=3 offset=1.0")


def test_parse_rejects_garbage():
    with pytest.raises(InvalidConfig):
        KernelSpec.parse("kernel=unknown width=1.0")
    with pytest.raises(MalformedFile):
        KernelSpec.parse("no equals signs here")
