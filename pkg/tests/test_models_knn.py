import numpy as np
import pytest

from gazelab.errors import ValidationError
from gazelab.models import Dataset, ModelConfig, predict, train
from gazelab.models.knn import neighbours


@pytest.fixture
def cloud():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(50, 4))
    return Dataset.synthetic(X, rng.normal(size=50) * 10 + 200)


def test_k1_memorizes(cloud):
    model = train(cloud, ModelConfig("knn", k=1))
    np.testing.assert_array_equal(predict(model, cloud.X), cloud.y)


def test_all_rows_gives_global_mean(cloud):
    model = train(cloud, ModelConfig("knn", k=len(cloud)))
    queries = np.random.default_rng(1).normal(size=(7, 4)) * 3
    np.testing.assert_allclose(predict(model, queries), cloud.y.mean(), atol=1e-12)


def test_colinear_midpoint():
    data = Dataset.synthetic([[0.0], [1.0], [3.0]], [10.0, 20.0, 40.0])
    model = train(data, ModelConfig("knn", k=2))
    assert predict(model, [0.5]) == pytest.approx(15.0)
    assert predict(model, [2.5]) == pytest.approx(30.0)


def test_ties_go_to_lower_row():
    data = Dataset.synthetic([[0.0], [2.0], [4.0]], [1.0, 2.0, 3.0])
    model = train(data, ModelConfig("knn", k=1))
    assert neighbours(model, [[1.0], [3.0]]).ravel().tolist() == [0, 1]
    assert predict(model, [3.0]) == 2.0


def test_column_scaling_is_irrelevant(cloud):
    queries = np.random.default_rng(2).normal(size=(20, 4))
    base = predict(train(cloud, ModelConfig("knn", k=5)), queries)
    scale = np.array([1000.0, 1, 1, 1])
    scaled = Dataset.synthetic(cloud.X * scale, cloud.y)
    np.testing.assert_allclose(
        predict(train(scaled, ModelConfig("knn", k=5)), queries * scale), base, atol=1e-12
    )


def test_chunking_matches_single_pass(cloud, monkeypatch):
    import gazelab.models.knn as knn

    model = train(cloud, ModelConfig("knn", k=3))
    queries = np.random.default_rng(3).normal(size=(33, 4))
    whole = predict(model, queries)
    monkeypatch.setattr(knn, "_CHUNK_ELEMENTS", 1)
    np.testing.assert_array_equal(predict(model, queries), whole)


def test_k_larger_than_rows(cloud):
    with pytest.raises(ValidationError, match="exceeds"):
        train(cloud, ModelConfig("knn", k=51))


@pytest.mark.parametrize("bad", [{"k": 0}, {"distance": "manhattan"}])
def test_bad_config(bad):
    with pytest.raises(ValidationError):
        ModelConfig("knn", **bad)
