import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gaussrd import GaussianRateDistortion
from gaussrd.exceptions import DomainError
from gaussrd.ratedist import rate_distortion
from gaussrd.symcore import bosonic_entropy


@pytest.fixture
def source():
    return np.array([[2.0, 0.3], [0.3, 1.6]])


def test_fit_sets_attributes(source):
    est = GaussianRateDistortion().fit(source)
    assert est.gamma_s_ == pytest.approx(np.sqrt(np.linalg.det(source)))
    assert est.n_s_ == pytest.approx((est.gamma_s_ - 1) / 2)
    assert est.omega_ >= 2.0
    assert est.M_star_.shape == (2, 2)
    assert est.summary is est.source_


def test_predict_matches_function(source):
    est = GaussianRateDistortion().fit(source)
    grid = np.linspace(0, 2, 9)
    expected = [rate_distortion(source, v).r_i for v in grid]
    np.testing.assert_allclose(est.predict(grid), expected, atol=1e-12)
    assert est.predict([0.0])[0] == pytest.approx(bosonic_entropy(est.n_s_))


def test_transform_table(source):
    table = GaussianRateDistortion().fit(source).transform(np.array([[0.0], [0.5], [1.0]]))
    assert table.shape == (3, 7)
    np.testing.assert_allclose(table[:, 0], [0.0, 0.5, 1.0])
    np.testing.assert_allclose(table[:, 2], table[:, 0] ** 2)


def test_nats(source):
    bits = GaussianRateDistortion().fit(source).predict([0.2])
    nats = GaussianRateDistortion(base="nats").fit(source).predict([0.2])
    assert nats[0] == pytest.approx(bits[0] * np.log(2))


def test_params_and_clone():
    est = GaussianRateDistortion(base="nats")
    assert est.get_params() == {"base": "nats"}
    c = clone(est)
    assert c.base == "nats" and not hasattr(c, "source_")


def test_not_fitted():
    with pytest.raises(NotFittedError):
        GaussianRateDistortion().predict([0.1])


@pytest.mark.parametrize("bad", [0.5 * np.eye(2), np.eye(4), [[1.0, 2.0], [0.0, 1.0]], [[np.nan, 0], [0, 1]]])
def test_rejects_bad_cm(bad):
    with pytest.raises((DomainError, ValueError)):
        GaussianRateDistortion().fit(bad)


def test_rejects_negative_distortion(source):
    with pytest.raises((DomainError, ValueError)):
        GaussianRateDistortion().fit(source).predict([-0.1])


def test_clipping_point(source):
    est = GaussianRateDistortion().fit(source)
    z = est.clipping_point()
    assert est.predict([z * 1.001])[0] == 0.0
    assert est.predict([z * 0.999])[0] > 0.0
    assert GaussianRateDistortion().fit(np.diag([2.0, 0.5])).clipping_point() is None
