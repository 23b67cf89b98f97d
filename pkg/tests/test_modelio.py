import numpy as np
import pytest

from marginkernel.dataset import gen_sphere_checkerboard, gen_windmill
from marginkernel.errors import ConfigError
from marginkernel.game import boost
from marginkernel.langevin import LangevinParams
from marginkernel.modelio import dump_model, load_model, parse_model, save_model
from marginkernel.svm import train_linear_svm


@pytest.fixture(scope="module")
def windmill_fit():
    data = gen_windmill(120, seed=5)
    kernel, features = boost(data, T=12, params=LangevinParams(chains=30, tau=20, top_k=3))
    return data, kernel, train_linear_svm(features, data.labels)


def test_roundtrip_translation(windmill_fit, tmp_path):
    data, kernel, model = windmill_fit
    path = tmp_path / "m.txt"
    save_model(path, kernel, model, {"T": 12})
    k2, m2, config = load_model(path)
    assert np.array_equal(k2.modes, kernel.modes)
    assert np.array_equal(k2.counts, kernel.counts)
    assert np.array_equal(k2.alpha, kernel.alpha)
    assert k2.C == kernel.C and k2.geometry is kernel.geometry
    assert np.array_equal(m2.weights, model.weights) and m2.bias == model.bias
    assert config == {"T": "12"}
    # reloaded kernel reproduces the features bit for bit
    assert np.array_equal(k2.transform(data.points), kernel.transform(data.points))


def test_roundtrip_sphere():
    data = gen_sphere_checkerboard(150, seed=2)
    kernel, _ = boost(data, T=15, ell_max=12)
    k2, model, _ = parse_model(dump_model(kernel))
    assert model is None
    assert np.array_equal(k2.modes, kernel.modes)
    assert np.array_equal(k2.counts, kernel.counts)
    assert np.array_equal(k2.transform(data.points), kernel.transform(data.points))


def test_dump_is_stable(windmill_fit):
    _, kernel, model = windmill_fit
    assert dump_model(kernel, model) == dump_model(parse_model(dump_model(kernel, model))[0], model)


@pytest.mark.parametrize(
    "text",
    [
        "[meta]\nformat=1\n",
        "stray line\n[meta]\n",
        "[meta]\nformat=99\ngeometry=euclidean\nC=1\nrounds=1\n[measure]\nweight,omega_1\n1,0.5\n[alpha]\n1\n",
    ],
)
def test_malformed(text):
    with pytest.raises(ConfigError):
        parse_model(text)
