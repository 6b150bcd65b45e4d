"""The compiled and pure-Python kernels must agree bit for bit."""

import numpy as np
import pytest

from jumplab import _kernels_py, kernels
from jumplab.model import builtin
from jumplab.noise import LevyMeasure, TimeGrid, realize

compiled = pytest.importorskip("jumplab._kernels")

STABLE = LevyMeasure("stable_positive", 0.1, 10.0, 1.5)
MODELS = [
    ("gbm", {}, None),
    ("affine", {"s0": 0.3, "s1": -0.2, "b0": 1.0, "b1": -0.5}, None),
    ("tanaka_sign", {}, None),
    ("constant_jump", {"c": -0.3}, None),
    ("spectrally_positive", {"g": "clamp:1", "vol": 0.4, "drift": 0.1}, STABLE),
    ("spectrally_positive", {"g": "linear:0.5"}, STABLE),
    ("sqrt_jump", {"g": "clamp:2", "drift": 0.2}, STABLE),
    ("stable_like", {"alpha_lo": 0.4, "alpha_hi": 1.6}, None),
]


def _args(label, params, measure, seed):
    spec = builtin(label, measure=measure, **params)
    nz = realize(TimeGrid.uniform(1.0, 1e-3), spec.measure, seed)
    dt, dw, a, z = nz.increments()
    return spec, (spec.native.kinds, spec.native.param_array, 0.3, dt, dw, a, z)


@pytest.mark.parametrize("label,params,measure", MODELS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_euler_backends_bitwise(label, params, measure, seed):
    spec, args = _args(label, params, measure, seed)
    for guard, thr in ((1e6, np.inf), (1e6, 0.5), (1.0, np.inf)):
        c = compiled.euler_native(*args, guard, thr)
        p = _kernels_py.euler_native(*args, guard, thr)
        assert c[3] == p[3]
        for a, b in zip(c[:3], p[:3]):
            assert np.asarray(a).tobytes() == np.asarray(b).tobytes()


@pytest.mark.parametrize("label,params,measure", MODELS)
def test_tanaka_terms_backends_bitwise(label, params, measure):
    spec, args = _args(label, params, measure, 7)
    v, pre, d, _ = compiled.euler_native(*args, 1e6, np.inf)
    is_atom = np.concatenate([[0], args[5]]).astype(np.uint8)
    for level in (0.0, 0.3, -0.1, float(v[len(v) // 2])):
        assert compiled.tanaka_terms(v, pre, d, is_atom, level) == _kernels_py.tanaka_terms(v, pre, d, is_atom, level)


def test_selected_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")
    assert "python" in kernels.backends()
