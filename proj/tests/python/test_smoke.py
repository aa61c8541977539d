import math

import pytest

import resbench


def test_generate_is_reproducible():
    u1, y1 = resbench.generate("narma10", 500, 7)
    u2, y2 = resbench.generate("narma10", 500, 7)
    assert u1 == u2 and y1 == y2
    assert len(u1) == len(y1) == 500
    assert all(0.0 <= x <= 0.5 for x in u1)


def test_metric_identities():
    y = [0.1, 0.4, 0.35, 0.8]
    t = [0.2, 0.3, 0.5, 0.7]
    mse = sum((a - b) ** 2 for a, b in zip(y, t)) / len(y)
    mean = sum(t) / len(t)
    std = math.sqrt(sum((x - mean) ** 2 for x in t) / len(t))
    assert resbench.rnmse(y, t) * std == pytest.approx(math.sqrt(mse), rel=1e-12)
    assert resbench.nrmse(y, t) * (max(t) - min(t)) == pytest.approx(math.sqrt(mse), rel=1e-12)


def test_constant_target_is_undefined():
    with pytest.raises(resbench.UndefinedMetric):
        resbench.rnmse([1.0, 2.0], [3.0, 3.0])


def test_least_squares_identity():
    import numpy as np

    w = resbench.solve_least_squares(np.eye(3), np.array([[1.0], [2.0], [3.0]]))
    assert np.allclose(w.ravel(), [1.0, 2.0, 3.0])


def test_power_law_recovery():
    n = [10, 20, 50, 100, 150, 200, 300, 400, 500, 700, 1000]
    s = [0.306 * x ** -0.2609 - 0.02537 for x in n]
    fit = resbench.fit_power_law(n, s)
    assert fit["a"] == pytest.approx(0.306, rel=1e-6)
    assert fit["b"] == pytest.approx(-0.2609, rel=1e-6)
    assert fit["c"] == pytest.approx(-0.02537, rel=1e-6)


def test_delay_line_protocol_runs():
    r = resbench.run_protocol("dl", 10, task="narma10", n_series=1)
    mean, std, runs = r["rnmse_train"]
    assert runs == 1 and std == 0.0
    assert 0.3 < mean < 0.9


def test_functional_compare_flags_unreachable():
    out = resbench.functional_compare([(100, 0.01)], [(10, 0.5), (20, 0.4)])
    assert out[0][2] == "unreachable" and out[0][1] is None
