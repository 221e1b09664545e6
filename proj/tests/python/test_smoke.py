import json
import math

import pytest

import hamlb


def test_wht_round_trip():
    values = [1.0, -2.0, 0.5, 3.0, 0.0, 1.0, -1.0, 2.0]
    coeffs = hamlb.wht_forward(3, values)
    assert coeffs[0] == pytest.approx(sum(values) / 8)
    assert hamlb.wht_inverse(3, coeffs) == pytest.approx(values)


def test_hard_function_certificate():
    f = hamlb.sample_hard_function(12, 0.1, seed=3)
    amp = 2 ** (0.4 * 12)
    assert all(abs(v) == amp for v in f["table"])
    assert max(abs(c) for c in f["fourier"]) <= 1.0


def test_worst_instance_distances():
    inst = hamlb.build_worst_instance(8, 0.1, 1.0, seed=2)
    assert inst.alpha_max_abs() <= 1.0
    assert hamlb.distance_bound(inst) == pytest.approx(2 ** (-0.4 * 8))
    for t in [0.01, 0.3, 2.0]:
        d = hamlb.exact_block_distance(inst, t)
        assert d <= min(t, 2.0) + 1e-12
        assert d == pytest.approx(hamlb.dense_block_distance(inst, t), abs=1e-9)
    zero = hamlb.build_worst_instance(8, 0.1, 0.0, seed=2)
    assert hamlb.sup_distance(zero, max_j=10)["sup"] == 0.0


def test_identities():
    assert hamlb.z_count(6, 3, 2, 1) == "6"
    assert hamlb.verify_complex_identity(10, 3, 2, 1)["pass"]
    r0 = hamlb.verify_complex_identity(6, 3, 2, 0)
    assert (r0["lhs"], r0["rhs"], r0["pass"]) == ("8", "1", False)


def test_local_instance_and_goodness():
    inst = hamlb.sample_local_instance(8, 3, 2, seed=1)
    assert inst.num_terms == 56
    assert inst.sigma2 == pytest.approx(1 / (30 * math.log(8)))
    good = hamlb.goodness_check(inst)
    assert good["num_spikes"] == 28
    assert 0.0 <= good["max_fraction"] <= 1.0
    min_eig, floor, ok = hamlb.covariance_min_eigenvalue(12, 3, 2, 20, 5)
    assert ok and min_eig >= floor - 1e-6


def test_games():
    inst = hamlb.build_worst_instance(6, 0.1, 0.5, seed=1)
    tr = hamlb.worst_case_game(inst, 5, seed=4)
    assert tr["hybrid_chain_holds"] and tr["domination_holds"] and tr["norms_hold"]
    assert tr["total_dist"] <= tr["sum_delta"] + 1e-9
    assert tr["helstrom"] <= tr["euclidean_half"] + 1e-12
    local = hamlb.sample_local_instance(6, 3, 2, seed=1)
    assert hamlb.local_game(local, 3, seed=2)["hybrid_chain_holds"]


def test_linalg_kernels():
    import numpy as np

    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    a = a + a.conj().T
    values, vectors = hamlb.eig_hermitian(a)
    assert np.allclose(values, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(a @ vectors, vectors * values, atol=1e-10)
    u = hamlb.haar_unitary(8, 1)
    assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-12)
    delta = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
    assert hamlb.opnorm_diff_exp([2.0, -1.0], delta, 0.0) == 0.0


def test_errors_and_cli():
    with pytest.raises(ValueError):
        hamlb.build_worst_instance(1)
    code, out, _ = hamlb.run_cli(["worst-instance", "--n", "5", "--grid-max-j", "3"])
    assert code == 0
    assert json.loads(out)["meta"]["tool"] == "hamlb"
    assert hamlb.run_cli(["worst-instance"])[0] == 2
