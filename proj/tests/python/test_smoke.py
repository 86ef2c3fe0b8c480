import pytest

import psmm


def test_thresholds():
    assert psmm.threshold_closed_form(8, 4) == 98
    assert psmm.threshold_closed_form(8, 8) == 134
    assert psmm.bgw_threshold(8, 4) == 448
    assert psmm.struct_threshold(2, 2, 1) == 3
    for k in range(2, 9):
        for t in range(2, 9):
            assert psmm.threshold_closed_form(k, t) < psmm.bgw_threshold(k, t)


def test_support_sets():
    s = psmm.support_sets(2, 2)
    assert s["k1"] == [0, 1, 2, 3]
    assert s["k2"] == [4, 5]
    assert s["k3"] == [4, 6]
    assert s["k4"] == [8]
    assert s["support"] == [0, 1, 2, 3, 4, 5, 6, 8]
    assert psmm.support_sets(8, 4)["size"] == 98


def test_min_agents():
    assert psmm.min_agents(2, 2) == 8
    assert psmm.min_agents(2, 2, dof_s=1) == 5


def test_simulate_dense():
    r = psmm.simulate(m=8, k=2, t=2, seed=7)
    assert r["correct"]
    assert r["n"] == 8
    assert len(r["product"]) == 8
    assert r["upload_bytes_per_agent"] == (2 * 8 * 4 * 31 + 7) // 8


def test_simulate_operator_invariance():
    dense = psmm.simulate(m=16, k=2, t=2, seed=3)
    lifted = psmm.simulate(m=16, k=2, t=2, seed=3, operator="strassen", depth=1)
    assert dense["correct"] and lifted["correct"]
    assert dense["product"] == lifted["product"]
    assert lifted["total_mults"] < dense["total_mults"]


def test_simulate_dof():
    r = psmm.simulate(m=4, k=2, t=2, seed=11, dof_s=1)
    assert r["correct"]
    assert r["n"] == 5
    assert r["dof"]["n_empirical"] == 5
    assert r["dof"]["closed_form_bound"] == 3
    assert r["dof"]["residual_ok"]


def test_simulate_rejects_composite_prime():
    with pytest.raises(ValueError):
        psmm.simulate(m=4, k=2, t=2, prime=10)


def test_privacy_audit():
    r = psmm.privacy_audit(prime=5, m=2, k=2, t=2, coalition=1, seed=1)
    assert r["assignments"] == 625
    assert r["uniform"]
    assert r["independent"]
    assert not r["vacuous"]

    tight = psmm.privacy_audit(prime=5, m=2, k=2, t=2, coalition=2, seed=1)
    assert not tight["independent"]


def test_verify_scheme_file(tmp_path):
    import os

    data = os.environ.get("PSMM_DATA_DIR", "data")
    r = psmm.verify_scheme_file(str(os.path.join(data, "strassen.scheme")), prime=101)
    assert r["ok"]
    assert r["rank"] == 7
    assert r["dims"] == (2, 2, 2)
