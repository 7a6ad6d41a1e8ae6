import numpy as np
import pytest

from conftest import TABLE1
from corrlog import experiments as ex


def test_trial_rng_is_keyed_not_sequential():
    a = ex.trial_rng(0, 5, 1).standard_normal(3)
    b = ex.trial_rng(0, 5, 1).standard_normal(3)
    c = ex.trial_rng(0, 5, 2).standard_normal(3)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    x = ex.half_normal_start(ex.trial_rng(1, 4), 1000)
    assert np.all(x <= 0)
    # E|Z| = scale * sqrt(2 / pi)
    assert -x.mean() == pytest.approx(10 * np.sqrt(2 / np.pi), rel=0.1)


def test_table1_values():
    t = ex.table1()
    for rho, blocks in TABLE1.items():
        for name, M in blocks.items():
            np.testing.assert_allclose(t[rho][name], M, atol=1e-3)


def test_table1_csv_parses_back_to_reference_table():
    text = ex.table1_csv()
    lines = text.splitlines()
    assert lines[0] == "rho,quantity,row,col,exponent,value"
    assert len(lines) == 1 + 4 * 4 * 6
    parsed = ex.parse_table1_csv(text)
    for rho, blocks in TABLE1.items():
        for name, M in blocks.items():
            np.testing.assert_allclose(parsed[rho][name], M, atol=1e-3, err_msg=f"{rho} {name}")
    assert "0.99,avar_rho,2,2,-1,0.016" in lines
    assert "0.5,avar_gamma,2,1,0,0.018" in lines
    assert "-0.000" not in text


def test_fig1_small_run():
    rows = ex.fig1(range(3, 9), rhos=(0.5, 0.99), trials=10, seed=3)
    assert [(r.n, r.rho) for r in rows] == [(n, rho) for n in range(3, 9) for rho in (0.5, 0.99)]
    assert all(r.failed == 0 and r.trials == 10 for r in rows)
    by = {(r.n, r.rho): r.mean_iters for r in rows}
    for n in range(3, 9):
        assert by[n, 0.5] < by[n, 0.99]
    assert all(r.sd_iters >= 0 for r in rows)


def test_fig1_counts_failures_instead_of_raising():
    rows = ex.fig1([4], rhos=(0.99,), trials=5, seed=0, max_iter=3)
    assert rows[0].failed == 5
    assert np.isnan(rows[0].mean_iters)
    with pytest.raises(ValueError):
        ex.fig1([4], trials=1)


def test_fig1_parallel_matches_serial():
    a = ex.fig1(range(3, 7), rhos=(0.5,), trials=4, seed=9)
    b = ex.fig1(range(3, 7), rhos=(0.5,), trials=4, seed=9, jobs=2)
    assert ex.rows_to_csv(a, ex.Fig1Row) == ex.rows_to_csv(b, ex.Fig1Row)


def test_fig2_small_run():
    rows = ex.fig2((5,), count=30, seed=1)
    assert [r.index for r in rows] == list(range(30))
    for r in rows:
        assert r.converged and 0 <= r.nu_max < 1 and r.c_L > 0
        assert 0 < r.lambda_min < 1
        assert r.gamma_max <= ex.DEFAULT_B[5]


def test_fig2_zero_width_gives_identity():
    (row,) = ex.fig2((4,), count=1, b=0.0, seed=0)
    assert 1 <= row.iterations <= 2
    assert row.nu_max < 1e-12


def test_fig2_b_handling():
    rows = ex.fig2((3, 5), count=2, b={3: 0.1}, seed=0)
    assert max(r.gamma_max for r in rows if r.n == 3) <= 0.1
    assert max(r.gamma_max for r in rows if r.n == 5) > 0.1
    with pytest.raises(ValueError, match="no default b"):
        ex.fig2((7,), count=1)
    with pytest.raises(ValueError):
        ex.fig2((5,), count=0)


def test_fig2_parallel_matches_serial():
    a = ex.fig2((5,), count=12, seed=4)
    b = ex.fig2((5,), count=12, seed=4, jobs=3)
    assert ex.rows_to_csv(a, ex.Fig2Row) == ex.rows_to_csv(b, ex.Fig2Row)


def test_rows_to_csv_format():
    text = ex.rows_to_csv([ex.Fig1Row(3, 0.5, 4.25, 0.5, 10, 0)], ex.Fig1Row)
    assert text == "n,rho,mean_iters,sd_iters,trials,failed\n3,0.5,4.25,0.5,10,0\n"


def test_ols_r2():
    x = np.arange(10.0)
    assert ex.ols_r2(x, 3 * x + 1) == pytest.approx(1.0)
    assert ex.ols_r2(x, (x - 4.5) ** 2) == pytest.approx(0.0, abs=1e-12)
