import numpy as np
import pytest

from orlicz4d import concentration as conc


def test_split_sums_to_totals():
    rep = conc.pair_concentration(30.0, conc.gaussian_test)
    assert abs(rep.pairing_lap - sum(rep.split["lap"].values())) <= 1e-12
    assert abs(rep.pairing_exp - sum(rep.split["exp"].values())) \
        <= 1e-10 * abs(rep.pairing_exp)


def test_zero_test_function():
    rep = conc.pair_concentration(25.0, lambda r: np.zeros_like(np.asarray(r, dtype=float)))
    assert rep.pairing_lap == 0.0
    assert rep.pairing_exp == 0.0
    assert rep.phi_at_zero == 0.0


def test_plateau_lap_pairing_alpha50():
    rep = conc.pair_concentration(50.0, conc.plateau_test)
    assert rep.phi_at_zero == 1.0
    assert abs(rep.pairing_lap - 1.0) <= 0.03
    # exterior region invisible to a bump supported in r < 1
    assert rep.split["lap"]["outer"] == 0.0
    assert rep.split["exp"]["outer"] == 0.0


def test_gaussian_pairings_alpha80():
    rep = conc.pair_concentration(80.0, conc.gaussian_test)
    assert abs(rep.pairing_lap - 1.0) <= 0.03
    assert abs(rep.pairing_exp - conc.EXP_TOTAL_LIMIT) <= 0.10 * conc.EXP_TOTAL_LIMIT
    assert abs(rep.split["exp"]["inner"] - conc.EXP_INNER_LIMIT) \
        <= 0.10 * conc.EXP_INNER_LIMIT
    assert abs(rep.split["exp"]["annulus"] - conc.EXP_ANNULUS_LIMIT) \
        <= 0.10 * conc.EXP_ANNULUS_LIMIT


def test_limit_constants():
    assert abs(conc.EXP_TOTAL_LIMIT - 35.5294) <= 1e-4
    assert abs(conc.EXP_INNER_LIMIT - 30.5946) <= 1e-4
    assert abs(conc.EXP_ANNULUS_LIMIT - 4.9348) <= 1e-4


def test_report_dict_fields():
    rep = conc.pair_concentration(20.0, conc.gaussian_test)
    d = rep.to_dict()
    assert set(d) == {"alpha", "pairing_lap", "pairing_exp", "split", "phi_at_zero"}
    assert set(d["split"]) == {"lap", "exp"}
    assert set(d["split"]["lap"]) == {"inner", "annulus", "outer"}


def test_alpha_floor():
    with pytest.raises(ValueError):
        conc.pair_concentration(1.0, conc.gaussian_test)
