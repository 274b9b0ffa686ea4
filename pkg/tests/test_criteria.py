import numpy as np
import pytest

from sepcrit.criteria import ccnr, corollary_preset, multipartite_eval, ppt, theorem21, zr
from sepcrit.qmat import DensityMatrix, kron
from sepcrit.realign import CriterionParams, GConditionError, GSpec, PairMapKind
from sepcrit.states import bell_state, family, noise_mix, random_density, random_separable, tiles_state

from conftest import random_complex


def test_corollary_presets():
    p = corollary_preset("cor21", 1, 2)
    assert p.g.trace == 4 and 1 + p.g.trace == 5
    p = corollary_preset("cor22", 1, 2)
    assert p.g.trace == 2 and 1 + p.g.trace == 3
    p = corollary_preset("cor21", 3.4640, 12)
    assert 1 + p.g.trace == pytest.approx(1 + 12**2 * 3.4640**2)
    assert p.g.trace == pytest.approx(np.trace(p.g.materialize()))
    with pytest.raises(ValueError):
        corollary_preset("cor23", 1, 1)


def test_ccnr_examples():
    prod = DensityMatrix(kron(random_density(2, seed=1).mat, random_density(3, seed=2).mat), (2, 3))
    res = ccnr(prod)
    assert res.norm_value <= 1 + 1e-12 and not res.detected
    bell = ccnr(bell_state())
    assert bell.norm_value == pytest.approx(2.0, abs=1e-12)
    assert bell.margin == pytest.approx(1.0, abs=1e-12) and bell.detected
    assert bell.bound == 1.0


def test_ccnr_invalid_cut():
    with pytest.raises(ValueError):
        ccnr(bell_state(), cut=2)


def test_theorem21_alpha_zero_matches_ccnr():
    for seed in range(20):
        rho = random_density(9, seed=seed, dims=[3, 3])
        a = theorem21(rho, 1, corollary_preset("cor21", 0.0, 3))
        b = ccnr(rho)
        assert a.margin == pytest.approx(b.margin, abs=1e-10)
        assert a.detected == b.detected


def test_theorem21_rejects_bad_g():
    bad = CriterionParams(1.0, 1, GSpec.explicit(np.zeros((1, 1)), 1.0))
    with pytest.raises(GConditionError, match="-1"):
        theorem21(bell_state(), 1, bad)
    with pytest.raises(ValueError):
        theorem21(bell_state(), 1, None)


def test_theorem21_detects_what_ccnr_detects():
    fam = family("tiles")
    params = [corollary_preset("cor21", 1.0, 1), corollary_preset("cor22", 0.5, 4), corollary_preset("cor21", 11.659, 1)]
    for p in np.linspace(0.85, 1, 31):
        rho = fam(p)
        if ccnr(rho).detected:
            assert all(theorem21(rho, 1, prm).detected for prm in params)
    for seed in range(200):
        rho = random_density(4, rank=1, seed=seed, dims=[2, 2])
        if ccnr(rho).detected:
            assert all(theorem21(rho, 1, prm).detected for prm in params)


def test_theorem21_product_state_equality(rng):
    params = corollary_preset("cor22", 2.0, 5)
    for _ in range(20):
        u, v = random_complex(rng, 2), random_complex(rng, 3)
        rho = DensityMatrix(kron(np.outer(u, u.conj()), np.outer(v, v.conj())) / (np.vdot(u, u) * np.vdot(v, v)).real, (2, 3))
        assert theorem21(rho, 1, params).norm_value == pytest.approx(1 + params.g.trace, abs=1e-9)


def test_zr_examples():
    prod = DensityMatrix(kron(np.diag([1, 0]), np.diag([0, 1, 0])), (2, 3))
    res = zr(prod)
    assert res.norm_value == pytest.approx(0, abs=1e-15) and res.bound == pytest.approx(0, abs=1e-15)
    assert not res.detected
    mixed = zr(DensityMatrix(np.eye(6) / 6, (2, 3)))
    assert mixed.norm_value == pytest.approx(0, abs=1e-15)
    assert mixed.bound == pytest.approx(np.sqrt((1 - 1 / 2) * (1 - 1 / 3)))
    assert not mixed.detected
    assert zr(bell_state()).detected


def test_zr_bound_range():
    for seed in range(50):
        res = zr(random_density(6, seed=seed, dims=[2, 3]))
        assert 0 <= res.bound < 1 and res.norm_value >= 0


def test_ppt_examples():
    res = ppt(bell_state())
    assert res.margin == pytest.approx(0.5, abs=1e-10) and res.detected
    assert not ppt(tiles_state()).detected
    for seed in range(20):
        assert not ppt(random_separable([3, 3], 50, seed=seed)).detected


def test_multipartite_eval_two_party_reduction():
    for seed in range(10):
        rho = random_density(6, seed=seed, dims=[2, 3])
        hr = multipartite_eval(rho, (0, 1), PairMapKind.realign())
        assert hr.norm_value == pytest.approx(ccnr(rho).norm_value, abs=1e-10)
        params = corollary_preset("cor21", 2.0, 3)
        aug = multipartite_eval(rho, (0, 1), PairMapKind.augmented(params))
        thm = theorem21(rho, 1, params)
        assert aug.norm_value == pytest.approx(thm.norm_value / (1 + params.g.trace), abs=1e-10)
        assert aug.detected == thm.detected


def test_multipartite_detect_tol_scales_with_g():
    params = corollary_preset("cor21", 100.0, 10)
    res = multipartite_eval(family("shifts")(0.9), (1, 2), PairMapKind.augmented(params))
    assert res.detect_tol == pytest.approx(1e-9 / (1 + params.g.trace))
    assert res.detected == (res.margin > res.detect_tol)
    assert res.detected


def test_result_invariants_and_serialization():
    res = theorem21(bell_state(), 1, corollary_preset("cor21", 1.0, 2))
    assert res.margin == pytest.approx(res.norm_value - res.bound)
    assert res.detected == (res.margin > res.detect_tol)
    d = res.to_dict()
    assert d["params"] == {"alpha": 1.0, "ell": 2, "g": "identity"}
    assert d["criterion"] == "thm21"


def test_shifts_thm31_detects_at_high_p():
    params = corollary_preset("cor21", 10.0, 10)
    rho = noise_mix(family("shifts").base, 0.9)
    assert multipartite_eval(rho, (1, 2), PairMapKind.augmented(params)).detected
    assert not multipartite_eval(noise_mix(family("shifts").base, 0.8), (1, 2), PairMapKind.augmented(params)).detected
