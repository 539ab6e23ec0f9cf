import math
from pathlib import Path

import pytest

import sftzeta as sz

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_golden_pressure():
    spec = sz.golden_mean_shift()
    assert sz.pressure(sz.Potential.constant(spec, 0.0)) == pytest.approx(math.log((1 + 5**0.5) / 2), abs=1e-12)
    assert sz.enumerate_words(spec, 2) == ["11", "12", "21"]
    assert [spec.trace(n) for n in range(1, 5)] == [1, 3, 4, 7]


def test_full_shift_zeta_closed_form():
    spec = sz.full_shift(2)
    zero = sz.Potential.constant(spec, 0.0)
    one = sz.Potential.constant(spec, 1.0)
    value, convergent = sz.zeta_partial(zero, one, zero, 2.0, 0.0, 40)
    assert convergent
    assert value == pytest.approx(1 / (1 - 2 * math.exp(-2)), rel=1e-12)
    zn = sz.compute_zn(zero, one, zero, 0.0, 0.0, 5)
    assert [round(v.real) for v in zn] == [2, 4, 8, 16, 32]


def test_residue_matches_equilibrium_ratio():
    spec = sz.full_shift(2)
    zero = sz.Potential.constant(spec, 0.0)
    one = sz.Potential.constant(spec, 1.0)
    g = sz.Potential.from_symbols(spec, [0.0, 1.0])
    r = sz.residue_check(zero, one, g)
    assert r["target"] == pytest.approx(0.5)
    assert r["relative_error"] < 0.01


def test_catalog_and_li():
    spec = sz.full_shift(2)
    zero = sz.Potential.constant(spec, 0.0)
    one = sz.Potential.constant(spec, 1.0)
    rows = sz.build_catalog(one, zero, zero, zero, 3.0)
    assert len(rows) == 5
    assert sz.li(2.0) == 0.0
    assert sz.lattice_test(zero, one) == (True, pytest.approx(1.0))


def test_errors_carry_exit_codes():
    with pytest.raises(sz.SftzError) as info:
        sz.Subshift(2, [[1, 1], [0, 0]])
    assert info.value.args[0] == 10
    with pytest.raises(sz.SftzError) as info:
        sz.Potential.from_words(sz.golden_mean_shift(), 2, {"11": 1.0, "12": 2.0})
    assert info.value.args[0] == 15


def test_load_config():
    cfg = sz.load_config(str(CONFIGS / "golden_roof.json"))
    assert cfg["spec"] == sz.golden_mean_shift()
    assert cfg["tau"].table[1] == pytest.approx(1.6180339887)
