"""Realization generation: determinism, stream splitting, dump/load."""

import numpy as np
import pytest

from specshare import (
    DD,
    DU,
    UD,
    UU,
    CoexistenceLevel,
    NakagamiM,
    Rayleigh,
    Scenario,
    SystemParams,
    allowed_levels,
    generate,
    load_instance,
    save_instance,
)
from specshare.network import power_count, round_count
from specshare.rng import StreamKey

from seeds import SEEDS


def params(n=4, alpha=1.0, model=Rayleigh(), P=10.0, N0=1.0):
    return SystemParams(n=n, alpha=alpha, P=P, N0=N0, model=model)


def test_scenario_parsing_and_tags():
    assert Scenario.parse("uu") == UU
    assert Scenario.parse("DU") == DU
    assert UD.tag == "ud"
    with pytest.raises(ValueError):
        Scenario.parse("ux")


def test_allowed_levels_table():
    assert allowed_levels(UU) == (
        CoexistenceLevel.PURE_INTERFERENCE,
        CoexistenceLevel.ASYMMETRIC,
        CoexistenceLevel.SYMMETRIC,
    )
    assert allowed_levels(DU) == (
        CoexistenceLevel.PURE_INTERFERENCE,
        CoexistenceLevel.ASYMMETRIC,
    )
    assert allowed_levels(UD) == (
        CoexistenceLevel.PURE_INTERFERENCE,
        CoexistenceLevel.SYMMETRIC,
    )
    assert allowed_levels(DD) == (CoexistenceLevel.PURE_INTERFERENCE,)


def test_round_count_half_up():
    assert round_count(2.5) == 3
    assert round_count(2.49) == 2
    assert power_count(10, 0.0, 10) == 0  # exponent 0 deactivates everything
    assert power_count(10, 1.0, 10) == 10


def test_k_rounding():
    assert params(n=3, alpha=2.0).k == 9
    assert params(n=10, alpha=0.5).k == 3  # round(3.162)
    assert params(n=1, alpha=5.0).k == 1


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(n=0, alpha=1.0, P=1.0, N0=1.0, model=Rayleigh())
    with pytest.raises(ValueError):
        SystemParams(n=2, alpha=-1.0, P=1.0, N0=1.0, model=Rayleigh())
    with pytest.raises(ValueError):
        SystemParams(n=2, alpha=1.0, P=0.0, N0=1.0, model=Rayleigh())


def test_generate_deterministic():
    key = StreamKey(SEEDS["network-lln"]).child("determinism")
    a = generate(params(), key)
    b = generate(params(), key)
    for name in ("g_p", "g_s", "g_sp", "g_ps"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    assert a.g0_sp == b.g0_sp and a.g0_ps == b.g0_ps


def test_generate_sizes_and_nonnegativity():
    inst = generate(params(n=3, alpha=2.0), StreamKey(1).child("sizes"))
    assert len(inst.g_p) == 3 and len(inst.g_ps) == 3
    assert len(inst.g_s) == 9 and len(inst.g_sp) == 9
    for name in ("g_p", "g_s", "g_sp", "g_ps"):
        assert (getattr(inst, name) >= 0).all()


def test_stream_splitting_alpha_change_preserves_primary_draws():
    key = StreamKey(SEEDS["network-lln"]).child("split")
    a = generate(params(n=16, alpha=1.0), key)
    b = generate(params(n=16, alpha=1.5), key)
    assert np.array_equal(a.g_p, b.g_p)
    assert np.array_equal(a.g_ps, b.g_ps)
    assert a.g0_sp == b.g0_sp and a.g0_ps == b.g0_ps
    assert len(b.g_s) == 64 and len(a.g_s) == 16


def test_generate_lln_mean():
    inst = generate(params(n=10**4), StreamKey(SEEDS["network-lln"]).child("lln"))
    assert inst.g_p.mean() == pytest.approx(1.0, abs=0.03)


def test_instance_arrays_read_only():
    inst = generate(params(), StreamKey(2).child("ro"))
    with pytest.raises(ValueError):
        inst.g_p[0] = 5.0


def test_dump_load_roundtrip(tmp_path):
    inst = generate(params(n=5, alpha=1.3, model=NakagamiM(2.0)), StreamKey(3).child("io"))
    path = tmp_path / "instance.bin"
    save_instance(inst, path)
    back = load_instance(path)
    assert back.params == inst.params
    for name in ("g_p", "g_s", "g_sp", "g_ps"):
        assert np.array_equal(getattr(back, name), getattr(inst, name))
    assert back.g0_sp == inst.g0_sp and back.g0_ps == inst.g0_ps


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "bogus.bin"
    path.write_bytes(b"not an instance\n")
    with pytest.raises(ValueError):
        load_instance(path)
