import numpy as np
import pytest

import oracles
from fmgsr import problem
from fmgsr.mesh import HaloMode, Patch, partition
from fmgsr.smoothers import (
    CrContext,
    SmootherConfig,
    direct_solve,
    kaczmarz_pass,
    patch_gs_sweep,
    smooth_level,
)
from fmgsr.stencils import apply_operator, restrict


def test_smoother_config_validates_ns():
    SmootherConfig(ns=1)
    with pytest.raises(ValueError):
        SmootherConfig(ns=0)


def test_gs_sweep_from_zero():
    # one forward pass on n=4 with unit forcing, worked by hand
    out = patch_gs_sweep(np.zeros(4), np.ones(4), (0, 4))
    want = np.array([1.0 / 48.0, 1.0 / 24.0, 5.0 / 96.0, 11.0 / 288.0])
    assert np.allclose(out, want, rtol=0.0, atol=1e-16)


def test_gs_sweep_leaves_outside_cells():
    rng = np.random.default_rng(5)
    u = rng.standard_normal(16)
    f = rng.standard_normal(16)
    out = patch_gs_sweep(u, f, (4, 10))
    assert np.array_equal(out[:4], u[:4])
    assert np.array_equal(out[10:], u[10:])
    assert np.any(out[4:10] != u[4:10])


def test_gs_sweep_fixed_point():
    rng = np.random.default_rng(8)
    f = rng.standard_normal(32)
    u_star = direct_solve(f)
    out = patch_gs_sweep(u_star, f, (0, 32))
    assert np.allclose(out, u_star, rtol=0.0, atol=1e-15)


@pytest.mark.parametrize("n", [8, 32])
def test_gs_sweep_matches_dense_replay(n):
    rng = np.random.default_rng(n)
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    for window in ((0, n), (2, n - 2)):
        for direction, forward in (("forward", True), ("backward", False)):
            got = patch_gs_sweep(u, f, window, direction)
            want = oracles.gs_replay(u, f, window, forward)
            assert np.max(np.abs(got - want)) < 1e-12


def test_gs_backward_is_mirrored_forward():
    rng = np.random.default_rng(11)
    u = rng.standard_normal(32)
    f = rng.standard_normal(32)
    bw = patch_gs_sweep(u, f, (0, 32), "backward")
    fw = patch_gs_sweep(u[::-1].copy(), f[::-1].copy(), (0, 32), "forward")
    assert np.allclose(bw, fw[::-1], rtol=0.0, atol=1e-13)


def test_gs_sweep_rejects_bad_args():
    u = np.zeros(8)
    with pytest.raises(ValueError):
        patch_gs_sweep(u, np.zeros(4), (0, 8))
    with pytest.raises(ValueError):
        patch_gs_sweep(u, np.zeros(8), (0, 9))
    with pytest.raises(ValueError):
        patch_gs_sweep(u, np.zeros(8), (4, 4))
    with pytest.raises(ValueError):
        patch_gs_sweep(u, np.zeros(8), (0, 8), "sideways")


def test_kaczmarz_single_pair():
    out = kaczmarz_pass(np.array([1.0, 3.0]), CrContext(np.array([5.0])), (0, 2))
    assert out.tolist() == [4.0, 6.0]


def test_kaczmarz_full_pass_restricts_exactly():
    rng = np.random.default_rng(21)
    n = 1024
    u = rng.standard_normal(n)
    target = rng.standard_normal(n // 2)
    out = kaczmarz_pass(u, CrContext(target), (0, n))
    assert np.max(np.abs(restrict(out) - target)) < 1e-13


def test_kaczmarz_shift_is_minimal():
    # both children move by the same amount: the projection is orthogonal
    rng = np.random.default_rng(22)
    u = rng.standard_normal(16)
    out = kaczmarz_pass(u, CrContext(rng.standard_normal(8)), (0, 16))
    shift = out - u
    assert np.allclose(shift[0::2], shift[1::2], rtol=0.0, atol=1e-15)


def test_kaczmarz_direction_invariant():
    # pair updates are disjoint, so sweep order cannot matter
    rng = np.random.default_rng(23)
    u = rng.standard_normal(64)
    cr = CrContext(rng.standard_normal(32))
    fw = kaczmarz_pass(u, cr, (0, 64), "forward")
    bw = kaczmarz_pass(u, cr, (0, 64), "backward")
    assert np.array_equal(fw, bw)


def test_kaczmarz_matches_dense_replay():
    rng = np.random.default_rng(24)
    u = rng.standard_normal(32)
    target = rng.standard_normal(16)
    got = kaczmarz_pass(u, CrContext(target), (4, 28))
    want = oracles.kaczmarz_replay(u, target, (4, 28))
    assert np.max(np.abs(got - want)) < 1e-13


def test_kaczmarz_rejects_misaligned_window():
    with pytest.raises(ValueError):
        kaczmarz_pass(np.zeros(8), CrContext(np.zeros(4)), (1, 5))


@pytest.mark.parametrize("mode", list(HaloMode))
@pytest.mark.parametrize("ns", [1, 2])
def test_smooth_level_matches_dense_replay(mode, ns):
    rng = np.random.default_rng(31)
    n = 32
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    for with_cr in (False, True):
        cr = CrContext(restrict(u)) if with_cr else None
        got = smooth_level(u, f, SmootherConfig(ns=ns, halo_mode=mode), 2, cr=cr)
        want = oracles.smooth_replay(
            u, f, partition(n, mode), ns,
            u_coarse=restrict(u) if with_cr else None,
        )
        assert np.max(np.abs(got - want)) < 1e-12


def test_smooth_level_patch_order_invariant():
    rng = np.random.default_rng(32)
    n = 256
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    cfg = SmootherConfig(ns=2, halo_mode=HaloMode.HALO2)
    cr = CrContext(restrict(u))
    base = smooth_level(u, f, cfg, 2, cr=cr)
    patches = partition(n, HaloMode.HALO2)
    for _ in range(10):
        shuffled = list(patches)
        rng.shuffle(shuffled)
        out = smooth_level(u, f, cfg, 2, cr=cr, patches=shuffled)
        assert np.max(np.abs(out - base)) <= 1e-15


def test_smooth_level_global_is_alternating_gs():
    rng = np.random.default_rng(33)
    n = 32
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    got = smooth_level(u, f, SmootherConfig(ns=2, halo_mode=HaloMode.GLOBAL), 2)
    want = patch_gs_sweep(
        patch_gs_sweep(u, f, (0, n), "forward"), f, (0, n), "backward"
    )
    assert np.array_equal(got, want)


def test_smooth_level_inner_reps_differ_from_repeats():
    # ns=2 runs both sweeps inside each patch before writing back, which is
    # not the same as applying the ns=1 smoother twice
    rng = np.random.default_rng(34)
    n = 32
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    inner = smooth_level(u, f, SmootherConfig(ns=2, halo_mode=HaloMode.HALO2), 2)
    twice = smooth_level(
        smooth_level(u, f, SmootherConfig(ns=1, halo_mode=HaloMode.HALO2), 2),
        f,
        SmootherConfig(ns=1, halo_mode=HaloMode.HALO2),
        2,
    )
    assert np.max(np.abs(inner - twice)) > 1e-8


def test_smooth_level_fixed_point():
    rng = np.random.default_rng(35)
    f = rng.standard_normal(64)
    u_star = direct_solve(f)
    for mode in HaloMode:
        out = smooth_level(u_star, f, SmootherConfig(ns=2, halo_mode=mode), 2)
        assert np.allclose(out, u_star, rtol=0.0, atol=1e-14)


def test_smooth_level_reduces_error():
    f = problem.manufactured_rhs(64)
    u_star = direct_solve(f)
    u = np.zeros(64)
    e0 = np.linalg.norm(u - u_star)
    for _ in range(20):
        u = smooth_level(u, f, SmootherConfig(ns=1, halo_mode=HaloMode.HALO2), 2)
    assert np.linalg.norm(u - u_star) < e0


def test_smooth_level_direct_dispatch_at_m0():
    rng = np.random.default_rng(36)
    f = rng.standard_normal(4)
    out = smooth_level(rng.standard_normal(4), f, SmootherConfig(), 2)
    assert np.array_equal(out, direct_solve(f))


def test_smooth_level_rejects_bad_args():
    u = np.zeros(8)
    f = np.zeros(8)
    with pytest.raises(ValueError):
        smooth_level(u, f, SmootherConfig(), 4)  # level below coarsest
    with pytest.raises(ValueError):
        smooth_level(u, np.zeros(4), SmootherConfig(), 2)
    with pytest.raises(ValueError):
        smooth_level(u, f, SmootherConfig(), 2, cr=CrContext(np.zeros(8)))
    bad_patches = [Patch((0, 2), (0, 4)), Patch((4, 6), (2, 8))]
    with pytest.raises(ValueError):
        smooth_level(u, f, SmootherConfig(), 2, patches=bad_patches)


def test_direct_solve_inverts_operator():
    rng = np.random.default_rng(37)
    for n in (4, 16, 256):
        f = rng.standard_normal(n)
        u = direct_solve(f)
        scale = float(np.max(np.abs(f)))
        assert np.max(np.abs(apply_operator(u) - f)) < 1e-10 * scale


def test_direct_solve_matches_dense_and_banded():
    rng = np.random.default_rng(38)
    f = rng.standard_normal(64)
    u = direct_solve(f)
    assert np.max(np.abs(u - oracles.direct_replay(f))) < 1e-12
    # second, independently assembled banded route
    assert np.max(np.abs(u - problem.direct_fine_solve(f))) < 1e-12
