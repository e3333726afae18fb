import numpy as np
import pytest

from fmgsr.mesh import (
    PATCH_WIDTH,
    HaloMode,
    Hierarchy,
    Patch,
    build_hierarchy,
    partition,
    patch_arrays,
    _cached_patch_arrays,
)


def test_halo_mode_values():
    assert HaloMode.HALO2.halo == 2
    assert HaloMode.HALO4.halo == 4
    assert HaloMode.GLOBAL.halo is None
    assert HaloMode.HALO2.label == "2"
    assert HaloMode.HALO4.label == "4"
    assert HaloMode.GLOBAL.label == "global"
    assert HaloMode("4") is HaloMode.HALO4


def test_hierarchy_basic():
    h = build_hierarchy(2, 4)
    assert list(h.levels) == [2, 3, 4]
    assert h.size(2) == 4
    assert h.size(4) == 16
    assert h.spacing(3) == 0.125
    assert Hierarchy.REFINEMENT_RATIO == 2


def test_hierarchy_deep():
    h = build_hierarchy(2, 12)
    assert len(h.levels) == 11
    assert h.size(12) == 4096
    assert h.spacing(12) == 2.0 ** -12


def test_hierarchy_rejects_bad_bounds():
    with pytest.raises(ValueError):
        build_hierarchy(0, 4)
    with pytest.raises(ValueError):
        build_hierarchy(3, 3)
    with pytest.raises(ValueError):
        build_hierarchy(4, 3)


def test_patch_validates_containment():
    Patch((2, 4), (0, 6))
    Patch((0, 2), (0, 2))
    with pytest.raises(ValueError):
        Patch((0, 4), (1, 6))
    with pytest.raises(ValueError):
        Patch((2, 2), (0, 4))


def test_partition_halo2_n8_windows():
    patches = partition(8, HaloMode.HALO2)
    assert [p.owned for p in patches] == [(0, 2), (2, 4), (4, 6), (6, 8)]
    assert [p.extended for p in patches] == [(0, 4), (0, 6), (2, 8), (4, 8)]


def test_partition_halo4_n8_windows():
    patches = partition(8, HaloMode.HALO4)
    assert [p.owned for p in patches] == [(0, 2), (2, 4), (4, 6), (6, 8)]
    assert [p.extended for p in patches] == [(0, 6), (0, 8), (0, 8), (2, 8)]


def test_partition_global_single_patch():
    patches = partition(8, HaloMode.GLOBAL)
    assert patches == [Patch((0, 8), (0, 8))]
    assert partition(2, HaloMode.GLOBAL) == [Patch((0, 2), (0, 2))]


@pytest.mark.parametrize("mode", [HaloMode.HALO2, HaloMode.HALO4])
@pytest.mark.parametrize("n", [4, 8, 16, 64, 256])
def test_partition_owned_tiles_level(n, mode):
    patches = partition(n, mode)
    assert len(patches) == n // PATCH_WIDTH
    cursor = 0
    for p in patches:
        assert p.owned == (cursor, cursor + PATCH_WIDTH)
        cursor += PATCH_WIDTH
    assert cursor == n


@pytest.mark.parametrize("mode", [HaloMode.HALO2, HaloMode.HALO4])
@pytest.mark.parametrize("n", [4, 8, 16, 64, 256])
def test_partition_windows_clamped(n, mode):
    halo = mode.halo
    for p in partition(n, mode):
        ws, we = p.extended
        os_, oe = p.owned
        assert 0 <= ws <= os_ and oe <= we <= n
        assert ws == max(0, os_ - halo)
        assert we == min(n, oe + halo)
        # interior patches carry the full window
        if os_ - halo >= 0 and oe + halo <= n:
            assert we - ws == PATCH_WIDTH + 2 * halo


def test_partition_rejects_bad_sizes():
    with pytest.raises(ValueError):
        partition(5, HaloMode.HALO2)
    with pytest.raises(ValueError):
        partition(3, HaloMode.HALO4)
    with pytest.raises(ValueError):
        partition(2, HaloMode.HALO2)
    with pytest.raises(ValueError):
        partition(0, HaloMode.GLOBAL)


def test_partition_deterministic():
    a = partition(64, HaloMode.HALO4)
    b = partition(64, HaloMode.HALO4)
    assert a == b


def test_patch_arrays_layout():
    patches = partition(8, HaloMode.HALO2)
    owned_lo, owned_hi, ext_lo, ext_hi = patch_arrays(patches)
    assert owned_lo.dtype == np.int64
    assert owned_lo.tolist() == [0, 2, 4, 6]
    assert owned_hi.tolist() == [2, 4, 6, 8]
    assert ext_lo.tolist() == [0, 0, 2, 4]
    assert ext_hi.tolist() == [4, 6, 8, 8]


def test_cached_patch_arrays_frozen():
    arrays = _cached_patch_arrays(16, HaloMode.HALO2)
    again = _cached_patch_arrays(16, HaloMode.HALO2)
    for a, b in zip(arrays, again):
        assert a is b
        assert not a.flags.writeable
