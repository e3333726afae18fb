"""Grid hierarchy and the overlapping patch partition used by the additive smoother.

Levels are indexed by their exponent k: level k carries ``2**k`` cells of
width ``2**-k`` on the unit interval, cell centers at ``x_i = (i + 1/2) * h``.
All index ranges are 0-based and half-open.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

# Owned cells per patch. Fixed (not a parameter) so that study results stay
# comparable across configurations.
PATCH_WIDTH = 2


class HaloMode(enum.Enum):
    """Halo policy of the patch partition.

    ``HALO2`` and ``HALO4`` extend each 2-cell patch by 2 or 4 ghost cells on
    each side (clamped at the domain ends).  ``GLOBAL`` uses a single patch
    covering the whole level, which turns the additive patch smoother into a
    plain multiplicative point smoother.
    """

    HALO2 = "2"
    HALO4 = "4"
    GLOBAL = "global"

    @property
    def halo(self) -> int | None:
        """Halo width in cells, or None in global mode."""
        if self is HaloMode.GLOBAL:
            return None
        return int(self.value)

    @property
    def label(self) -> str:
        """Short text label used in CSV output and CLI arguments."""
        return self.value


@dataclass(frozen=True)
class Hierarchy:
    """Ladder of grid levels from coarsest exponent ``m0`` to finest ``m``."""

    m0: int
    m: int

    REFINEMENT_RATIO: ClassVar[int] = 2

    def __post_init__(self) -> None:
        if self.m0 < 1:
            raise ValueError(f"coarsest exponent must be >= 1, got m0={self.m0}")
        if self.m <= self.m0:
            raise ValueError(
                f"need at least two levels: m={self.m} must exceed m0={self.m0}"
            )

    @property
    def levels(self) -> range:
        """All level exponents, coarsest to finest."""
        return range(self.m0, self.m + 1)

    def size(self, level: int) -> int:
        """Number of cells on ``level``."""
        return 2 ** level

    def spacing(self, level: int) -> float:
        """Cell width on ``level``."""
        return 2.0 ** (-level)


def build_hierarchy(m0: int, m: int) -> Hierarchy:
    """Create a hierarchy with level sizes ``2**m0 .. 2**m``."""
    return Hierarchy(m0=m0, m=m)


@dataclass(frozen=True)
class Patch:
    """One smoother subdomain: an owned cell range plus its halo extension.

    Both ranges are 0-based half-open ``(start, stop)`` tuples with
    ``extended`` containing ``owned``.  During a patch solve all cells of
    ``extended`` are updated, but only ``owned`` is written back.
    """

    owned: tuple[int, int]
    extended: tuple[int, int]

    def __post_init__(self) -> None:
        (os, oe), (es, ee) = self.owned, self.extended
        if not (es <= os < oe <= ee):
            raise ValueError(f"owned {self.owned} not inside extended {self.extended}")


def partition(n: int, mode: HaloMode) -> list[Patch]:
    """Partition a level of ``n`` cells into ordered smoother patches.

    Owned ranges are the consecutive cell pairs ``(0,2), (2,4), ...`` and
    exactly tile ``[0, n)``; extended ranges add ``mode.halo`` cells on each
    side, clamped to the domain.  Global mode returns the single patch
    ``[0, n)``.

    Parameters
    ----------
    n : int
        Level size.  Must be even and >= 4 for the patch modes.
    mode : HaloMode
        Halo policy.

    Returns
    -------
    list of Patch
        Deterministic left-to-right patch list.
    """
    if mode is HaloMode.GLOBAL:
        if n < 1:
            raise ValueError(f"level size must be positive, got {n}")
        return [Patch((0, n), (0, n))]
    if n % 2 != 0:
        raise ValueError(f"patch modes need an even level size, got {n}")
    if n < 4:
        raise ValueError(f"patch modes need at least 4 cells, got {n}")
    halo = mode.halo
    patches = []
    for start in range(0, n, PATCH_WIDTH):
        stop = start + PATCH_WIDTH
        extended = (max(0, start - halo), min(n, stop + halo))
        patches.append(Patch((start, stop), extended))
    return patches


def patch_arrays(
    patches: list[Patch],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pack a patch list into four int64 index arrays for the kernels."""
    owned_lo = np.array([p.owned[0] for p in patches], dtype=np.int64)
    owned_hi = np.array([p.owned[1] for p in patches], dtype=np.int64)
    ext_lo = np.array([p.extended[0] for p in patches], dtype=np.int64)
    ext_hi = np.array([p.extended[1] for p in patches], dtype=np.int64)
    return owned_lo, owned_hi, ext_lo, ext_hi


@functools.lru_cache(maxsize=256)
def _cached_patch_arrays(
    n: int, mode: HaloMode
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Cached, read-only index arrays for the standard partition."""
    arrays = patch_arrays(partition(n, mode))
    for a in arrays:
        a.setflags(write=False)
    return arrays
