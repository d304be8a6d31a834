"""Binary edge maps from DoG responses and connected-component grouping statistics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

# 8-connectivity: diagonal links must join twisted-cord pieces
EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class BinarizePolicy:
    mode: str = "sign"
    threshold_frac: float = 0.0
    # responses of flat regions are round-off noise of either sign
    noise_floor: float = 1e-9

    def validate(self) -> "BinarizePolicy":
        if self.mode not in ("sign", "fraction"):
            raise ValueError(f"unknown binarize mode {self.mode!r}")
        if self.mode == "fraction" and not 0.0 <= self.threshold_frac < 1.0:
            raise ValueError("threshold_frac must lie in [0, 1)")
        if self.noise_floor < 0:
            raise ValueError("noise_floor must be >= 0")
        return self


def binarize(plane: np.ndarray, policy: BinarizePolicy = BinarizePolicy()) -> np.ndarray:
    """Foreground = positive (ON-center) response, optionally above a fraction of the max."""
    policy.validate()
    plane = np.asarray(plane, dtype=np.float64)
    if plane.size == 0:
        raise ValueError("binarize expects a nonempty plane")
    if policy.mode == "sign":
        return plane > policy.noise_floor
    peak = float(plane.max())
    if peak <= policy.noise_floor:
        return np.zeros(plane.shape, dtype=bool)
    return plane > max(policy.threshold_frac * peak, policy.noise_floor)


def binarize_stack(stack, policy: BinarizePolicy = BinarizePolicy()):
    for e in stack:
        e.binary = binarize(e.response, policy)
    return stack


def label(binary: np.ndarray) -> Tuple[np.ndarray, int]:
    return ndimage.label(binary, structure=EIGHT)


@dataclass(frozen=True)
class GroupingStats:
    sigma_c: float
    component_count: int
    largest_component_px: int
    multi_row_components: int
    mortar_linked_components: int = 0


def _long_runs(binary_rows: np.ndarray, min_run: int) -> np.ndarray:
    """Mask of pixels belonging to horizontal foreground runs of length >= ``min_run``."""
    out = np.zeros_like(binary_rows)
    for y, row in enumerate(binary_rows):
        padded = np.concatenate(([False], row, [False]))
        edges = np.flatnonzero(padded[1:] != padded[:-1])
        for a, b in zip(edges[::2], edges[1::2]):
            if b - a >= min_run:
                out[y, a:b] = True
    return out


def grouping_stats(binary: np.ndarray, row_bands: Sequence[Tuple[int, int]],
                   shape: Optional[Tuple[int, int]] = None,
                   sigma_c: float = float("nan"),
                   mortar_bands: Sequence[Tuple[int, int]] = (),
                   min_run_px: Optional[int] = None) -> GroupingStats:
    """Component statistics of an 8-connected binary map.

    ``row_bands`` are the half-open ``(y0, y1)`` pixel bands of the stimulus
    tile rows; a component is multi-row when its bounding box meets at least
    two of them. A multi-row component is additionally *mortar-linked* when
    it holds a horizontal foreground run of at least ``min_run_px`` (default:
    one tile width) inside one of ``mortar_bands``, i.e. the mortar line
    itself carries the link rather than two like-coloured tiles touching.
    ``shape`` is the stimulus size and must match.
    """
    binary = np.asarray(binary, dtype=bool)
    if shape is not None and tuple(binary.shape) != tuple(shape):
        raise ValueError(f"binary plane {binary.shape} does not match stimulus {tuple(shape)}")
    labels, n = label(binary)
    if n == 0:
        return GroupingStats(sigma_c, 0, 0, 0, 0)
    sizes = np.bincount(labels.ravel())[1:]
    multi = set()
    for i, sl in enumerate(ndimage.find_objects(labels), start=1):
        y0, y1 = sl[0].start, sl[0].stop
        if sum(1 for a, b in row_bands if y0 < b and a < y1) >= 2:
            multi.add(i)
    linked = set()
    if mortar_bands and multi:
        if min_run_px is None:
            min_run_px = min(b - a for a, b in row_bands)
        for y0, y1 in mortar_bands:
            runs = _long_runs(binary[y0:y1], min_run_px)
            linked.update(int(v) for v in np.unique(labels[y0:y1][runs]))
        linked &= multi
    return GroupingStats(sigma_c, int(n), int(sizes.max()), len(multi), len(linked))


def components_touching(binary: np.ndarray, mask: np.ndarray) -> List[int]:
    """Areas of the 8-connected components of ``binary`` that intersect ``mask``."""
    labels, n = label(binary)
    if n == 0:
        return []
    hit = np.unique(labels[mask & (labels > 0)])
    sizes = np.bincount(labels.ravel())
    return [int(sizes[i]) for i in hit]
