"""Named run configurations reproducing each figure's parameters.

The ``*_desk`` variants shrink tiles and scales by four (50 px tiles, 2 px
mortar, scales 1..6) so they run in seconds with identical ratios.
"""
from __future__ import annotations

import copy
from typing import Callable, Dict, List, Tuple

from .config import RunConfig, StimulusConfig, set_ladder
from .stimuli import CafeWallSpec, complex_bulge_spec

# crop of the 9x14 wall: 4 tile rows (with the mortar below each) by 5.2 tiles,
# starting at the top of tile row 2 and two tiles in
FIG5_CROP = (400, 416, 1040, 832)


def _cafe(name, rows, cols, tile, mortar, ladder, kind="cafe_wall", s=2.0, crop=None):
    cfg = RunConfig(name=name, stimulus=StimulusConfig(
        kind=kind, cafe_wall=CafeWallSpec(rows=rows, cols=cols, tile_px=tile, mortar_px=mortar)),
        surround_ratio=s, crop=crop)
    return set_ladder(cfg, *ladder)


def _bulge(name, ladder=None, sigmas=None):
    cfg = RunConfig(name=name, stimulus=StimulusConfig(kind="bulge", bulge=complex_bulge_spec()),
                    surround_ratio=1.6)
    if sigmas is not None:
        cfg.sigmas, cfg.ladder_step = tuple(float(v) for v in sigmas), None
        return cfg
    return set_ladder(cfg, *ladder)


_PRESETS: Dict[str, Tuple[str, Callable[[], RunConfig]]] = {
    "fig3_cafewall": (
        "Cafe Wall 3x8, 200 px tiles, 8 px mortar; scales 4..24 step 4; s=2, h=8",
        lambda: _cafe("fig3_cafewall", 3, 8, 200, 8, (4, 24, 4))),
    "fig3_cafewall_desk": (
        "Cafe Wall 3x8 at quarter size: 50 px tiles, 2 px mortar; scales 1..6; s=2, h=8",
        lambda: _cafe("fig3_cafewall_desk", 3, 8, 50, 2, (1, 6, 1))),
    "fig4_munsterberg": (
        "Munsterberg 3x8, 200 px tiles, no mortar; scales 4..24 step 4; s=2, h=8",
        lambda: _cafe("fig4_munsterberg", 3, 8, 200, 0, (4, 24, 4), kind="munsterberg")),
    "fig4_munsterberg_desk": (
        "Munsterberg 3x8 at quarter size: 50 px tiles; scales 1..6; s=2, h=8",
        lambda: _cafe("fig4_munsterberg_desk", 3, 8, 50, 0, (1, 6, 1), kind="munsterberg")),
    "fig5_crop_hough": (
        "4x5-tile crop of a 9x14 Cafe Wall (200 px tiles, 8 px mortar); scales 8..28 step 4",
        lambda: _cafe("fig5_crop_hough", 9, 14, 200, 8, (8, 28, 4), crop=FIG5_CROP)),
    "fig6_bulge": (
        "Complex Bulge approximation, 36 px tiles, 10 px dots; scales 1..8; s=1.6, h=8",
        lambda: _bulge("fig6_bulge", ladder=(1, 8, 1))),
    "fig7_bulge_hough": (
        "Complex Bulge Hough lines at scales 2 and 4; s=1.6, h=8",
        lambda: _bulge("fig7_bulge_hough", sigmas=(2, 4))),
}


def list_presets() -> List[Tuple[str, str]]:
    return [(name, desc) for name, (desc, _) in _PRESETS.items()]


def get_preset(name: str) -> RunConfig:
    try:
        _, make = _PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None
    cfg = make()
    cfg.output_dir = f"out/{name}"
    return copy.deepcopy(cfg.validate())
