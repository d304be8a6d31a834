"""Pixel-exact tile-illusion stimuli: Cafe Wall, Munsterberg, checkerboards with dots.

Images are 2-D ``float64`` arrays of shape ``(height, width)`` holding
luminance in [0, 1], origin top-left, y downward.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np

CORNERS = ("NE", "NW", "SE", "SW")


class InvalidSpecError(ValueError):
    """A stimulus spec violates one of its invariants."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"invalid spec: {field_name}: {message}")


@dataclass(frozen=True)
class CafeWallSpec:
    rows: int = 3
    cols: int = 8
    tile_px: int = 200
    mortar_px: int = 8
    mortar_lum: float = 0.5
    phase_frac: float = 0.5
    lum_dark: float = 0.0
    lum_light: float = 1.0

    def validate(self) -> "CafeWallSpec":
        _check_int(self, "rows", 1)
        _check_int(self, "cols", 1)
        _check_int(self, "tile_px", 1)
        _check_int(self, "mortar_px", 0)
        for name in ("mortar_lum", "lum_dark", "lum_light"):
            _check_unit(self, name)
        if not self.lum_dark < self.lum_light:
            raise InvalidSpecError("lum_dark", "must be < lum_light")
        if not 0.0 <= self.phase_frac < 1.0:
            raise InvalidSpecError("phase_frac", "must lie in [0, 1)")
        return self

    @property
    def height(self) -> int:
        return self.rows * self.tile_px + (self.rows - 1) * self.mortar_px

    @property
    def width(self) -> int:
        return self.cols * self.tile_px

    def row_bands(self) -> List[Tuple[int, int]]:
        """Half-open ``(y0, y1)`` pixel bands of each tile row."""
        pitch = self.tile_px + self.mortar_px
        return [(k * pitch, k * pitch + self.tile_px) for k in range(self.rows)]

    def mortar_bands(self) -> List[Tuple[int, int]]:
        """Half-open ``(y0, y1)`` bands of the mortar between consecutive rows."""
        return [(y1, y1 + self.mortar_px) for _, y1 in self.row_bands()[:-1]]


@dataclass(frozen=True)
class DotPlacement:
    tile_row: int
    tile_col: int
    corner: str
    offset_px: int = 2


@dataclass(frozen=True)
class BulgeSpec:
    board_rows: int = 15
    board_cols: int = 15
    tile_px: int = 36
    dot_px: int = 10
    dot_lum_on_dark: float = 1.0
    dot_lum_on_light: float = 0.0
    lum_dark: float = 0.0
    lum_light: float = 1.0
    dot_layout: Tuple[DotPlacement, ...] = field(default_factory=tuple)

    @property
    def height(self) -> int:
        return self.board_rows * self.tile_px

    @property
    def width(self) -> int:
        return self.board_cols * self.tile_px

    def tile_is_dark(self, r: int, c: int) -> bool:
        return (r + c) % 2 == 0

    def validate(self) -> "BulgeSpec":
        _check_int(self, "board_rows", 1)
        _check_int(self, "board_cols", 1)
        _check_int(self, "tile_px", 1)
        _check_int(self, "dot_px", 1)
        if self.dot_px >= self.tile_px:
            raise InvalidSpecError("dot_px", "must be smaller than tile_px")
        for name in ("dot_lum_on_dark", "dot_lum_on_light", "lum_dark", "lum_light"):
            _check_unit(self, name)
        if not self.lum_dark < self.lum_light:
            raise InvalidSpecError("lum_dark", "must be < lum_light")
        if self.dot_lum_on_dark == self.lum_dark:
            raise InvalidSpecError("dot_lum_on_dark", "dot does not contrast with dark tile")
        if self.dot_lum_on_light == self.lum_light:
            raise InvalidSpecError("dot_lum_on_light", "dot does not contrast with light tile")
        for i, p in enumerate(self.dot_layout):
            if p.corner not in CORNERS:
                raise InvalidSpecError(f"dot_layout[{i}]", f"unknown corner {p.corner!r}")
            if not (0 <= p.tile_row < self.board_rows and 0 <= p.tile_col < self.board_cols):
                raise InvalidSpecError(f"dot_layout[{i}]", "tile outside the board")
            if p.offset_px < 0 or p.offset_px + self.dot_px > self.tile_px:
                raise InvalidSpecError(f"dot_layout[{i}]", "dot does not fit inside its tile")
        return self

    def dot_boxes(self) -> List[Tuple[int, int, int, int]]:
        """Pixel boxes ``(y0, x0, y1, x1)`` (half-open) of every dot."""
        boxes = []
        t, d = self.tile_px, self.dot_px
        for p in self.dot_layout:
            ty, tx = p.tile_row * t, p.tile_col * t
            y0 = ty + p.offset_px if p.corner[0] == "N" else ty + t - p.offset_px - d
            x0 = tx + p.offset_px if p.corner[1] == "W" else tx + t - p.offset_px - d
            boxes.append((y0, x0, y0 + d, x0 + d))
        return boxes

    def dot_mask(self) -> np.ndarray:
        mask = np.zeros((self.height, self.width), dtype=bool)
        for y0, x0, y1, x1 in self.dot_boxes():
            mask[y0:y1, x0:x1] = True
        return mask


def _check_int(spec, name: str, lo: int) -> None:
    v = getattr(spec, name)
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < lo:
        raise InvalidSpecError(name, f"must be an integer >= {lo}, got {v!r}")


def _check_unit(spec, name: str) -> None:
    v = getattr(spec, name)
    if not 0.0 <= v <= 1.0:
        raise InvalidSpecError(name, f"must lie in [0, 1], got {v!r}")


def row_offset(k: int, phase_frac: float, tile_px: int) -> int:
    """Horizontal shift in pixels of tile row ``k``."""
    # guard against k*phase*tile landing a hair below an integer
    return math.floor(k * phase_frac * tile_px + 1e-9) % tile_px


def _render_cafe_wall(spec: CafeWallSpec) -> np.ndarray:
    img = np.full((spec.height, spec.width), spec.mortar_lum, dtype=np.float64)
    x = np.arange(spec.width)
    for k, (y0, y1) in enumerate(spec.row_bands()):
        off = row_offset(k, spec.phase_frac, spec.tile_px)
        light = ((x - off) // spec.tile_px) % 2 == 1
        img[y0:y1, :] = np.where(light, spec.lum_light, spec.lum_dark)[None, :]
    return img


def generate_cafe_wall(spec: CafeWallSpec) -> np.ndarray:
    """Render a Cafe Wall: shifted rows of alternating tiles separated by mortar.

    Row ``k`` is shifted right by ``floor(k * phase_frac * tile_px) mod tile_px``
    pixels and tiles wrap around horizontally. Mortar sits only between rows.
    """
    return _render_cafe_wall(spec.validate())


def generate_munsterberg(spec: CafeWallSpec) -> np.ndarray:
    """Cafe Wall with the mortar removed; exactly two luminances."""
    return generate_cafe_wall(replace(spec, mortar_px=0))


def checkerboard(board_rows: int, board_cols: int, tile_px: int,
                 lum_dark: float = 0.0, lum_light: float = 1.0) -> np.ndarray:
    r = np.arange(board_rows * tile_px) // tile_px
    c = np.arange(board_cols * tile_px) // tile_px
    light = (r[:, None] + c[None, :]) % 2 == 1
    return np.where(light, lum_light, lum_dark).astype(np.float64)


def generate_bulge(spec: BulgeSpec) -> np.ndarray:
    """Checkerboard with square dots painted over tile corners.

    Each dot sits at the named corner of its tile, inset ``offset_px`` from
    both edges of that corner. Dots take the luminance contrasting with the
    tile underneath and are painted after the board.
    """
    spec.validate()
    img = checkerboard(spec.board_rows, spec.board_cols, spec.tile_px,
                       spec.lum_dark, spec.lum_light)
    for p, (y0, x0, y1, x1) in zip(spec.dot_layout, spec.dot_boxes()):
        dark = spec.tile_is_dark(p.tile_row, p.tile_col)
        img[y0:y1, x0:x1] = spec.dot_lum_on_dark if dark else spec.dot_lum_on_light
    return img


def inward_corner_layout(board_rows: int, board_cols: int,
                         offset_px: int = 2) -> Tuple[DotPlacement, ...]:
    """Dots on the corners of every tile that face the central tile.

    Tiles in the central row/column get both corners of the facing side,
    the central tile gets all four. Needs an odd board to have a central tile.
    This only approximates the published Complex Bulge; its exact dot
    placements are unknown.
    """
    if board_rows % 2 == 0 or board_cols % 2 == 0:
        raise InvalidSpecError("board_rows", "inward-corner layout needs an odd board")
    cr, cc = board_rows // 2, board_cols // 2
    out = []
    for r in range(board_rows):
        for c in range(board_cols):
            vs = ("S",) if r < cr else ("N",) if r > cr else ("N", "S")
            hs = ("E",) if c < cc else ("W",) if c > cc else ("E", "W")
            for v in vs:
                for h in hs:
                    out.append(DotPlacement(r, c, v + h, offset_px))
    return tuple(out)


def complex_bulge_spec(board: int = 15, tile_px: int = 36, dot_px: int = 10,
                       offset_px: int = 2) -> BulgeSpec:
    """Default Complex Bulge approximation (36 px tiles, 10 px dots)."""
    return BulgeSpec(board_rows=board, board_cols=board, tile_px=tile_px, dot_px=dot_px,
                     dot_layout=inward_corner_layout(board, board, offset_px))


def crop(img: np.ndarray, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Copy of the ``w`` x ``h`` sub-raster whose top-left pixel is ``(x0, y0)``."""
    H, W = img.shape
    if w < 1 or h < 1 or x0 < 0 or y0 < 0 or x0 + w > W or y0 + h > H:
        raise IndexError(f"crop rectangle ({x0}, {y0}, {w}, {h}) outside {W}x{H} image")
    return img[y0:y0 + h, x0:x0 + w].copy()
