import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dogtilt.stimuli import (BulgeSpec, CafeWallSpec, DotPlacement, InvalidSpecError,
                             _render_cafe_wall, checkerboard, complex_bulge_spec, crop,
                             generate_bulge, generate_cafe_wall, generate_munsterberg,
                             inward_corner_layout, row_offset)

cafe_specs = st.builds(
    CafeWallSpec,
    rows=st.integers(1, 5), cols=st.integers(1, 6), tile_px=st.integers(2, 20),
    mortar_px=st.integers(0, 4), mortar_lum=st.sampled_from([0.25, 0.5, 0.75]),
    phase_frac=st.sampled_from([0.0, 0.25, 0.5, 0.75, 1 / 3]),
)


def test_default_dimensions():
    img = generate_cafe_wall(CafeWallSpec())
    assert img.shape == (3 * 200 + 2 * 8, 8 * 200)
    assert img.dtype == np.float64


@settings(max_examples=60, deadline=None)
@given(cafe_specs)
def test_cafe_wall_layout(spec):
    img = generate_cafe_wall(spec)
    assert img.shape == (spec.height, spec.width)
    for k, (y0, y1) in enumerate(spec.row_bands()):
        off = row_offset(k, spec.phase_frac, spec.tile_px)
        for x in range(spec.width):
            dark = ((x - off) // spec.tile_px) % 2 == 0
            assert np.all(img[y0:y1, x] == (spec.lum_dark if dark else spec.lum_light))
    for y0, y1 in spec.mortar_bands():
        assert np.all(img[y0:y1] == spec.mortar_lum)
    # luminance closure
    allowed = {spec.lum_dark, spec.lum_light} | ({spec.mortar_lum} if spec.mortar_px else set())
    assert set(np.unique(img)) <= allowed


@settings(max_examples=40, deadline=None)
@given(cafe_specs)
def test_munsterberg_is_zero_mortar_cafe_wall(spec):
    m = generate_munsterberg(spec)
    assert np.array_equal(m, generate_cafe_wall(dataclasses.replace(spec, mortar_px=0)))
    assert set(np.unique(m)) <= {spec.lum_dark, spec.lum_light}


def test_consecutive_rows_shift_by_half_tile():
    spec = CafeWallSpec(rows=3, cols=4, tile_px=10, mortar_px=2)
    img = generate_cafe_wall(spec)
    (a0, _), (b0, _), (c0, _) = spec.row_bands()
    assert np.array_equal(np.roll(img[a0], 5), img[b0])
    assert np.array_equal(img[a0], img[c0])


def test_full_phase_wraps_to_zero():
    # phase 1.0 is rejected by validation but renders like phase 0
    a = _render_cafe_wall(CafeWallSpec(rows=3, cols=4, tile_px=10, mortar_px=2, phase_frac=1.0))
    b = generate_cafe_wall(CafeWallSpec(rows=3, cols=4, tile_px=10, mortar_px=2, phase_frac=0.0))
    assert np.array_equal(a, b)


def test_row_offset_exact_for_thirds():
    assert [row_offset(k, 1 / 3, 30) for k in range(4)] == [0, 10, 20, 0]


@pytest.mark.parametrize("field, value", [
    ("rows", 0), ("cols", -1), ("tile_px", 0), ("mortar_px", -1), ("tile_px", 2.5),
    ("mortar_lum", 1.5), ("phase_frac", 1.0), ("phase_frac", -0.1), ("lum_dark", 1.0),
])
def test_invalid_cafe_wall_names_field(field, value):
    with pytest.raises(InvalidSpecError) as exc:
        generate_cafe_wall(dataclasses.replace(CafeWallSpec(), **{field: value}))
    assert exc.value.field == field


def test_checkerboard_alternates():
    b = checkerboard(4, 5, 3)
    assert b.shape == (12, 15)
    assert b[0, 0] == 0.0 and b[0, 3] == 1.0 and b[3, 0] == 1.0 and b[3, 3] == 0.0


def test_bulge_dot_geometry():
    spec = BulgeSpec(board_rows=3, board_cols=3, tile_px=20, dot_px=6,
                     dot_layout=(DotPlacement(0, 0, "SE", 2), DotPlacement(1, 2, "NW", 1)))
    img = generate_bulge(spec)
    assert img.shape == (60, 60)
    # SE corner of dark tile (0,0): rows/cols 12..17, white dot
    assert np.all(img[12:18, 12:18] == 1.0)
    assert img[11, 12] == 0.0 and img[18, 17] == 0.0
    # NW corner of light tile (1,2): starts at (21, 41), black dot
    assert np.all(img[21:27, 41:47] == 0.0)
    assert img[20, 41] == 1.0 and img[21, 40] == 1.0
    assert spec.dot_mask().sum() == 2 * 36


def test_bulge_without_dots_is_checkerboard():
    spec = BulgeSpec(board_rows=4, board_cols=4, tile_px=8, dot_px=3)
    assert np.array_equal(generate_bulge(spec), checkerboard(4, 4, 8))


def test_complex_bulge_defaults_and_symmetry():
    spec = complex_bulge_spec()
    img = generate_bulge(spec)
    assert img.shape == (540, 540)
    assert set(np.unique(img)) == {0.0, 1.0}
    # odd board: the layout is symmetric under quarter turns and mirrors
    assert np.array_equal(np.rot90(img), img)
    assert np.array_equal(img[:, ::-1], img)
    centre = [p for p in spec.dot_layout if (p.tile_row, p.tile_col) == (7, 7)]
    assert sorted(p.corner for p in centre) == ["NE", "NW", "SE", "SW"]


def test_even_board_rotation_inverts_colours():
    spec = BulgeSpec(board_rows=16, board_cols=16, tile_px=12, dot_px=4,
                     dot_layout=tuple(DotPlacement(r, c, k, 1) for r, c, k in
                                      [(7, 7, "SE"), (7, 8, "SW"), (8, 8, "NW"), (8, 7, "NE")]))
    img = generate_bulge(spec)
    # a quarter turn of an even checkerboard swaps the tile colours
    assert np.array_equal(np.rot90(img), 1.0 - img)


def test_inward_layout_needs_odd_board():
    with pytest.raises(InvalidSpecError):
        inward_corner_layout(4, 5)


@pytest.mark.parametrize("placement, field", [
    (DotPlacement(0, 0, "XX"), "dot_layout[1]"),
    (DotPlacement(5, 0, "NE"), "dot_layout[1]"),
    (DotPlacement(0, 0, "NE", 30), "dot_layout[1]"),
])
def test_invalid_bulge_names_field(placement, field):
    spec = BulgeSpec(board_rows=3, board_cols=3, tile_px=36, dot_px=10,
                     dot_layout=(DotPlacement(0, 0, "NE"), placement))
    with pytest.raises(InvalidSpecError) as exc:
        generate_bulge(spec)
    assert exc.value.field == field


def test_bulge_dot_must_contrast():
    with pytest.raises(InvalidSpecError) as exc:
        generate_bulge(BulgeSpec(board_rows=2, board_cols=2, dot_lum_on_dark=0.0))
    assert exc.value.field == "dot_lum_on_dark"


def test_crop():
    img = np.arange(20.0).reshape(4, 5)
    c = crop(img, 1, 2, 3, 2)
    assert np.array_equal(c, [[11, 12, 13], [16, 17, 18]])
    c[0, 0] = -1
    assert img[2, 1] == 11
    with pytest.raises(IndexError):
        crop(img, 3, 0, 3, 2)


def test_fixed_layouts():
    assert generate_cafe_wall(CafeWallSpec(rows=9, cols=14)).shape == (1864, 2800)
    assert generate_munsterberg(CafeWallSpec()).shape == (600, 1600)
    strip = generate_cafe_wall(CafeWallSpec(rows=1, cols=2, tile_px=4, mortar_px=0, phase_frac=0))
    assert np.array_equal(strip, checkerboard(1, 2, 4))


def test_trivial_crops():
    img = generate_cafe_wall(CafeWallSpec(rows=2, cols=3, tile_px=6, mortar_px=1))
    assert np.array_equal(crop(img, 0, 0, img.shape[1], img.shape[0]), img)
    assert crop(img, 0, 0, 1, 1).tolist() == [[img[0, 0]]]
