import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import bfs_components
from dogtilt.dog import DogParams, build_dog_kernel, convolve
from dogtilt.edges import (BinarizePolicy, binarize, components_touching, grouping_stats, label)

planes = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 12)),
                elements=st.floats(-1, 1))
masks = arrays(bool, st.tuples(st.integers(1, 14), st.integers(1, 14)))


def test_sign_mode():
    p = np.array([[-1.0, 0.0, 1e-12], [0.3, 2.0, -0.1]])
    assert binarize(p).tolist() == [[False, False, False], [True, True, False]]


def test_noise_floor_can_be_disabled():
    p = np.array([[1e-12, -1e-12]])
    assert binarize(p, BinarizePolicy(noise_floor=0.0)).tolist() == [[True, False]]


def test_fraction_mode():
    p = np.array([[0.1, 0.5, 1.0, -2.0]])
    assert binarize(p, BinarizePolicy("fraction", 0.4)).tolist() == [[False, True, True, False]]
    assert not binarize(-np.ones((3, 3)), BinarizePolicy("fraction", 0.2)).any()


@pytest.mark.parametrize("policy", [BinarizePolicy("otsu"), BinarizePolicy("fraction", 1.0),
                                    BinarizePolicy("fraction", -0.1),
                                    BinarizePolicy(noise_floor=-1)])
def test_invalid_policy(policy):
    with pytest.raises(ValueError):
        binarize(np.zeros((2, 2)), policy)


@settings(max_examples=60)
@given(planes, st.floats(0.0, 0.99))
def test_fraction_is_monotone_and_inside_sign(p, frac):
    loose = binarize(p, BinarizePolicy("fraction", frac / 2))
    tight = binarize(p, BinarizePolicy("fraction", frac))
    assert not (tight & ~loose).any()
    assert not (loose & ~binarize(p)).any()


@settings(max_examples=60)
@given(planes)
def test_binarize_idempotent(p):
    b = binarize(p)
    assert np.array_equal(binarize(b.astype(float)), b)


def test_constant_plane_has_no_foreground():
    k = build_dog_kernel(DogParams(2.0))
    assert not binarize(convolve(np.full((30, 30), 0.7), k)).any()


def test_impulse_gives_one_central_blob():
    k = build_dog_kernel(DogParams(2.0))
    img = np.zeros((41, 41))
    img[20, 20] = 1.0
    b = binarize(convolve(img, k))
    labels, n = label(b)
    assert n == 1 and b[20, 20]
    # blob is a disc inside the window
    ys, xs = np.nonzero(b)
    assert np.abs(ys - 20).max() <= k.radius and np.abs(xs - 20).max() <= k.radius


@settings(max_examples=80, deadline=None)
@given(masks)
def test_components_match_bfs(b):
    labels, n = label(b)
    areas = sorted(np.bincount(labels.ravel())[1:].tolist()) if n else []
    assert areas == bfs_components(b)


def test_eight_connectivity_joins_diagonals():
    b = np.eye(5, dtype=bool)
    assert label(b)[1] == 1


def test_two_blocks():
    b = np.zeros((10, 10), dtype=bool)
    b[1:4, 1:4] = True
    b[6:9, 6:9] = True
    g = grouping_stats(b, [(0, 5), (5, 10)])
    assert (g.component_count, g.largest_component_px, g.multi_row_components) == (2, 9, 0)
    b[4:6, 4:6] = True
    g = grouping_stats(b, [(0, 5), (5, 10)])
    assert (g.component_count, g.largest_component_px, g.multi_row_components) == (1, 22, 1)


def test_mortar_linked_needs_long_run_in_mortar():
    # rows: tile 0..4, mortar 5, tile 6..10
    bands, mortar = [(0, 5), (6, 11)], [(5, 6)]
    b = np.zeros((11, 12), dtype=bool)
    b[2:9, 3] = True  # vertical bar crossing the mortar
    g = grouping_stats(b, bands, mortar_bands=mortar, min_run_px=5)
    assert g.multi_row_components == 1 and g.mortar_linked_components == 0
    b[5, 3:9] = True  # run of 6 along the mortar
    g = grouping_stats(b, bands, mortar_bands=mortar, min_run_px=5)
    assert g.mortar_linked_components == 1
    # a long run in the mortar on a single-row component does not count
    c = np.zeros_like(b)
    c[5, 0:12] = True
    assert grouping_stats(c, bands, mortar_bands=mortar, min_run_px=5).mortar_linked_components == 0


def test_empty_and_shape_mismatch():
    g = grouping_stats(np.zeros((4, 4), dtype=bool), [(0, 4)], sigma_c=2.0)
    assert (g.component_count, g.largest_component_px, g.multi_row_components) == (0, 0, 0)
    with pytest.raises(ValueError):
        grouping_stats(np.zeros((4, 4), dtype=bool), [(0, 4)], shape=(4, 5))


def test_components_touching():
    b = np.zeros((8, 8), dtype=bool)
    b[0:2, 0:2] = True
    b[5:8, 5:8] = True
    mask = np.zeros_like(b)
    mask[6, 6] = True
    assert components_touching(b, mask) == [9]
    assert components_touching(np.zeros_like(b), mask) == []


def test_munsterberg_has_no_mortar_links(munsterberg_desk):
    for row in munsterberg_desk.grouping.values():
        assert row["mortar_linked_components"] == 0


def test_cafe_wall_fine_scales_group_across_rows(cafe_desk):
    g = cafe_desk.grouping
    assert g[1.0]["multi_row_components"] > 0
