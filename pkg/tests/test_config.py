import pytest

from dogtilt.config import ConfigError, RunConfig, config_from_dict, load_config


def test_defaults_follow_stimulus_geometry():
    cfg = RunConfig().validate()
    h = cfg.hough_config()
    assert (h.min_length_px, h.fill_gap_px) == (300.0, 24.0)
    cfg = config_from_dict({"stimulus": {"kind": "munsterberg", "tile_px": 50}})
    assert cfg.hough_config().fill_gap_px == 5.0


def test_yaml_round_trip(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(
        "name: desk\n"
        "stimulus: {kind: cafe_wall, rows: 3, cols: 8, tile_px: 50, mortar_px: 2}\n"
        "ladder: {start: 1, stop: 6, step: 1}\n"
        "binarize: {mode: fraction, threshold_frac: 0.1}\n"
        "hough: {num_peaks: 5}\n"
        "render: diverging\n")
    cfg = load_config(p)
    assert cfg.name == "desk" and cfg.sigmas == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    assert cfg.stimulus.cafe_wall.tile_px == 50
    assert cfg.binarize.mode == "fraction" and cfg.binarize.threshold_frac == 0.1
    assert cfg.hough_config().num_peaks == 5 and cfg.hough_config().min_length_px == 75.0
    assert cfg.manifest_dict()["ladder"]["start_stop_step"] == [1.0, 6.0, 1.0]


def test_explicit_sigmas():
    cfg = config_from_dict({"sigmas": [2, 4]})
    assert cfg.sigmas == (2.0, 4.0) and cfg.ladder_step is None


def test_bulge_layout_from_dict():
    cfg = config_from_dict({"stimulus": {"kind": "bulge", "board_rows": 3, "board_cols": 3,
                                         "dot_layout": [[1, 1, "NE", 2]]}})
    assert len(cfg.stimulus.bulge.dot_layout) == 1
    assert cfg.manifest_dict()["stimulus"]["dot_layout"] == [[1, 1, "NE", 2]]


@pytest.mark.parametrize("data, field", [
    ({"bogus": 1}, "bogus"),
    ({"stimulus": {"kind": "spiral"}}, "stimulus.kind"),
    ({"stimulus": {"tile_px": 0}}, "stimulus.tile_px"),
    ({"stimulus": {"colour": 1}}, "stimulus.colour"),
    ({"stimulus": {"kind": "png"}}, "stimulus.png_path"),
    ({"sigmas": [3, 2]}, "ladder"),
    ({"ladder": {"start": 1}}, "ladder"),
    ({"surround_ratio": 1.0}, "surround_ratio"),
    ({"hough": {"angular_window_deg": 30}}, "hough"),
    ({"hough": {"speed": 1}}, "hough.speed"),
    ({"binarize": {"mode": "otsu"}}, "binarize"),
    ({"render": "jet"}, "render"),
    ({"crop": [0, 0, 0, 5]}, "crop"),
])
def test_invalid_configs_name_the_field(data, field):
    with pytest.raises(ConfigError) as exc:
        config_from_dict(data)
    assert exc.value.field == field


def test_bad_yaml(tmp_path):
    p = tmp_path / "x.yaml"
    p.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        load_config(p)
    p.write_text("name: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(p)
