"""Run configuration: stimulus source, scale ladder, model ratios, analysis settings.

Config files are YAML mappings::

    name: my_run
    stimulus:
      kind: cafe_wall          # cafe_wall | munsterberg | bulge | png
      rows: 3
      cols: 8
      tile_px: 50
      mortar_px: 2
    crop: [x0, y0, w, h]       # optional
    ladder: {start: 1, stop: 6, step: 1}   # or  sigmas: [2, 4]
    surround_ratio: 2.0
    window_ratio: 8.0
    binarize: {mode: sign}
    hough: {num_peaks: 20}     # unset fields follow the stimulus geometry
    render: grayscale          # grayscale | diverging
    output_dir: out/my_run
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from .dog import ScaleLadder
from .edges import BinarizePolicy
from .hough import HoughConfig
from .stimuli import BulgeSpec, CafeWallSpec, DotPlacement, complex_bulge_spec

STIMULUS_KINDS = ("cafe_wall", "munsterberg", "bulge", "png")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class StimulusConfig:
    kind: str = "cafe_wall"
    cafe_wall: CafeWallSpec = field(default_factory=CafeWallSpec)
    bulge: BulgeSpec = field(default_factory=complex_bulge_spec)
    png_path: Optional[str] = None
    # geometry hints for external PNGs
    tile_px: Optional[int] = None
    mortar_px: int = 0

    def spec(self):
        if self.kind in ("cafe_wall", "munsterberg"):
            return self.cafe_wall
        if self.kind == "bulge":
            return self.bulge
        return None

    def to_dict(self) -> dict:
        d: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "cafe_wall":
            d.update(asdict(self.cafe_wall))
        elif self.kind == "munsterberg":
            d.update(asdict(replace(self.cafe_wall, mortar_px=0)))
        elif self.kind == "bulge":
            d.update({k: v for k, v in asdict(self.bulge).items() if k != "dot_layout"})
            d["dot_layout"] = [[p.tile_row, p.tile_col, p.corner, p.offset_px]
                               for p in self.bulge.dot_layout]
        else:
            d.update(png_path=self.png_path, tile_px=self.tile_px, mortar_px=self.mortar_px)
        return d


@dataclass
class RunConfig:
    name: str = "run"
    stimulus: StimulusConfig = field(default_factory=StimulusConfig)
    crop: Optional[Tuple[int, int, int, int]] = None
    sigmas: Tuple[float, ...] = (4.0, 8.0, 12.0, 16.0, 20.0, 24.0)
    ladder_step: Optional[Tuple[float, float, float]] = (4.0, 24.0, 4.0)
    surround_ratio: float = 2.0
    window_ratio: float = 8.0
    binarize: BinarizePolicy = field(default_factory=BinarizePolicy)
    hough: Dict[str, Any] = field(default_factory=dict)
    render: str = "grayscale"
    output_dir: str = "out"
    workers: int = 1

    def validate(self) -> "RunConfig":
        if self.stimulus.kind not in STIMULUS_KINDS:
            raise ConfigError("stimulus.kind", f"must be one of {STIMULUS_KINDS}")
        if self.stimulus.kind == "png" and not self.stimulus.png_path:
            raise ConfigError("stimulus.png_path", "required for png stimuli")
        spec = self.stimulus.spec()
        if spec is not None:
            try:
                spec.validate()
            except ValueError as exc:
                raise ConfigError("stimulus." + getattr(exc, "field", "?"), str(exc)) from exc
        try:
            ScaleLadder(tuple(self.sigmas))
        except ValueError as exc:
            raise ConfigError("ladder", str(exc)) from exc
        if not self.surround_ratio > 1:
            raise ConfigError("surround_ratio", "must be > 1")
        if not self.window_ratio > 0:
            raise ConfigError("window_ratio", "must be > 0")
        try:
            self.binarize.validate()
        except ValueError as exc:
            raise ConfigError("binarize", str(exc)) from exc
        try:
            self.hough_config().validate()
        except (ValueError, TypeError) as exc:
            raise ConfigError("hough", str(exc)) from exc
        if self.render not in ("grayscale", "diverging"):
            raise ConfigError("render", "must be grayscale or diverging")
        if self.crop is not None and (len(self.crop) != 4 or min(self.crop[2:]) < 1):
            raise ConfigError("crop", "must be [x0, y0, w, h] with positive size")
        return self

    def geometry(self) -> Tuple[Optional[int], int]:
        """Tile size and mortar height used for analysis defaults."""
        kind = self.stimulus.kind
        if kind == "cafe_wall":
            return self.stimulus.cafe_wall.tile_px, self.stimulus.cafe_wall.mortar_px
        if kind == "munsterberg":
            return self.stimulus.cafe_wall.tile_px, 0
        if kind == "bulge":
            return self.stimulus.bulge.tile_px, 0
        return self.stimulus.tile_px, self.stimulus.mortar_px

    def hough_config(self) -> HoughConfig:
        tile, mortar = self.geometry()
        if tile is None:
            return HoughConfig(**self.hough)
        return HoughConfig.for_geometry(tile, mortar, **self.hough)

    def manifest_dict(self) -> dict:
        return {
            "name": self.name,
            "stimulus": self.stimulus.to_dict(),
            "crop": list(self.crop) if self.crop else None,
            "ladder": {"sigmas": list(self.sigmas),
                       "start_stop_step": list(self.ladder_step) if self.ladder_step else None},
            "surround_ratio": self.surround_ratio,
            "window_ratio": self.window_ratio,
            "binarize": asdict(self.binarize),
            "hough": asdict(self.hough_config()),
            "render": self.render,
            "workers": self.workers,
        }


def _build(cls, data: dict, prefix: str):
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"{prefix}.{sorted(unknown)[0]}", "unknown field")
    return cls(**data)


def set_ladder(cfg: RunConfig, start: float, stop: float, step: float) -> RunConfig:
    try:
        cfg.sigmas = ScaleLadder.from_range(start, stop, step).sigmas
    except ValueError as exc:
        raise ConfigError("ladder", str(exc)) from exc
    cfg.ladder_step = (float(start), float(stop), float(step))
    return cfg


def config_from_dict(data: dict, base: Optional[RunConfig] = None) -> RunConfig:
    """Overlay a parsed mapping onto ``base`` (defaults when omitted)."""
    cfg = base if base is not None else RunConfig()
    data = dict(data or {})
    known = {"name", "stimulus", "crop", "ladder", "sigmas", "surround_ratio", "window_ratio",
             "binarize", "hough", "render", "output_dir", "workers"}
    for k in data:
        if k not in known:
            raise ConfigError(k, "unknown field")
    if "stimulus" in data:
        cfg.stimulus = stimulus_from_dict(data["stimulus"], cfg.stimulus)
    if "crop" in data:
        cfg.crop = tuple(int(v) for v in data["crop"]) if data["crop"] is not None else None
    if "ladder" in data:
        lad = data["ladder"]
        try:
            set_ladder(cfg, float(lad["start"]), float(lad["stop"]), float(lad["step"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError("ladder", "needs start, stop and step") from exc
    if "sigmas" in data:
        cfg.sigmas = tuple(float(v) for v in data["sigmas"])
        cfg.ladder_step = None
    for k in ("name", "render", "output_dir"):
        if k in data:
            setattr(cfg, k, str(data[k]))
    for k in ("surround_ratio", "window_ratio"):
        if k in data:
            setattr(cfg, k, float(data[k]))
    if "workers" in data:
        cfg.workers = int(data["workers"])
    if "binarize" in data:
        merged = {**asdict(cfg.binarize), **data["binarize"]}
        cfg.binarize = _build(BinarizePolicy, merged, "binarize")
    if "hough" in data:
        hk = {f.name for f in fields(HoughConfig)}
        for k in data["hough"]:
            if k not in hk:
                raise ConfigError(f"hough.{k}", "unknown field")
        cfg.hough = {**cfg.hough, **data["hough"]}
    return cfg.validate()


def stimulus_from_dict(data: dict, base: Optional[StimulusConfig] = None) -> StimulusConfig:
    st = replace(base) if base is not None else StimulusConfig()
    data = dict(data)
    kind = data.pop("kind", st.kind)
    if kind not in STIMULUS_KINDS:
        raise ConfigError("stimulus.kind", f"must be one of {STIMULUS_KINDS}")
    st.kind = kind
    if kind in ("cafe_wall", "munsterberg"):
        st.cafe_wall = _build(CafeWallSpec, {**asdict(st.cafe_wall), **data}, "stimulus")
    elif kind == "bulge":
        current = {k: v for k, v in asdict(st.bulge).items() if k != "dot_layout"}
        layout = st.bulge.dot_layout
        if "dot_layout" in data:
            layout = tuple(DotPlacement(*p) for p in data.pop("dot_layout"))
        st.bulge = _build(BulgeSpec, {**current, **data, "dot_layout": layout}, "stimulus")
    else:
        for k, v in data.items():
            if k not in ("png_path", "tile_px", "mortar_px"):
                raise ConfigError(f"stimulus.{k}", "unknown field for png stimulus")
            setattr(st, k, v)
    return st


def load_config(path, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError("config", "top level must be a mapping")
    return config_from_dict(data or {}, base)
