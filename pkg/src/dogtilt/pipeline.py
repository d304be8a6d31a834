"""Stimulus -> DoG stack -> binary maps -> Hough tilt -> reports, with a run manifest."""
from __future__ import annotations

import platform
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import PIL
import scipy

from . import __version__
from .config import RunConfig
from .dog import PADDING_MODE, EdgeMapStack, StackEntry, edge_map_stack, window_size
from .edges import binarize_stack, components_touching, grouping_stats
from .export import (SEGMENT_COLUMNS, read_png, render_binary, render_overlay, render_response,
                     segment_rows, sigma_tag, write_manifest, write_png, write_rows,
                     write_tilt_csv)
from .hough import TiltReport, tilt_report
from .stimuli import crop, generate_bulge, generate_cafe_wall, generate_munsterberg

GROUPING_COLUMNS = ["sigma_c", "component_count", "largest_component_px", "multi_row_components",
                    "mortar_linked_components", "dot_components", "smallest_dot_component_px"]


@dataclass
class Geometry:
    shape: Tuple[int, int]
    row_bands: List[Tuple[int, int]]
    mortar_bands: List[Tuple[int, int]]
    tile_px: Optional[int] = None
    dot_mask: Optional[np.ndarray] = None


def _shift_bands(bands, y0: int, h: int):
    out = []
    for a, b in bands:
        a, b = max(a - y0, 0), min(b - y0, h)
        if b > a:
            out.append((a, b))
    return out


def make_stimulus(cfg: RunConfig) -> Tuple[np.ndarray, Geometry]:
    st = cfg.stimulus
    if st.kind in ("cafe_wall", "munsterberg"):
        spec = st.cafe_wall if st.kind == "cafe_wall" else replace(st.cafe_wall, mortar_px=0)
        img = generate_cafe_wall(spec) if st.kind == "cafe_wall" else generate_munsterberg(spec)
        geo = Geometry(img.shape, spec.row_bands(), spec.mortar_bands(), spec.tile_px)
    elif st.kind == "bulge":
        spec = st.bulge
        img = generate_bulge(spec)
        t = spec.tile_px
        geo = Geometry(img.shape, [(r * t, (r + 1) * t) for r in range(spec.board_rows)], [],
                       t, spec.dot_mask())
    else:
        img = read_png(st.png_path)
        geo = Geometry(img.shape, [(0, img.shape[0])], [], st.tile_px)
    if cfg.crop is not None:
        x0, y0, w, h = cfg.crop
        img = crop(img, x0, y0, w, h)
        geo = Geometry(img.shape, _shift_bands(geo.row_bands, y0, h),
                       _shift_bands(geo.mortar_bands, y0, h), geo.tile_px,
                       None if geo.dot_mask is None else crop(geo.dot_mask, x0, y0, w, h))
    return img, geo


def compute_stack(img: np.ndarray, cfg: RunConfig) -> EdgeMapStack:
    return edge_map_stack(img, cfg.sigmas, cfg.surround_ratio, cfg.window_ratio, cfg.workers)


def grouping_table(stack: EdgeMapStack, geo: Geometry) -> List[dict]:
    rows = []
    for e in stack:
        g = grouping_stats(e.binary, geo.row_bands, geo.shape, e.sigma_c, geo.mortar_bands,
                           geo.tile_px)
        row = asdict(g)
        row.update(dot_components=None, smallest_dot_component_px=None)
        if geo.dot_mask is not None:
            areas = components_touching(e.binary, geo.dot_mask)
            row.update(dot_components=len(areas),
                       smallest_dot_component_px=min(areas) if areas else 0)
        rows.append(row)
    return rows


def analyze(stack: EdgeMapStack, cfg: RunConfig, geo: Geometry) -> Tuple[TiltReport, List[dict]]:
    binarize_stack(stack, cfg.binarize)
    return tilt_report(stack, cfg.hough_config()), grouping_table(stack, geo)


def tool_versions() -> dict:
    return {"dogtilt": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "pillow": PIL.__version__, "python": platform.python_version()}


class RunFailed(RuntimeError):
    def __init__(self, message: str, manifest: dict):
        super().__init__(message)
        self.manifest = manifest


STAGES = ("stimulus", "dog", "analyze")


def run_pipeline(cfg: RunConfig, out_dir=None, stages: Sequence[str] = STAGES,
                 stack: Optional[EdgeMapStack] = None) -> dict:
    """Execute the requested stages and write every artifact plus ``manifest.json``.

    ``stack`` lets ``analyze`` start from a previously saved stack. On an I/O
    error the manifest is still written with ``status: failed`` and the files
    that did get written, then :class:`RunFailed` is raised.
    """
    cfg.validate()
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    artifacts: List[str] = []
    manifest = {"tool": tool_versions(), "config": cfg.manifest_dict(),
                "padding_mode": PADDING_MODE, "stages": list(stages),
                "artifacts": artifacts, "status": "running"}

    def emit(rel: str, writer):
        writer(out / rel)
        artifacts.append(rel)

    try:
        out.mkdir(parents=True, exist_ok=True)
        img, geo = make_stimulus(cfg)
        manifest["stimulus_shape"] = [int(img.shape[1]), int(img.shape[0])]
        manifest["geometry"] = {"row_bands": geo.row_bands, "mortar_bands": geo.mortar_bands,
                                "tile_px": geo.tile_px}
        stem = cfg.name
        if "stimulus" in stages:
            emit(f"{stem}_stimulus.png", lambda p: write_png(p, img))
        if "dog" in stages or stack is None and "analyze" in stages:
            stack = compute_stack(img, cfg)
        if stack is not None:
            manifest["scales"] = [{"sigma_c": e.sigma_c,
                                   "window_px": window_size(e.sigma_c, cfg.window_ratio)}
                                  for e in stack]
        if "dog" in stages:
            for e in stack:
                emit(f"response/{stem}_{sigma_tag(e.sigma_c)}.png",
                     lambda p, e=e: write_png(p, render_response(e.response, cfg.render)))
            emit("responses.npz", lambda p: save_stack(p, stack))
        if "analyze" in stages:
            report, grouping = analyze(stack, cfg, geo)
            for e in stack:
                tag = sigma_tag(e.sigma_c)
                emit(f"binary/{stem}_{tag}_binary.png",
                     lambda p, e=e: write_png(p, render_binary(e.binary)))
                emit(f"overlay/{stem}_{tag}_hough.png",
                     lambda p, e=e: _save_image(p, render_overlay(e.binary,
                                                                  report.segments[e.sigma_c])))
            emit("tilt.csv", lambda p: write_tilt_csv(p, report.rows))
            emit("grouping.csv", lambda p: write_rows(p, GROUPING_COLUMNS, grouping))
            seg_rows = [r for s in stack.sigmas for r in segment_rows(s, report.segments[s])]
            emit("segments.csv", lambda p: write_rows(p, SEGMENT_COLUMNS, seg_rows))
        manifest["status"] = "ok"
    except OSError as exc:
        manifest["status"] = "failed"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        manifest["partial"] = True
        try:
            write_manifest(out / "manifest.json", manifest)
        except OSError:
            pass
        raise RunFailed(str(exc), manifest) from exc
    write_manifest(out / "manifest.json", manifest)
    return manifest


def _save_image(path: Path, im) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    im.save(path)


def save_stack(path, stack: EdgeMapStack) -> None:
    np.savez_compressed(path, sigmas=np.array(stack.sigmas),
                        ratios=np.array([stack.surround_ratio, stack.window_ratio]),
                        **{f"plane_{i}": e.response for i, e in enumerate(stack)})


def load_stack(path) -> EdgeMapStack:
    with np.load(path) as z:
        sigmas = [float(v) for v in z["sigmas"]]
        s, h = (float(v) for v in z["ratios"])
        entries = [StackEntry(sg, z[f"plane_{i}"]) for i, sg in enumerate(sigmas)]
    return EdgeMapStack(s, h, entries)
