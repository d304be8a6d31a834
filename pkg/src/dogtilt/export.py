"""PNG, CSV and manifest writers."""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, fields
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np
from PIL import Image, ImageDraw

from .hough import LineSegment, TiltRow


def to_uint8(img: np.ndarray) -> np.ndarray:
    """Luminance in [0, 1] -> ``round(255 v)``."""
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def write_png(path, img: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arr = img if img.dtype == np.uint8 else to_uint8(img)
    Image.fromarray(arr).save(path)
    return path


def read_png(path) -> np.ndarray:
    """Grayscale PNG -> float luminance in [0, 1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"), dtype=np.float64)
    return arr / 255.0


def minmax(plane: np.ndarray) -> np.ndarray:
    lo, hi = float(plane.min()), float(plane.max())
    if hi - lo <= 0:
        return np.zeros(plane.shape)
    return (plane - lo) / (hi - lo)


def diverging(plane: np.ndarray) -> np.ndarray:
    """Blue-white-red RGB rendering symmetric about zero."""
    m = float(np.abs(plane).max()) or 1.0
    v = np.clip(plane / m, -1.0, 1.0)
    pos, neg = np.clip(v, 0, 1), np.clip(-v, 0, 1)
    rgb = np.stack([1 - neg, 1 - np.maximum(pos, neg), 1 - pos], axis=-1)
    return to_uint8(rgb)


def render_response(plane: np.ndarray, mode: str = "grayscale") -> np.ndarray:
    if mode == "grayscale":
        return to_uint8(minmax(plane))
    if mode == "diverging":
        return diverging(plane)
    raise ValueError(f"unknown render mode {mode!r}")


def render_binary(binary: np.ndarray) -> np.ndarray:
    return np.where(binary, 255, 0).astype(np.uint8)


def render_overlay(binary: np.ndarray, segments: Sequence[LineSegment]) -> Image.Image:
    """Segments in green over the binary map, longest per band in blue,
    start points marked red and end points yellow."""
    base = np.where(binary, 110, 0).astype(np.uint8)
    im = Image.fromarray(np.stack([base] * 3, axis=-1))
    draw = ImageDraw.Draw(im)
    longest = {}
    for s in segments:
        if s.ref_orientation not in longest or s.length_px > longest[s.ref_orientation].length_px:
            longest[s.ref_orientation] = s
    top = {id(s) for s in longest.values()}
    for s in segments:
        draw.line([s.p0, s.p1], fill=(0, 90, 255) if id(s) in top else (0, 220, 0), width=1)
    for s in segments:
        for (x, y), col in ((s.p0, (255, 0, 0)), (s.p1, (255, 230, 0))):
            draw.line([(x - 2, y), (x + 2, y)], fill=col)
            draw.line([(x, y - 2), (x, y + 2)], fill=col)
    return im


def fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return "" if v is None else str(v)


TILT_COLUMNS = ["sigma_c", "ref_orientation", "count", "mean_abs_deviation_deg",
                "max_length_px", "longest_deviation_deg"]


def write_tilt_csv(path, rows: Iterable[TiltRow]) -> Path:
    return write_rows(path, TILT_COLUMNS, (asdict(r) for r in rows))


SEGMENT_COLUMNS = ["sigma_c", "ref_orientation", "theta_deg", "rho_px", "x0", "y0", "x1", "y1",
                   "length_px", "deviation_deg", "votes"]


def segment_rows(sigma_c: float, segments: Sequence[LineSegment]) -> List[dict]:
    return [dict(sigma_c=sigma_c, ref_orientation=s.ref_orientation, theta_deg=s.theta_deg,
                 rho_px=s.rho_px, x0=s.p0[0], y0=s.p0[1], x1=s.p1[0], y1=s.p1[1],
                 length_px=s.length_px, deviation_deg=s.deviation_deg, votes=s.votes)
            for s in segments]


def write_rows(path, columns: Sequence[str], rows: Iterable[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in columns])
    return path


def read_csv(path) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def sigma_tag(sigma: float) -> str:
    return f"sigma{sigma:g}"


def dataclass_dict(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in fields(obj)}
