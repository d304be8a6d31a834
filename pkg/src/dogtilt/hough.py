"""Hough line segments in binary edge maps and tilt around four reference orientations.

Conventions: image origin top-left, ``x`` right, ``y`` down. Lines are
``rho = x cos(theta) + y sin(theta)`` with ``theta`` in [0, 180) degrees.
A line with normal angle ``theta`` has visual direction ``90 - theta``
(degrees counterclockwise from the +x axis as seen on screen), so horizontal
lines sit at ``theta = 90`` and vertical ones at ``theta = 0``. Deviations
are signed, positive meaning counterclockwise of the reference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

# reference name -> visual direction in degrees
REFERENCES: Dict[str, float] = {"H": 0.0, "D+": 45.0, "V": 90.0, "D-": 135.0}


@dataclass(frozen=True)
class HoughConfig:
    theta_step_deg: float = 0.25
    rho_step_px: float = 1.0
    num_peaks: int = 20
    angular_window_deg: float = 10.0
    min_length_px: float = 20.0
    fill_gap_px: float = 5.0
    # peaks below this fraction of the accumulator maximum are ignored
    peak_threshold_frac: float = 0.5
    # pixels within this distance of a peak line belong to it; None -> rho_step_px
    line_tolerance_px: Optional[float] = None

    @property
    def tolerance(self) -> float:
        return self.rho_step_px if self.line_tolerance_px is None else self.line_tolerance_px

    def validate(self) -> "HoughConfig":
        for name in ("theta_step_deg", "rho_step_px", "num_peaks", "angular_window_deg",
                     "min_length_px", "fill_gap_px"):
            if not getattr(self, name) > 0:
                raise ValueError(f"HoughConfig.{name} must be positive")
        if not 0.0 <= self.peak_threshold_frac <= 1.0:
            raise ValueError("HoughConfig.peak_threshold_frac must lie in [0, 1]")
        if not self.angular_window_deg < 22.5:
            raise ValueError("angular_window_deg must be < 22.5 so bands do not overlap")
        n = 90.0 / self.theta_step_deg
        if abs(n - round(n)) > 1e-9:
            raise ValueError("theta_step_deg must divide 90")
        return self

    @classmethod
    def for_geometry(cls, tile_px: int, mortar_px: int = 0, **kw) -> "HoughConfig":
        """Segment length and gap defaults scaled to the stimulus tiles."""
        gap = 3 * mortar_px if mortar_px > 0 else tile_px / 10
        kw.setdefault("min_length_px", 1.5 * tile_px)
        kw.setdefault("fill_gap_px", float(gap))
        return cls(**kw)


@dataclass
class Accumulator:
    votes: np.ndarray  # (n_theta, n_rho) int
    thetas_deg: np.ndarray
    cos: np.ndarray
    sin: np.ndarray
    rho_step: float
    rho_offset: int  # bin index of centred rho == 0
    center: Tuple[float, float]  # (cx, cy) voting origin

    def rho_of(self, bin_index: int) -> float:
        """Centred rho of a bin."""
        return (bin_index - self.rho_offset) * self.rho_step

    def to_top_left(self, theta_index: int, rho_centred: float) -> float:
        cx, cy = self.center
        return rho_centred + cx * self.cos[theta_index] + cy * self.sin[theta_index]


def _trig_table(n_theta: int, step: float) -> Tuple[np.ndarray, np.ndarray]:
    # second half derived from the first so that theta and theta + 90 are
    # exact quarter-turn images of each other
    half = n_theta // 2
    t = np.radians(np.arange(half) * step)
    c, s = np.cos(t), np.sin(t)
    return np.concatenate((c, -s)), np.concatenate((s, c))


def _round_half_away(v: np.ndarray) -> np.ndarray:
    # odd-symmetric, and unlike half-to-even never merges two pixel rows into one bin
    return np.copysign(np.floor(np.abs(v) + 0.5), v).astype(np.int64)


def _centred(binary: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    h, w = binary.shape
    ys, xs = np.nonzero(binary)
    return xs, ys, xs - (w - 1) / 2.0, ys - (h - 1) / 2.0


def hough_accumulate(binary: np.ndarray, config: HoughConfig = HoughConfig()) -> Accumulator:
    """Vote every foreground pixel into the (theta, rho) accumulator.

    Votes are cast with rho measured from the image centre and rounded
    half away from zero, which keeps the accumulator exactly equivariant under
    quarter-turn rotations of the input. Reported segments convert rho back
    to the top-left origin.
    """
    config.validate()
    binary = np.asarray(binary, dtype=bool)
    if binary.size == 0:
        raise ValueError("hough_accumulate expects a nonempty plane")
    h, w = binary.shape
    n_theta = int(round(180.0 / config.theta_step_deg))
    thetas = np.arange(n_theta) * config.theta_step_deg
    cos, sin = _trig_table(n_theta, config.theta_step_deg)
    half_diag = math.hypot(h - 1, w - 1) / 2.0
    offset = int(math.ceil(half_diag / config.rho_step_px)) + 1
    n_rho = 2 * offset + 1  # symmetric about rho = 0 so theta wraps by mirroring rho
    votes = np.zeros((n_theta, n_rho), dtype=np.int64)
    _, _, a, b = _centred(binary)
    if a.size:
        for i in range(n_theta):
            idx = _round_half_away((a * cos[i] + b * sin[i]) / config.rho_step_px)
            votes[i] = np.bincount(idx + offset, minlength=n_rho)
    return Accumulator(votes, thetas, cos, sin, config.rho_step_px, offset,
                       ((w - 1) / 2.0, (h - 1) / 2.0))


def band_of(theta_deg: float, window_deg: float) -> Optional[Tuple[str, float]]:
    """Reference orientation whose band holds ``theta``, and the signed deviation."""
    for name, ref in REFERENCES.items():
        dev = _wrap180((90.0 - ref) - theta_deg)
        if abs(dev) <= window_deg + 1e-9:
            return name, dev
    return None


def _wrap180(a: float) -> float:
    """Wrap an orientation difference into [-90, 90)."""
    return (a + 90.0) % 180.0 - 90.0


def tie_rank(acc: Accumulator) -> np.ndarray:
    """Rank of every accumulator cell in the tie-breaking order (lower wins).

    Cells order by theta measured from the nearest reference normal angle,
    then by rho. For the vertical band, which straddles the 0/180 wrap,
    theta runs continuously through the wrap and rho is mirrored on the
    wrapped side, so a quarter-turn of the image maps the order of one band
    onto the order of its partner band.
    """
    n_t, n_r = acc.votes.shape
    normals = np.array([90.0 - ref for ref in REFERENCES.values()]) % 180.0
    diff = (acc.thetas_deg[:, None] - normals[None, :] + 90.0) % 180.0 - 90.0
    rel = diff[np.arange(n_t), np.argmin(np.abs(diff), axis=1)]
    # theta past 90 that is closer to 180 belongs to the far side of the wrap
    wrapped = acc.thetas_deg - rel >= 180.0 - 1e-9
    rho_idx = np.arange(n_r) - acc.rho_offset
    rho_key = np.where(wrapped[:, None], -rho_idx[None, :], rho_idx[None, :])
    t_key = np.broadcast_to(rel[:, None], (n_t, n_r))
    t_idx = np.broadcast_to(np.arange(n_t)[:, None], (n_t, n_r))
    order = np.lexsort((t_idx.ravel(), rho_key.ravel(), t_key.ravel()))
    rank = np.empty(n_t * n_r, dtype=np.int64)
    rank[order] = np.arange(n_t * n_r)
    return rank.reshape(n_t, n_r)


def _pad_wrapped(a: np.ndarray, fill: int) -> np.ndarray:
    # theta wraps with rho mirrored: row -1 is the last row reversed
    n_t, n_r = a.shape
    pad = np.full((n_t + 2, n_r + 2), fill, dtype=np.int64)
    pad[1:-1, 1:-1] = a
    pad[0, 1:-1] = a[-1, ::-1]
    pad[-1, 1:-1] = a[0, ::-1]
    return pad


def local_maxima(acc: Accumulator, rank: Optional[np.ndarray] = None) -> np.ndarray:
    """Boolean mask of strict 3x3 local maxima under a total order.

    Cells compare by votes, equal votes going to the lower :func:`tie_rank`.
    Theta wraps around: row ``-1`` is the last row with rho mirrored.
    """
    v = acc.votes
    if rank is None:
        rank = tie_rank(acc)
    n_t, n_r = v.shape
    pv = _pad_wrapped(v, -1)
    pr = _pad_wrapped(rank, np.iinfo(np.int64).max)
    peak = v > 0
    for dt in (-1, 0, 1):
        for dr in (-1, 0, 1):
            if dt == 0 and dr == 0:
                continue
            nv = pv[1 + dt:1 + dt + n_t, 1 + dr:1 + dr + n_r]
            nr = pr[1 + dt:1 + dt + n_t, 1 + dr:1 + dr + n_r]
            peak &= (v > nv) | ((v == nv) & (rank < nr))
    return peak


@dataclass(frozen=True)
class LineSegment:
    theta_deg: float
    rho_px: float
    p0: Tuple[int, int]  # (x, y)
    p1: Tuple[int, int]
    length_px: float
    ref_orientation: str
    deviation_deg: float
    votes: int

    @property
    def midpoint(self) -> Tuple[float, float]:
        return ((self.p0[0] + self.p1[0]) / 2.0, (self.p0[1] + self.p1[1]) / 2.0)


def _trace(binary: np.ndarray, acc: Accumulator, theta_index: int, rho: float, tol: float,
           fill_gap: float) -> List[Tuple[Tuple[int, int], Tuple[int, int], float]]:
    """Runs of foreground pixels within ``tol`` of a line, split at gaps > ``fill_gap``.

    Gaps and lengths are measured along the line's visual direction, which
    also orders the endpoints. Each run is reported by its two extreme pixels
    (ties: closest to the line, then smallest y, then smallest x) and its
    projected extent.
    """
    xs, ys, a, b = _centred(binary)
    c, s = acc.cos[theta_index], acc.sin[theta_index]
    dist = np.abs(a * c + b * s - rho)
    on = dist <= tol + 1e-9
    if not on.any():
        return []
    xs, ys, dist = xs[on], ys[on], dist[on]
    # increases along the visual direction (sin t, -cos t)
    along = a[on] * s - b[on] * c
    order = np.lexsort((xs, ys, dist, along))
    xs, ys, dist, along = xs[order], ys[order], dist[order], along[order]
    breaks = np.flatnonzero(np.diff(along) > fill_gap)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [xs.size - 1]))
    runs = []
    for i0, i1 in zip(starts, ends):
        # last pixel: among those sharing the maximal projection pick the closest to the line
        tail = np.flatnonzero(along[i0:i1 + 1] == along[i1]) + i0
        j = tail[np.lexsort((xs[tail], ys[tail], dist[tail]))[0]]
        runs.append(((int(xs[i0]), int(ys[i0])), (int(xs[j]), int(ys[j])),
                     float(along[i1] - along[i0])))
    return runs


def extract_segments(acc: Accumulator, binary: np.ndarray,
                     config: HoughConfig = HoughConfig()) -> List[LineSegment]:
    """Line segments for the strongest peaks inside each reference band.

    Up to ``num_peaks`` local maxima per band, strongest first, counting only
    peaks with at least ``peak_threshold_frac`` of the largest vote. Each peak line
    collects the foreground pixels within ``tolerance`` of it; runs separated by more
    than ``fill_gap_px`` are split and runs shorter than ``min_length_px`` are
    dropped.
    """
    config.validate()
    binary = np.asarray(binary, dtype=bool)
    rank = tie_rank(acc)
    peaks = local_maxima(acc, rank)
    peaks &= acc.votes >= config.peak_threshold_frac * acc.votes.max()
    ti, ri = np.nonzero(peaks)
    if ti.size == 0:
        return []
    votes = acc.votes[ti, ri]
    # strongest first, ties in tie_rank order
    order = np.lexsort((rank[ti, ri], -votes))
    per_band: Dict[str, int] = {k: 0 for k in REFERENCES}
    segments: List[LineSegment] = []
    for k in order:
        theta = float(acc.thetas_deg[ti[k]])
        band = band_of(theta, config.angular_window_deg)
        if band is None or per_band[band[0]] >= config.num_peaks:
            continue
        per_band[band[0]] += 1
        rho = acc.rho_of(int(ri[k]))
        rho_tl = acc.to_top_left(int(ti[k]), rho)
        for p0, p1, length in _trace(binary, acc, int(ti[k]), rho, config.tolerance,
                                     config.fill_gap_px):
            if length >= config.min_length_px - 1e-9:
                segments.append(LineSegment(theta, rho_tl, p0, p1, length,
                                            band[0], band[1], int(votes[k])))
    return segments


def detect_segments(binary: np.ndarray, config: HoughConfig = HoughConfig()) -> List[LineSegment]:
    return extract_segments(hough_accumulate(binary, config), binary, config)


@dataclass(frozen=True)
class TiltRow:
    sigma_c: float
    ref_orientation: str
    count: int
    mean_abs_deviation_deg: float
    max_length_px: float
    longest_deviation_deg: float


def summarize(sigma_c: float, segments: Sequence[LineSegment]) -> List[TiltRow]:
    rows = []
    for ref in REFERENCES:
        segs = [s for s in segments if s.ref_orientation == ref]
        if not segs:
            rows.append(TiltRow(sigma_c, ref, 0, 0.0, 0.0, 0.0))
            continue
        # first longest wins, segments are already in deterministic order
        longest = max(segs, key=lambda s: s.length_px)
        rows.append(TiltRow(sigma_c, ref, len(segs),
                            float(np.mean([abs(s.deviation_deg) for s in segs])),
                            longest.length_px, longest.deviation_deg))
    return rows


@dataclass
class TiltReport:
    rows: List[TiltRow]
    segments: Dict[float, List[LineSegment]]

    def row(self, sigma_c: float, ref: str) -> TiltRow:
        for r in self.rows:
            if r.sigma_c == sigma_c and r.ref_orientation == ref:
                return r
        raise KeyError((sigma_c, ref))


def tilt_report(stack, config: HoughConfig = HoughConfig()) -> TiltReport:
    """Per-scale, per-reference tilt statistics of a binarized edge-map stack."""
    rows: List[TiltRow] = []
    segments: Dict[float, List[LineSegment]] = {}
    for e in stack:
        if e.binary is None:
            raise RuntimeError(f"stack entry sigma_c={e.sigma_c} has not been binarized")
        segs = detect_segments(e.binary, config)
        segments[e.sigma_c] = segs
        rows.extend(summarize(e.sigma_c, segs))
    return TiltReport(rows, segments)
