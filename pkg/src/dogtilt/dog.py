"""Center-surround Difference-of-Gaussians kernels and multiscale edge-map stacks."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np
from scipy.ndimage import correlate1d

PADDING_MODE = "replicate"


class InvalidParamsError(ValueError):
    pass


def window_size(sigma_c: float, window_ratio: float) -> int:
    """Odd kernel side ``round(h * sigma_c) + 1``, bumped up by one if even."""
    if sigma_c <= 0 or window_ratio <= 0:
        raise InvalidParamsError("sigma_c and window_ratio must be positive")
    side = math.floor(window_ratio * sigma_c + 0.5) + 1
    if side % 2 == 0:
        side += 1
    return side


@dataclass(frozen=True)
class DogParams:
    sigma_c: float
    surround_ratio: float = 2.0
    window_ratio: float = 8.0

    @property
    def sigma_s(self) -> float:
        return self.surround_ratio * self.sigma_c

    @property
    def side(self) -> int:
        return window_size(self.sigma_c, self.window_ratio)

    def validate(self) -> "DogParams":
        if not self.sigma_c > 0:
            raise InvalidParamsError(f"sigma_c must be > 0, got {self.sigma_c}")
        if not self.surround_ratio > 1:
            raise InvalidParamsError(f"surround_ratio must be > 1, got {self.surround_ratio}")
        if not self.window_ratio > 0:
            raise InvalidParamsError(f"window_ratio must be > 0, got {self.window_ratio}")
        if self.side < 3:
            raise InvalidParamsError(f"window side {self.side} < 3")
        return self


def gaussian_profile(sigma: float, radius: int) -> np.ndarray:
    """Unit-sum Gaussian sampled at integer offsets -radius..radius."""
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return g / g.sum()


@dataclass(frozen=True)
class DogKernel:
    params: DogParams
    center: np.ndarray = field(repr=False)
    surround: np.ndarray = field(repr=False)

    @property
    def side(self) -> int:
        return self.center.size

    @property
    def radius(self) -> int:
        return self.side // 2

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.center, self.center) - np.outer(self.surround, self.surround)


def build_dog_kernel(params: DogParams) -> DogKernel:
    """Zero-sum DoG kernel: unit-sum center Gaussian minus unit-sum surround.

    Both 2-D Gaussians are sampled over the square window and normalized to
    unit sum there. A sampled isotropic Gaussian normalized over a square is
    the outer product of its normalized 1-D profiles, so the kernel is stored
    as the two profiles and ``weights`` expands them.
    """
    params.validate()
    r = params.side // 2
    return DogKernel(params, gaussian_profile(params.sigma_c, r),
                     gaussian_profile(params.sigma_s, r))


def surround_axis_mass(params: DogParams) -> float:
    """Fraction of the surround Gaussian's 1-D profile that falls inside the window.

    Sum of the continuous density sampled at the window's integer offsets,
    before any renormalization.
    """
    r = params.side // 2
    x = np.arange(-r, r + 1, dtype=np.float64)
    ss = params.sigma_s
    return float(np.sum(np.exp(-x * x / (2 * ss * ss))) / (math.sqrt(2 * math.pi) * ss))


def surround_window_mass(params: DogParams) -> float:
    """Fraction of the 2-D surround Gaussian inside the square window."""
    return surround_axis_mass(params) ** 2


def _blur(img: np.ndarray, profile: np.ndarray) -> np.ndarray:
    out = correlate1d(img, profile, axis=1, mode="nearest")
    return correlate1d(out, profile, axis=0, mode="nearest")


def convolve(img: np.ndarray, kernel: DogKernel) -> np.ndarray:
    """Same-size DoG response with replicate (clamp-to-edge) borders.

    Computed as the difference of two separable Gaussian blurs. The kernel is
    point symmetric so correlation and convolution coincide. Output is not
    clipped.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("convolve expects a nonempty 2-D image")
    return _blur(img, kernel.center) - _blur(img, kernel.surround)


@dataclass(frozen=True)
class ScaleLadder:
    sigmas: tuple

    def __post_init__(self):
        s = tuple(float(v) for v in self.sigmas)
        if not s:
            raise InvalidParamsError("scale ladder is empty")
        if any(v <= 0 for v in s):
            raise InvalidParamsError("scale ladder values must be positive")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise InvalidParamsError("scale ladder must be strictly increasing")
        object.__setattr__(self, "sigmas", s)

    @classmethod
    def from_range(cls, start: float, stop: float, step: float) -> "ScaleLadder":
        """Inclusive ladder ``start, start+step, ..., <= stop``."""
        if step <= 0:
            raise InvalidParamsError("ladder step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return cls(tuple(round(start + i * step, 10) for i in range(max(n, 0))))

    def __iter__(self):
        return iter(self.sigmas)

    def __len__(self):
        return len(self.sigmas)


@dataclass
class StackEntry:
    sigma_c: float
    response: np.ndarray
    binary: Optional[np.ndarray] = None


@dataclass
class EdgeMapStack:
    surround_ratio: float
    window_ratio: float
    entries: List[StackEntry]

    @property
    def sigmas(self) -> List[float]:
        return [e.sigma_c for e in self.entries]

    def __getitem__(self, sigma_c: float) -> StackEntry:
        for e in self.entries:
            if e.sigma_c == sigma_c:
                return e
        raise KeyError(sigma_c)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def edge_map_stack(img: np.ndarray, ladder: Iterable[float], surround_ratio: float = 2.0,
                   window_ratio: float = 8.0, workers: int = 1) -> EdgeMapStack:
    """DoG response planes of ``img`` at every center scale of ``ladder``."""
    if not isinstance(ladder, ScaleLadder):
        ladder = ScaleLadder(tuple(ladder))
    kernels = [build_dog_kernel(DogParams(s, surround_ratio, window_ratio)) for s in ladder]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            planes = list(ex.map(lambda k: convolve(img, k), kernels))
    else:
        planes = [convolve(img, k) for k in kernels]
    entries = [StackEntry(s, p) for s, p in zip(ladder, planes)]
    return EdgeMapStack(surround_ratio, window_ratio, entries)


def total_variation(plane: np.ndarray) -> float:
    """Anisotropic total variation: sum of absolute neighbour differences."""
    return float(np.abs(np.diff(plane, axis=0)).sum() + np.abs(np.diff(plane, axis=1)).sum())
