"""Multiscale Difference-of-Gaussians retinal filtering and Hough tilt analysis
for tile illusions (Cafe Wall, Munsterberg, Complex Bulge)."""

__version__ = "0.1.0"
