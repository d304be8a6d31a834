"""Sweep one Cafe Wall parameter and report the horizontal tilt per scale.

Uses the desk-scale wall (50 px tiles) by default. Examples:

    python3 scripts/tilt_sweep.py mortar_lum 0 0.25 0.5 0.75 1
    python3 scripts/tilt_sweep.py phase_frac 0 0.1 0.25 0.5
    python3 scripts/tilt_sweep.py mortar_px 0 1 2 4 --sigmas 1 2 3
"""
import argparse
import dataclasses

from dogtilt.dog import edge_map_stack
from dogtilt.edges import BinarizePolicy, binarize_stack
from dogtilt.hough import HoughConfig, tilt_report
from dogtilt.stimuli import CafeWallSpec, generate_cafe_wall

INT_FIELDS = {"rows", "cols", "tile_px", "mortar_px"}


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("field", choices=[f.name for f in dataclasses.fields(CafeWallSpec)])
    ap.add_argument("values", nargs="+", type=float)
    ap.add_argument("--sigmas", nargs="+", type=float, default=[1.0, 2.0, 3.0])
    ap.add_argument("--tile-px", type=int, default=50)
    ap.add_argument("--surround-ratio", type=float, default=2.0)
    args = ap.parse_args()

    base = CafeWallSpec(tile_px=args.tile_px, mortar_px=max(1, args.tile_px // 25))
    print(f"{args.field:>12} " + " ".join(f"{'s=' + format(s, 'g'):>14}" for s in args.sigmas))
    for v in args.values:
        v = int(v) if args.field in INT_FIELDS else v
        spec = dataclasses.replace(base, **{args.field: v})
        img = generate_cafe_wall(spec)
        stack = binarize_stack(edge_map_stack(img, args.sigmas, args.surround_ratio),
                               BinarizePolicy())
        gap = 3 * spec.mortar_px if spec.mortar_px else spec.tile_px / 10
        cfg = HoughConfig(min_length_px=1.5 * spec.tile_px, fill_gap_px=float(gap))
        rep = tilt_report(stack, cfg)
        cells = []
        for s in args.sigmas:
            r = rep.row(s, "H")
            cells.append(f"{r.count:3d} / {r.mean_abs_deviation_deg:6.3f}" if r.count else "-")
        print(f"{v!s:>12} " + " ".join(f"{c:>14}" for c in cells))
    print("cells: H segment count / mean |deviation| in degrees")


if __name__ == "__main__":
    main()
