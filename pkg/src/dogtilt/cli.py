"""Command-line front end: ``dogtilt {generate,dog,analyze,run,presets}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .config import ConfigError, RunConfig, config_from_dict, load_config, set_ladder
from .export import read_csv
from .pipeline import RunFailed, load_stack, run_pipeline
from .presets import get_preset, list_presets

STAGES = {
    "generate": ("stimulus",),
    "dog": ("stimulus", "dog"),
    "analyze": ("analyze",),
    "run": ("stimulus", "dog", "analyze"),
}


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _ladder(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ladder must look like start:stop:step")
    return tuple(float(p) for p in parts)


def _crop(text: str):
    vals = [int(v) for v in text.split(",")]
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("crop must be x0,y0,w,h")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dogtilt", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("presets", help="list bundled presets")
    for name, help_ in (("generate", "write the stimulus PNG only"),
                        ("dog", "write the multiscale DoG stack"),
                        ("analyze", "binarize + Hough tilt + grouping reports"),
                        ("run", "full pipeline")):
        sp = sub.add_parser(name, help=help_)
        src = sp.add_argument_group("configuration")
        src.add_argument("--preset", help="start from a bundled preset")
        src.add_argument("--config", type=Path, help="YAML config file (applied after --preset)")
        src.add_argument("--out", help="output directory")
        src.add_argument("--name", help="file stem for artifacts")
        st = sp.add_argument_group("stimulus")
        st.add_argument("--stimulus", choices=["cafe_wall", "munsterberg", "bulge", "png"])
        st.add_argument("--png", dest="png_path", help="external grayscale PNG")
        for flag, typ in (("rows", int), ("cols", int), ("tile-px", int), ("mortar-px", int),
                          ("mortar-lum", float), ("phase-frac", float), ("lum-dark", float),
                          ("lum-light", float), ("board-rows", int), ("board-cols", int),
                          ("dot-px", int)):
            st.add_argument(f"--{flag}", type=typ)
        st.add_argument("--crop", type=_crop, help="x0,y0,w,h")
        dg = sp.add_argument_group("model")
        dg.add_argument("--ladder", type=_ladder, help="start:stop:step (inclusive)")
        dg.add_argument("--sigmas", type=_floats, help="explicit center scales, e.g. 2,4")
        dg.add_argument("--surround-ratio", type=float)
        dg.add_argument("--window-ratio", type=float)
        dg.add_argument("--render", choices=["grayscale", "diverging"])
        dg.add_argument("--workers", type=int)
        an = sp.add_argument_group("analysis")
        an.add_argument("--binarize-mode", choices=["sign", "fraction"])
        an.add_argument("--threshold-frac", type=float)
        for flag, typ in (("theta-step-deg", float), ("rho-step-px", float), ("num-peaks", int),
                          ("angular-window-deg", float), ("min-length-px", float),
                          ("fill-gap-px", float), ("line-tolerance-px", float),
                          ("peak-threshold-frac", float)):
            an.add_argument(f"--{flag}", type=typ)
        if name == "analyze":
            sp.add_argument("--stack", type=Path,
                            help="directory written by `dogtilt dog` (reuses responses.npz)")
    return p


def config_from_args(args) -> RunConfig:
    cfg = get_preset(args.preset) if args.preset else RunConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    data: dict = {}
    stim = {}
    if args.stimulus:
        stim["kind"] = args.stimulus
    for key in ("rows", "cols", "tile_px", "mortar_px", "mortar_lum", "phase_frac", "lum_dark",
                "lum_light", "board_rows", "board_cols", "dot_px", "png_path"):
        v = getattr(args, key)
        if v is not None:
            stim[key] = v
    if stim:
        data["stimulus"] = stim
    if args.crop is not None:
        data["crop"] = args.crop
    if args.sigmas is not None:
        data["sigmas"] = args.sigmas
    for key in ("surround_ratio", "window_ratio", "render", "workers", "name"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    if args.out:
        data["output_dir"] = args.out
    binz = {}
    if args.binarize_mode:
        binz["mode"] = args.binarize_mode
    if args.threshold_frac is not None:
        binz["threshold_frac"] = args.threshold_frac
    if binz:
        data["binarize"] = binz
    hough = {k: getattr(args, k) for k in ("theta_step_deg", "rho_step_px", "num_peaks",
                                           "angular_window_deg", "min_length_px", "fill_gap_px",
                                           "line_tolerance_px", "peak_threshold_frac")
             if getattr(args, k) is not None}
    if hough:
        data["hough"] = hough
    cfg = config_from_dict(data, cfg)
    if args.ladder is not None:
        set_ladder(cfg, *args.ladder)
    return cfg.validate()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "presets":
        for name, desc in list_presets():
            print(f"{name:24s} {desc}")
        return 0
    try:
        cfg = config_from_args(args)
    except (ConfigError, KeyError) as exc:
        print(f"dogtilt: invalid config: {exc}", file=sys.stderr)
        return 2
    stack = None
    if args.command == "analyze" and getattr(args, "stack", None):
        try:
            stack = load_stack(args.stack / "responses.npz")
        except OSError as exc:
            print(f"dogtilt: cannot read stack: {exc}", file=sys.stderr)
            return 1
        if (stack.sigmas != list(cfg.sigmas) or stack.surround_ratio != cfg.surround_ratio
                or stack.window_ratio != cfg.window_ratio):
            print("dogtilt: invalid config: ladder or ratios differ from the saved stack",
                  file=sys.stderr)
            return 2
    try:
        manifest = run_pipeline(cfg, stages=STAGES[args.command], stack=stack)
    except RunFailed as exc:
        print(f"dogtilt: run failed: {exc}", file=sys.stderr)
        return 1
    out = Path(cfg.output_dir)
    print(f"wrote {len(manifest['artifacts'])} artifacts to {out}")
    if "tilt.csv" in manifest["artifacts"]:
        for row in read_csv(out / "tilt.csv"):
            if row["count"] != "0":
                print("  sigma_c={sigma_c:>10} {ref_orientation:>2} n={count:>3} "
                      "mean|dev|={mean_abs_deviation_deg}".format(**row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
