"""Run the bundled presets and print a short tilt/grouping summary for each.

    python3 scripts/reproduce_figures.py                 # desk-scale and bulge presets
    python3 scripts/reproduce_figures.py --full          # also the full-size walls (slow)
    python3 scripts/reproduce_figures.py fig6_bulge --out results
"""
import argparse
import time
from pathlib import Path

from dogtilt.export import read_csv
from dogtilt.pipeline import run_pipeline
from dogtilt.presets import get_preset, list_presets

QUICK = ["fig3_cafewall_desk", "fig4_munsterberg_desk", "fig6_bulge", "fig7_bulge_hough"]
FULL = ["fig3_cafewall", "fig4_munsterberg", "fig5_crop_hough"]


def summarize(out: Path) -> None:
    tilt = read_csv(out / "tilt.csv")
    grouping = {r["sigma_c"]: r for r in read_csv(out / "grouping.csv")}
    print(f"  {'sigma':>6} {'comps':>6} {'linked':>6} {'dots':>5}"
          "  H n / mean|dev|   V n / mean|dev|")
    for sigma, g in grouping.items():
        h = next(r for r in tilt if r["sigma_c"] == sigma and r["ref_orientation"] == "H")
        v = next(r for r in tilt if r["sigma_c"] == sigma and r["ref_orientation"] == "V")
        print(f"  {float(sigma):6g} {g['component_count']:>6} {g['mortar_linked_components']:>6} "
              f"{g['dot_components'] or '-':>5}"
              f"  {h['count']:>3} / {float(h['mean_abs_deviation_deg']):6.3f}"
              f"    {v['count']:>3} / {float(v['mean_abs_deviation_deg']):6.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("presets", nargs="*", help="preset names (default: quick set)")
    ap.add_argument("--full", action="store_true", help="include the full-size presets")
    ap.add_argument("--out", default="out", help="parent output directory")
    args = ap.parse_args()

    names = args.presets or QUICK + (FULL if args.full else [])
    known = {n for n, _ in list_presets()}
    for name in names:
        if name not in known:
            ap.error(f"unknown preset {name!r}")
        cfg = get_preset(name)
        out = Path(args.out) / name
        t0 = time.perf_counter()
        manifest = run_pipeline(cfg, out_dir=out)
        print(f"{name}: {len(manifest['artifacts'])} artifacts in {out} "
              f"({time.perf_counter() - t0:.1f}s)")
        summarize(out)


if __name__ == "__main__":
    main()
