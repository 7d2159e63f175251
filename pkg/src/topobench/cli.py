"""Command-line interface: each pipeline stage is its own subcommand.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, voronoi
from .diagrams import save_diagram_csv
from .manifest import read_manifest, write_manifest
from .noise import LEVELS, PROFILES, apply_level, get_preset
from .preprocess import binarize_clean
from .raster import betti_labels, load_image, save_image


def _cmd_synth(args):
    cfg = voronoi.SynthConfig(image_size=args.size, seed=args.seed)
    voronoi.generate_dataset(cfg, args.n, args.out)
    print(f"wrote {args.n} samples to {args.out}")


def _cmd_preprocess(args):
    from PIL import Image
    import numpy as np

    os.makedirs(args.out, exist_ok=True)
    for name in sorted(os.listdir(args.indir)):
        if not name.endswith((".png", ".pgm")):
            continue
        with Image.open(os.path.join(args.indir, name)) as im:
            gray = np.asarray(im.convert("L"), dtype=np.uint8)
        save_image(binarize_clean(gray), os.path.join(args.out, name))
    print(f"preprocessed into {args.out}")


def _cmd_corrupt(args):
    if bool(args.image) == bool(args.dataset_dir):
        raise ValueError("exactly one of --image or --dataset-dir is required")
    if args.image:
        if not args.out:
            raise ValueError("--out is required with --image")
        img = load_image(args.image)
        noisy = apply_level(img, get_preset(args.profile, args.level), args.seed)
        save_image(noisy, args.out)
        return
    records = harness.build_manifest(args.dataset_dir, args.profile, args.seed)
    records = harness.split_manifest(records, args.seed)
    write_manifest(records, os.path.join(args.dataset_dir, "manifest.jsonl"))
    print(f"manifest with {len(records)} records in {args.dataset_dir}")


def _cmd_label(args):
    img = load_image(args.image)
    lab = betti_labels(img)
    print(f"{os.path.basename(args.image)},{lab.beta0},{lab.beta1}")


def _cmd_diagram(args):
    img = load_image(args.image)
    d = harness.diagram_for_image(img, os.path.basename(args.image),
                                  oracle=args.oracle)
    save_diagram_csv(d, args.out)
    print(f"{len(d)} pairs -> {args.out}")


def _cmd_calibrate(args):
    records = read_manifest(args.manifest)
    root = os.path.dirname(os.path.abspath(args.manifest))
    _, results = harness.run_ph_eval(
        records, root, cache_dir=args.cache,
        calibration_mode="oracle" if args.oracle else "validation",
        threads=args.threads,
    )
    harness.write_calibration_csv(results, args.out)
    print(f"calibration -> {args.out}")


def _cmd_eval_ph(args):
    records = read_manifest(args.manifest)
    root = os.path.dirname(os.path.abspath(args.manifest))
    rows, _ = harness.run_ph_eval(
        records, root, cache_dir=args.cache,
        calibration_mode="oracle" if args.oracle else "validation",
        threads=args.threads,
    )
    harness.write_report(rows, args.out)
    print(f"report -> {args.out}")


def _cmd_report(args):
    rows = []
    for path in args.reports:
        rows.extend(harness.read_report(path))
    harness.write_report(rows, args.out)
    print(f"merged {len(rows)} rows -> {args.out}")


def _cmd_plot_data(args):
    rows = harness.read_report(args.report)
    harness.emit_plot_data(rows, args.out)
    print(f"plot data -> {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topobench")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        if out:
            sp.add_argument("--out", required=True)

    sp = sub.add_parser("synth", help="generate the synthetic wall dataset")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--size", type=int, default=512)
    common(sp)
    sp.set_defaults(func=_cmd_synth)

    sp = sub.add_parser("preprocess", help="binarize grayscale images")
    sp.add_argument("indir")
    common(sp)
    sp.set_defaults(func=_cmd_preprocess)

    sp = sub.add_parser("corrupt", help="apply the noise protocol")
    sp.add_argument("--profile", choices=PROFILES, required=True)
    sp.add_argument("--level", choices=LEVELS, default="N1")
    sp.add_argument("--image", help="single-image mode")
    sp.add_argument("--dataset-dir", help="dataset mode: emit all levels + manifest")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", help="output image (single-image mode)")
    sp.set_defaults(func=_cmd_corrupt)

    sp = sub.add_parser("label", help="Betti labels of a binary image")
    sp.add_argument("image")
    sp.set_defaults(func=_cmd_label)

    sp = sub.add_parser("diagram", help="persistence diagram of one image")
    sp.add_argument("image")
    sp.add_argument("--oracle", action="store_true",
                    help="use the boundary-reduction oracle path")
    common(sp)
    sp.set_defaults(func=_cmd_diagram)

    sp = sub.add_parser("calibrate", help="grid-search window calibration")
    sp.add_argument("manifest")
    sp.add_argument("--oracle", action="store_true",
                    help="calibrate on the test split (upper-bound mode)")
    sp.add_argument("--cache", default=None)
    common(sp)
    sp.set_defaults(func=_cmd_calibrate)

    sp = sub.add_parser("eval-ph", help="calibrated-PH evaluation report")
    sp.add_argument("manifest")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--cache", default=None)
    common(sp)
    sp.set_defaults(func=_cmd_eval_ph)

    sp = sub.add_parser("report", help="merge report CSVs")
    sp.add_argument("reports", nargs="+")
    common(sp)
    sp.set_defaults(func=_cmd_report)

    sp = sub.add_parser("plot-data", help="level-vs-MAE plot series")
    sp.add_argument("report")
    common(sp)
    sp.set_defaults(func=_cmd_plot_data)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
