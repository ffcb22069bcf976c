"""Command line interface: ``bioblend generate`` and ``bioblend validate``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .config import DEFAULTS, FIELD_TYPES, SEED_ENV, GeneratorConfig, validate_config
from .dataset import export_csv, read_hdf5, write_hdf5
from .errors import ConfigError, FormatError, InvariantError

log = logging.getLogger("bioblend")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4

# flags not listed in the original tool's documented parameter set
_EXTENSIONS = {
    "usefulness_scheme", "usefulness_min", "usefulness_max", "envelope", "envelope_location",
    "envelope_scale", "scale_jitter", "fake_scale", "log_positivity", "blend_k_min",
    "blend_k_max", "dirichlet_concentration", "noise_mode", "threads",
}

_CHOICES = {
    "blending_mode": ("linear", "logarithmic"),
    "noise_mode": ("linear", "logarithmic"),
    "usefulness_scheme": ("linear", "exponential", "longtailed"),
    "sampling_distribution": ("normal", "uniform"),
    "envelope": ("normal", "uniform"),
    "log_positivity": ("exp", "shift"),
}

_HELP = {
    "n_labels": "number of classes C",
    "n_samples_per_label": "samples per class",
    "n_true_features": "class-informative hidden features",
    "n_fake_features": "pure-noise hidden features",
    "average_consecutive_locations": "ordering extent: mean length of sorted runs of class locations (0..C)",
    "average_shared_locations": "sharing extent: mean number of classes sharing one location (0..C)",
    "n_features_out": "number of visible features",
    "blending_mode": "how transitional features are mixed",
    "usefulness_scheme": "decay of usefulness across true features",
    "usefulness_min": "usefulness of the least useful true feature",
    "usefulness_max": "usefulness of the most useful true feature",
    "sampling_distribution": "within-class distribution of hidden values",
    "envelope": "distribution the class locations are drawn from",
    "envelope_location": "envelope location (mean, or range start for uniform)",
    "envelope_scale": "envelope scale (std, or range length for uniform)",
    "scale_jitter": "half-width of the uniform multiplier on true-feature scales",
    "fake_scale": "sampling scale of fake features (default: 2 x envelope scale)",
    "polynomial_degree": "maximum monomial degree d of the polynomial expansion",
    "log_positivity": "how operands are made positive in logarithmic mode",
    "blend_k_min": "fewest transitional features blended into one visible feature",
    "blend_k_max": "most transitional features blended into one visible feature",
    "dirichlet_concentration": "symmetric Dirichlet concentration of the blend weights",
    "noise": "add per-feature noise",
    "noise_mode": "noise interpolation mode (default: same as blending mode)",
    "noise_alpha_min": "lower bound of the per-feature signal weight alpha",
    "noise_alpha_max": "upper bound of the per-feature signal weight alpha",
    "seed": f"random seed (falls back to ${SEED_ENV}, then {DEFAULTS.seed})",
    "output": "HDF5 file to write",
    "store_hidden": "also store the hidden feature matrix",
    "threads": "worker threads for blending (output does not depend on it)",
}


def _add_config_flags(parser: argparse.ArgumentParser):
    for f in fields(GeneratorConfig):
        flag = "--" + f.name.replace("_", "-")
        default = getattr(DEFAULTS, f.name)
        help_text = _HELP.get(f.name, "")
        if default is not None:
            help_text += f" (default: {default})"
        if f.name in _EXTENSIONS:
            help_text += " [extension]"
        if FIELD_TYPES[f.name] == "bool":
            parser.add_argument(flag, action=argparse.BooleanOptionalAction,
                                default=argparse.SUPPRESS, help=help_text)
        else:
            kind = FIELD_TYPES[f.name]
            metavar = None if f.name in _CHOICES else (
                "N" if kind.startswith("int") else "X" if kind.startswith("float") else "PATH")
            parser.add_argument(flag, dest=f.name, default=argparse.SUPPRESS,
                                choices=_CHOICES.get(f.name), metavar=metavar, help=help_text)


def _read_key_value_file(path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bioblend",
        description="Generate ultra-high dimensional, multi-class synthetic feature spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a dataset")
    _add_config_flags(gen)
    gen.add_argument("--config", metavar="FILE", help="key=value file; flags override it")
    gen.add_argument("--csv", metavar="DIR", help="also export features.csv / labels.csv to DIR")
    gen.add_argument("--dry-run", action="store_true",
                     help="print the resolved config and derived sizes, generate nothing")

    val = sub.add_parser("validate", help="screening statistics of a generated dataset")
    val.add_argument("--input", required=True, help="HDF5 file written by generate")
    val.add_argument("--k-list", default="10,25,50,100,200,400,800",
                     help="feature counts to keep (default: %(default)s)")
    val.add_argument("--folds", type=int, default=4, help="cross-validation folds (default: %(default)s)")
    val.add_argument("--neighbors", default="1,5", help="k-NN neighbour counts (default: %(default)s)")
    val.add_argument("--seed", type=int, default=0, help="fold assignment seed (default: %(default)s)")
    val.add_argument("--report", help="JSON report path; figures and a curve CSV are written next to it")
    val.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    return parser


def _int_list(text: str, name: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{name}: expected comma-separated integers, got {text!r}") from None
    if not values:
        raise ConfigError(f"{name}: empty list")
    return values


def _generate(args) -> int:
    raw = _read_key_value_file(args.config) if args.config else {}
    raw.update({f.name: getattr(args, f.name) for f in fields(GeneratorConfig) if hasattr(args, f.name)})
    cfg = validate_config(raw)
    if args.dry_run:
        json.dump({"config": cfg.to_dict(), "derived": cfg.derived()}, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK
    if not cfg.output:
        raise ConfigError("--output is required unless --dry-run is given")

    from .pipeline import run_pipeline

    bundle = run_pipeline(cfg)
    log.info("writing %s", cfg.output)
    write_hdf5(bundle, cfg.output)
    if args.csv:
        for path in export_csv(bundle, args.csv):
            log.info("wrote %s", path)
    log.info("done: %d samples x %d features", *bundle.features.shape)
    return EXIT_OK


def _validate(args) -> int:
    from .evaluate import screening_curve

    k_list = _int_list(args.k_list, "--k-list")
    neighbors = _int_list(args.neighbors, "--neighbors")
    bundle = read_hdf5(args.input)
    report = screening_curve(bundle, k_list, folds=args.folds, neighbors=neighbors, seed=args.seed)

    for n in report.neighbors:
        line = (f"{n}-NN  unreduced {report.unreduced[n]:.3f}  "
                f"best top-k {report.best(n):.3f} (k={report.best_k(n)})")
        if report.true_features is not None:
            line += f"  true hidden {report.true_features[n]:.3f}"
        print(line)
    print(f"chance {report.chance:.3f}")

    if args.report:
        path = Path(args.report)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            json.dump({"input": str(args.input), **report.to_dict()}, fh, indent=1)
        curve_path = path.with_name(path.stem + "_curve.csv")
        with open(curve_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["neighbors", "k", "accuracy"])
            for n in report.neighbors:
                writer.writerow([n, "all", repr(report.unreduced[n])])
                for k, acc in report.accuracy[n].items():
                    writer.writerow([n, k, repr(acc)])
                if report.true_features is not None:
                    writer.writerow([n, "true", repr(report.true_features[n])])
        log.info("wrote %s and %s", path, curve_path)
        if not args.no_figures:
            from .plots import render_report

            for fig in render_report(report, bundle, path.parent, prefix=path.stem + "_"):
                log.info("wrote %s", fig)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        if args.command == "generate":
            return _generate(args)
        return _validate(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
