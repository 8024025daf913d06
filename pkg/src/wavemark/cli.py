"""Command-line interface: embed / extract / attack / bench / gamma-sweep / metrics."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import attacks
from .codec import (
    COEFFICIENTS,
    CalibrationError,
    EmbedParams,
    SideInfoError,
    Watermark,
    embed,
    extract,
    read_side_info,
    write_side_info,
)
from .complexity import CannyParams
from .image_io import PGMError, read_pgm, write_pgm
from .metrics import ber, mse, psnr

log = logging.getLogger("wavemark")

PRESETS = {
    "table1": {"bits": 128, "attacks": attacks.TABLE1_ATTACKS},
    "table2": {"bits": 256, "attacks": attacks.TABLE2_ATTACKS},
}
SWEEP_ATTACKS = tuple(dict.fromkeys(attacks.TABLE1_ATTACKS + attacks.TABLE2_ATTACKS))
CSV_FIELDS = ("image", "attack", "seed", "message_length", "gamma", "beta", "ber_percent", "psnr_attack")


class CLIError(Exception):
    pass


def fmt_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def read_message(path: str | Path) -> np.ndarray:
    bits = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line not in ("0", "1"):
            raise CLIError(f"{path}:{lineno}: expected '0' or '1', got {line!r}")
        bits.append(int(line))
    if not bits:
        raise CLIError(f"{path}: empty message file")
    return np.array(bits, dtype=np.uint8)


def write_message(bits, path: str | Path) -> None:
    Path(path).write_text("".join(f"{int(b)}\n" for b in bits))


def _target(text: str) -> float | None:
    if text.strip().lower() == "none":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'none', got {text!r}") from None


def _gamma_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed gamma list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty gamma list")
    return values


def _params(args, target_psnr=None, beta=1.0) -> EmbedParams:
    return EmbedParams(
        gamma=args.gamma,
        alpha_min=args.alpha_min,
        beta=beta,
        target_psnr=target_psnr,
        canny=CannyParams(args.canny_sigma, args.canny_high, args.canny_low),
    )


# --- embed / extract / attack / metrics ----------------------------------------


def cmd_embed(args) -> int:
    img = read_pgm(args.input)
    if args.message_file:
        wm = Watermark(read_message(args.message_file))
    else:
        wm = Watermark.random(args.bits, args.seed)
    result = embed(img, wm, _params(args, args.target_psnr, args.beta))
    write_pgm(result.image, args.output)
    write_side_info(result.side_info, args.side_info)
    if args.message_out:
        write_message(wm.bits, args.message_out)
    print(f"PSNR: {fmt_db(psnr(img, result.image))} dB")
    print(f"beta: {result.side_info.beta:.6g}")
    return 0


def cmd_extract(args) -> int:
    img = read_pgm(args.input)
    side = read_side_info(args.side_info)
    bits = extract(img, side, coefficients=args.coefficients)
    if args.output:
        write_message(bits, args.output)
    if args.reference:
        ref = read_message(args.reference)
        if ref.size != bits.size:
            raise CLIError(f"reference has {ref.size} bits, extracted message has {bits.size}")
        print(f"BER: {ber(ref, bits):.4f} %")
    if not args.output and not args.reference:
        sys.stdout.write("".join(str(int(b)) for b in bits) + "\n")
    return 0


def cmd_attack(args) -> int:
    spec = attacks.parse_attack(args.spec, args.seed)
    img = read_pgm(args.input)
    out = attacks.apply_attack(img, spec)
    write_pgm(out, args.output)
    print(f"PSNR: {fmt_db(psnr(img, out))} dB")
    return 0


def cmd_metrics(args) -> int:
    if not (args.a and args.b) and not (args.bits_a and args.bits_b):
        raise CLIError("give --a/--b images and/or --bits-a/--bits-b message files")
    if args.a and args.b:
        a, b = read_pgm(args.a), read_pgm(args.b)
        print(f"PSNR: {fmt_db(psnr(a, b))} dB")
        print(f"MSE: {mse(a, b):.6f}")
    if args.bits_a and args.bits_b:
        print(f"BER: {ber(read_message(args.bits_a), read_message(args.bits_b)):.4f} %")
    return 0


# --- bench ----------------------------------------------------------------------


@dataclass(frozen=True)
class _BenchTask:
    name: str
    path: str
    seed: int
    bits: int
    attacks: tuple[str, ...]
    params: EmbedParams


def _run_bench_task(task: _BenchTask) -> tuple[dict, list[dict]]:
    img = read_pgm(task.path)
    wm = Watermark.random(task.bits, task.seed)
    marked, side = embed(img, wm, task.params)
    summary = {"image": task.name, "seed": task.seed, "beta": side.beta, "psnr_embed": psnr(img, marked)}
    rows = []
    for label in task.attacks:
        attacked = attacks.apply_attack(marked, attacks.parse_attack(label, task.seed))
        rows.append(
            {
                "image": task.name,
                "attack": label,
                "seed": task.seed,
                "message_length": task.bits,
                "gamma": task.params.gamma,
                "beta": side.beta,
                "ber_percent": ber(wm.bits, extract(attacked, side)),
                "psnr_attack": psnr(marked, attacked),
            }
        )
    return summary, rows


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() preserves task order, so output never depends on scheduling
        return list(pool.map(fn, tasks))


def _csv_value(key: str, value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return repr(value) if key in ("gamma", "beta") else f"{value:.6f}"
    return str(value)


def aggregate(rows: list[dict]) -> list[dict]:
    groups: dict[tuple[str, str], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["image"], row["attack"]), []).append(row)
    out = []
    for (image, attack), members in groups.items():
        bers = [r["ber_percent"] for r in members]
        psnrs = [r["psnr_attack"] for r in members]
        out.append(
            {
                "image": image,
                "attack": attack,
                "n": len(members),
                "mean_ber": sum(bers) / len(bers),
                "min_ber": min(bers),
                "max_ber": max(bers),
                "mean_psnr_attack": sum(psnrs) / len(psnrs),
            }
        )
    return out


def render_bench_csv(rows: list[dict], aggregates: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_csv_value(k, row[k]) for k in CSV_FIELDS])
    buf.write("# aggregate,image,attack,n,mean_ber,min_ber,max_ber,mean_psnr_attack\n")
    for agg in aggregates:
        fields = ["# aggregate", agg["image"], agg["attack"], str(agg["n"])]
        fields += [_csv_value(k, agg[k]) for k in ("mean_ber", "min_ber", "max_ber", "mean_psnr_attack")]
        buf.write(",".join(fields) + "\n")
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def cmd_bench(args) -> int:
    image_dir = Path(args.images)
    paths = sorted(image_dir.glob("*.pgm")) if image_dir.is_dir() else []
    if not paths:
        raise CLIError(f"no .pgm cover images found in {image_dir}")
    if args.seeds < 1:
        raise CLIError("--seeds must be >= 1")
    preset = PRESETS[args.preset]
    bits = args.bits or preset["bits"]
    labels = tuple(a.strip() for a in args.attacks.split(",")) if args.attacks else preset["attacks"]
    labels = tuple(attacks.parse_attack(a).label for a in labels)
    params = _params(args, args.target_psnr, args.beta)
    seeds = list(range(args.seed_base, args.seed_base + args.seeds))
    tasks = [_BenchTask(p.stem, str(p), s, bits, labels, params) for p in paths for s in seeds]
    results = _map(_run_bench_task, tasks, args.jobs)

    embeds = [summary for summary, _ in results]
    rows = [row for _, task_rows in results for row in task_rows]
    aggregates = aggregate(rows)
    csv_path = Path(args.out_csv)
    csv_path.write_text(render_bench_csv(rows, aggregates))
    report = {
        "parameters": {
            "preset": args.preset,
            "gamma": params.gamma,
            "alpha_min": params.alpha_min,
            "target_psnr": params.target_psnr,
            "beta": None if params.target_psnr is not None else params.beta,
            "message_length": bits,
            "seeds": seeds,
            "attacks": list(labels),
            "canny": {
                "gaussian_sigma": params.canny.gaussian_sigma,
                "high_fraction": params.canny.high_fraction,
                "low_fraction": params.canny.low_fraction,
            },
        },
        "embedding": embeds,
        "rows": rows,
        "aggregates": aggregates,
    }
    report_path = Path(args.out_report) if args.out_report else csv_path.with_suffix(".json")
    report_path.write_text(json.dumps(_json_safe(report), indent=2, sort_keys=True) + "\n")

    print(f"{'image':<16}{'attack':<12}{'mean BER %':>11}{'max BER %':>11}")
    for agg in aggregates:
        print(f"{agg['image']:<16}{agg['attack']:<12}{agg['mean_ber']:>11.4f}{agg['max_ber']:>11.4f}")
    return 0


# --- gamma sweep ------------------------------------------------------------------


@dataclass(frozen=True)
class _SweepTask:
    path: str
    gamma: float
    bits: int
    seed: int
    alpha_min: float
    attacks: tuple[str, ...]


def _run_sweep_task(task: _SweepTask) -> dict:
    img = read_pgm(task.path)
    wm = Watermark.random(task.bits, task.seed)
    params = EmbedParams(gamma=task.gamma, alpha_min=task.alpha_min, beta=1.0, target_psnr=None)
    marked, side = embed(img, wm, params)
    bers = [
        ber(wm.bits, extract(attacks.apply_attack(marked, attacks.parse_attack(a, task.seed)), side))
        for a in task.attacks
    ]
    return {
        "gamma": task.gamma,
        "psnr": psnr(img, marked),
        "mean_ber": sum(bers) / len(bers),
        "ber_no_attack": ber(wm.bits, extract(marked, side)),
    }


def cmd_gamma_sweep(args) -> int:
    bad = [g for g in args.gammas if not 0.0 <= g <= 1.0]
    if bad:
        raise CLIError(f"gamma values must lie in [0, 1], got {bad}")
    labels = tuple(a.strip() for a in args.attacks.split(",")) if args.attacks else SWEEP_ATTACKS
    labels = tuple(attacks.parse_attack(a).label for a in labels)
    tasks = [_SweepTask(args.input, g, args.bits, args.seed, args.alpha_min, labels) for g in args.gammas]
    read_pgm(args.input)  # fail fast before forking workers
    rows = _map(_run_sweep_task, tasks, args.jobs)
    lines = ["gamma,psnr,mean_ber,ber_no_attack"]
    for r in rows:
        lines.append(f"{r['gamma']!r},{fmt_db(r['psnr'])},{r['mean_ber']:.6f},{r['ber_no_attack']:.6f}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0


# --- parser -------------------------------------------------------------------------


def _add_embed_options(p: argparse.ArgumentParser, *, target: bool = True) -> None:
    p.add_argument("--gamma", type=float, default=0.4, help="strength exponent in [0, 1] (default 0.4)")
    p.add_argument("--alpha-min", type=float, default=0.5, help="strength floor in gray levels (default 0.5)")
    if target:
        p.add_argument("--target-psnr", type=_target, default=45.0, help="calibrate beta to this PSNR in dB, or 'none'")
        p.add_argument("--beta", type=float, default=1.0, help="global strength multiplier when --target-psnr none")
    p.add_argument("--canny-sigma", type=float, default=1.4)
    p.add_argument("--canny-high", type=float, default=0.2)
    p.add_argument("--canny-low", type=float, default=0.08)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavemark", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark into a PGM cover")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="watermarked PGM")
    p.add_argument("--side-info", required=True, help="WMSI side-information file to write")
    p.add_argument("--message-out", help="write the embedded bits here, one per line")
    p.add_argument("--message-file", help="embed these bits instead of a seeded random message")
    p.add_argument("--bits", type=int, default=128, help="random message length (default 128)")
    p.add_argument("--seed", type=int, default=0, help="random message seed")
    _add_embed_options(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="extract a watermark using side information")
    p.add_argument("--input", required=True)
    p.add_argument("--side-info", required=True)
    p.add_argument("--output", help="write extracted bits here, one per line")
    p.add_argument("--reference", help="reference message file; prints BER")
    p.add_argument(
        "--coefficients",
        type=lambda s: tuple(c.strip() for c in s.split(",")),
        default=COEFFICIENTS,
        help="voting coefficients, subset of cA,cH,cV",
    )
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one attack to a PGM image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--spec", required=True, help="median3, median5, gauss:1.5, sp:0.03, awgn:15, jpeg:20, ...")
    p.add_argument("--seed", type=int, default=0, help="noise seed (salt & pepper, AWGN)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bench", help="robustness benchmark over a directory of PGM covers")
    p.add_argument("--images", required=True, help="directory of .pgm covers")
    p.add_argument("--preset", choices=sorted(PRESETS), default="table1")
    p.add_argument("--attacks", help="comma-separated attack list overriding the preset")
    p.add_argument("--bits", type=int, help="message length overriding the preset")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds per image (default 10)")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--out-csv", default="bench.csv")
    p.add_argument("--out-report", help="JSON report path (default: CSV path with .json)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_embed_options(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gamma-sweep", help="PSNR/BER trade-off over gamma at beta = 1")
    p.add_argument("--input", required=True)
    p.add_argument("--gammas", type=_gamma_list, default=[0.0, 0.2, 0.4, 0.6, 0.8, 1.0])
    p.add_argument("--attacks", help="comma-separated attack list (default: all preset attacks)")
    p.add_argument("--bits", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha-min", type=float, default=0.5)
    p.add_argument("--out", default="gamma_sweep.csv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_gamma_sweep)

    p = sub.add_parser("metrics", help="PSNR between images and/or BER between message files")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--bits-a")
    p.add_argument("--bits-b")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (CLIError, PGMError, SideInfoError, CalibrationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
