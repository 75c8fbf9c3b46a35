"""Command-line front end: approximate, ingest, sweep, certify.

Exit codes: 0 success (certified where applicable), 3 uncertified result or
failed sweep rows, 1 input/usage errors.  Output is deterministic: floats are
serialized with 17 significant digits and payloads carry no timestamps, so
identical inputs give byte-identical output.  ``ENVLP_MAX_ITER`` overrides
the solver iteration cap.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import solver
from .contour import Contour, radial_parametrize, read_polygon_csv
from .errors import EnvelopeError
from .fourier import FourierEnvelope
from .signals import PeriodicSignal, read_signal_csv, write_signal_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 3

_CPRIME_FLAGS = {"exact": solver.EXACT_POSTSOLVE, "apriori": solver.APRIORI}

SWEEP_COLUMNS = (
    "L",
    "n",
    "cost_appopt",
    "cost_subopt",
    "gap_bound",
    "certified",
    "min_margin",
)


def format_float(x: float) -> str:
    """Fixed 17-significant-digit rendering used in all emitted files."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def dumps(value, indent: int = 0) -> str:
    """Deterministic JSON text: dict order preserved, floats via format_float."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 1)}'
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        items = [f"{pad}  {dumps(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return json.dumps(str(value))


@dataclass(frozen=True)
class SweepSpec:
    """Validated grid of (L, n) runs; rows are emitted L-major, n-minor."""

    L_values: tuple
    n_values: tuple
    grid_m: int = solver.DEFAULT_CERTIFY_GRID
    c_override: float | None = None
    c_prime_mode: str = solver.EXACT_POSTSOLVE

    def __post_init__(self):
        if not self.L_values or not self.n_values:
            raise ValueError("sweep needs at least one L and one n")
        for L in self.L_values:
            if L < 0:
                raise ValueError(f"harmonic budget must be nonnegative, got {L}")
            for n in self.n_values:
                if n < 2 * L + 1:
                    raise ValueError(
                        f"n={n} is below 2L+1={2 * L + 1} for L={L}"
                    )
        if self.c_prime_mode not in solver.C_PRIME_MODES:
            raise ValueError(f"bad c_prime_mode {self.c_prime_mode!r}")

    def pairs(self):
        for L in self.L_values:
            for n in self.n_values:
                yield L, n


def _int_list(text: str) -> tuple:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc
    return values


def _max_iter() -> int:
    raw = os.environ.get("ENVLP_MAX_ITER")
    if raw is None:
        return 200000
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ENVLP_MAX_ITER must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"ENVLP_MAX_ITER must be positive, got {value}")
    return value


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")
    else:
        print(text)


def _load_signal(path, lipschitz) -> PeriodicSignal:
    return PeriodicSignal.from_samples(read_signal_csv(path), lipschitz_c=lipschitz)


def cmd_approximate(args) -> int:
    sig = _load_signal(args.signal_csv, args.lipschitz)
    result = solver.approximate(
        sig,
        L=args.L,
        n=args.n,
        c_prime_mode=_CPRIME_FLAGS[args.cprime_mode],
        grid_m=args.grid,
        max_iter=_max_iter(),
    )
    _emit(dumps(result.to_dict()), args.out)
    return EXIT_OK if result.certified else EXIT_UNCERTIFIED


def cmd_ingest(args) -> int:
    contour = Contour.from_points(read_polygon_csv(args.polygon_csv))
    sig = radial_parametrize(contour, M=args.samples)
    sidecar = {
        "centroid": [contour.centroid[0], contour.centroid[1]],
        "star_shaped": bool(sig.star_shaped),
        "samples": sig.m,
        "lipschitz_c": sig.lipschitz_c,
    }
    if args.out:
        write_signal_csv(args.out, sig.samples)
        sidecar_path = os.path.splitext(args.out)[0] + ".json"
        with open(sidecar_path, "w") as handle:
            handle.write(dumps(sidecar) + "\n")
    else:
        print("\n".join(format_float(v) for v in sig.samples))
        print(dumps(sidecar), file=sys.stderr)
    return EXIT_OK


def _sweep_rows(sig: PeriodicSignal, spec: SweepSpec, max_iter: int):
    """One result dict per (L, n) pair; failures become flagged rows."""
    rows = []
    any_failed = False
    warm: dict[int, tuple[int, np.ndarray]] = {}
    for L, n in spec.pairs():
        initial_lam = None
        if L in warm:
            n_prev, lam_prev = warm[L]
            if n_prev < n and n % n_prev == 0:
                initial_lam = np.zeros(n)
                initial_lam[:: n // n_prev] = lam_prev
        try:
            result = solver.approximate(
                sig,
                L=L,
                n=n,
                c_prime_mode=spec.c_prime_mode,
                grid_m=spec.grid_m,
                max_iter=max_iter,
                initial_lam=initial_lam,
            )
        except (EnvelopeError, ValueError) as exc:
            rows.append({"L": L, "n": n, "error": str(exc)})
            any_failed = True
            continue
        warm[L] = (n, result.solver_diag.lam)
        rows.append(result.to_dict())
        if not result.certified:
            any_failed = True
    return rows, any_failed


def _sweep_csv(rows) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        if "error" in row:
            lines.append(f"{row['L']},{row['n']},,,,error,")
            continue
        lines.append(
            ",".join(
                (
                    str(row["L"]),
                    str(row["n"]),
                    format_float(row["cost_appopt"]),
                    format_float(row["cost_subopt"]),
                    format_float(row["gap_bound"]),
                    "true" if row["certified"] else "false",
                    format_float(row["min_margin"]),
                )
            )
        )
    return "\n".join(lines)


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        L_values=args.L,
        n_values=args.n,
        grid_m=args.grid,
        c_override=args.lipschitz,
        c_prime_mode=_CPRIME_FLAGS[args.cprime_mode],
    )
    sig = _load_signal(args.signal_csv, spec.c_override)
    rows, any_failed = _sweep_rows(sig, spec, _max_iter())
    text = _sweep_csv(rows) if args.format == "csv" else dumps(rows)
    _emit(text, args.out)
    return EXIT_UNCERTIFIED if any_failed else EXIT_OK


def cmd_certify(args) -> int:
    with open(args.result_json) as handle:
        payload = json.load(handle)
    subopt = FourierEnvelope.from_dict(payload["subopt"])
    sig = _load_signal(args.signal_csv, None)
    certified, min_margin = solver.certify(subopt, sig, grid_m=args.grid)
    report = {
        "certified": certified,
        "min_margin": min_margin,
        "grid_m": args.grid,
        "L": subopt.L,
    }
    _emit(dumps(report), args.out)
    return EXIT_OK if certified else EXIT_UNCERTIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="envlp",
        description="Near-optimal always-above lowpass envelopes of periodic signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approximate", help="solve one (L, n) run on a signal CSV")
    p.add_argument("signal_csv")
    p.add_argument("--L", type=int, required=True, help="harmonic budget")
    p.add_argument("--n", type=int, required=True, help="constraint count")
    p.add_argument("--lipschitz", type=float, default=None, help="signal slope bound")
    p.add_argument("--cprime-mode", choices=sorted(_CPRIME_FLAGS), default="exact")
    p.add_argument("--grid", type=int, default=solver.DEFAULT_CERTIFY_GRID)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("ingest", help="polygon CSV -> radial signal CSV (+sidecar)")
    p.add_argument("polygon_csv")
    p.add_argument("--samples", type=int, default=1024, help="angular sample count")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sweep", help="grid of (L, n) runs; JSON array or CSV table")
    p.add_argument("signal_csv")
    p.add_argument("--L", type=_int_list, required=True, help="comma list, e.g. 1,2,5")
    p.add_argument("--n", type=_int_list, required=True, help="comma list, e.g. 8,16,32")
    p.add_argument("--lipschitz", type=float, default=None)
    p.add_argument("--cprime-mode", choices=sorted(_CPRIME_FLAGS), default="exact")
    p.add_argument("--grid", type=int, default=solver.DEFAULT_CERTIFY_GRID)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="re-check a stored result against a signal")
    p.add_argument("result_json")
    p.add_argument("signal_csv")
    p.add_argument("--grid", type=int, default=solver.DEFAULT_CERTIFY_GRID)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EnvelopeError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"envlp: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
