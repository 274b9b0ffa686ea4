"""Command-line front end.

Machine-readable output (JSON / CSV) goes to stdout, everything meant for
humans goes to stderr. ``eval`` exits with 2 when entanglement is detected,
0 when it is not, and 1 on any error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from . import criteria
from .qmat import InvalidStateError, permute_systems
from .realign import CriterionParams, GSpec, PairMapKind
from .states import family, random_density, random_separable
from .statefile import dumps_state, load_g_matrix, load_state
from .sweep import BISECT_TOL, GRID_SIZE, find_threshold, report_to_csv, reproduce_table, rows_to_csv, rows_to_json

EXIT_OK, EXIT_ERROR, EXIT_DETECTED = 0, 1, 2

CRITERIA = ("ccnr", "zr", "ppt", "thm21", "hr", "thm31")


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _pair(text: str) -> tuple[int, int]:
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"pair must look like 'a,b', got {text!r}")
    out = []
    for t in parts:
        if t.isdigit():
            out.append(int(t))
        elif len(t) == 1 and t.isalpha():
            out.append(ord(t.upper()) - ord("A"))
        else:
            raise argparse.ArgumentTypeError(f"bad subsystem label {t!r}")
    return out[0], out[1]


def _params(args) -> CriterionParams:
    if args.g in ("identity", "ones"):
        ell = 1 if args.ell is None else args.ell
        variant = "cor21" if args.g == "identity" else "cor22"
        return criteria.corollary_preset(variant, args.alpha, ell)
    matrix = load_g_matrix(args.g)
    if args.ell is not None and args.ell != matrix.shape[0]:
        raise ValueError(f"--ell {args.ell} does not match the {matrix.shape[0]}x{matrix.shape[0]} G file")
    g = GSpec.explicit(matrix, args.alpha)
    return CriterionParams(g.alpha, g.ell, g)


def _detector(args):
    """A function DensityMatrix -> CriterionResult configured from the CLI flags."""
    tol = args.detect_tol
    name = args.criterion
    if name == "ccnr":
        return lambda rho: criteria.ccnr(rho, args.cut, tol)
    if name == "zr":
        return lambda rho: criteria.zr(rho, args.cut, tol)
    if name == "ppt":
        return lambda rho: criteria.ppt(rho, args.cut, tol)
    if name == "thm21":
        params = _params(args)
        return lambda rho: criteria.theorem21(rho, args.cut, params, tol)
    kind = PairMapKind.realign() if name == "hr" else PairMapKind.augmented(_params(args))

    def pair_detector(rho):
        if getattr(args, "all_pairs", False):
            pairs = itertools.permutations(range(rho.n_systems), 2)
            results = [criteria.multipartite_eval(rho, p, kind, tol) for p in pairs]
            return max(results, key=lambda r: r.margin)
        pair = args.pair if args.pair is not None else (0, 1)
        return criteria.multipartite_eval(rho, pair, kind, tol)

    return pair_detector


def _add_detector_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--criterion", choices=CRITERIA, required=True)
    p.add_argument("--cut", type=int, default=1, help="bipartite split after the first k subsystems")
    p.add_argument("--pair", type=_pair, default=None, help="subsystem pair for hr/thm31, e.g. 1,2 or B,C")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--g", default="identity", help="identity, ones, or a JSON file with an explicit G")
    p.add_argument("--detect-tol", type=float, default=criteria.DETECT_TOL)


def cmd_eval(args) -> int:
    rho = load_state(args.state, validate=not args.no_validate)
    if args.perm is not None:
        rho = permute_systems(rho, args.perm)
    result = _detector(args)(rho)
    print(json.dumps(result.to_dict(), indent=2))
    verdict = "entangled (detected)" if result.detected else "not detected"
    print(f"{result.criterion}: {verdict}, margin {result.margin:.6g}", file=sys.stderr)
    return EXIT_DETECTED if result.detected else EXIT_OK


def cmd_sweep(args) -> int:
    fam = family(args.family, args.epsilon)
    report = find_threshold(fam, _detector(args), args.tol, args.grid, args.workers)
    if args.format == "csv":
        sys.stdout.write(report_to_csv(report))
    else:
        print(json.dumps(report.to_dict(), indent=2))
    if report.p_star is not None:
        print(f"{report.criterion} on {report.family}: detected for p >= {report.p_star:.6f}", file=sys.stderr)
    else:
        print(f"{report.criterion} on {report.family}: {report.status} "
              f"({report.transitions} transitions)", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = reproduce_table(args.which, args.tol)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text)
    if args.json:
        Path(args.json).write_text(rows_to_json(rows) + "\n")
    if not args.csv and not args.json:
        sys.stdout.write(text)
    for r in rows:
        rec = r.as_record()
        print(f"{rec['family']:>16} {rec['criterion']:>6} alpha={rec['alpha']} ell={rec['ell']} "
              f"p*={rec['p_star']} published={rec['published']} delta={rec['delta']} {rec['note']}",
              file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    dims = args.dims
    if args.type == "random-separable":
        rho = random_separable(dims, args.terms, args.seed)
    else:
        d = int(np.prod(dims))
        rho = random_density(d, args.rank if args.rank is not None else d, args.seed, dims)
    text = dumps_state(rho)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the "detected" exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepcrit", description="Realignment-based entanglement detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one detector on a state file")
    p.add_argument("--state", required=True)
    _add_detector_flags(p)
    p.add_argument("--all-pairs", action="store_true", help="hr/thm31: report the maximum over all ordered pairs")
    p.add_argument("--perm", type=_int_list, default=None, help="reorder subsystems before evaluating")
    p.add_argument("--no-validate", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="find the white-noise detection threshold of a state family")
    p.add_argument("--family", required=True, choices=("tiles", "shifts", "ghz"))
    p.add_argument("--epsilon", type=float, default=0.0)
    _add_detector_flags(p)
    p.add_argument("--tol", type=float, default=BISECT_TOL)
    p.add_argument("--grid", type=int, default=GRID_SIZE)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="recompute a published threshold table")
    p.add_argument("which", choices=("example21", "table1", "table2"))
    p.add_argument("--tol", type=float, default=BISECT_TOL)
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.add_argument("--json", default=None, help="also write JSON here")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("gen", help="write a random state file")
    p.add_argument("--type", required=True, choices=("random-separable", "random-density"))
    p.add_argument("--dims", type=_int_list, required=True)
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidStateError as exc:
        for v in exc.violations:
            print(f"invalid state: {v.message}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
