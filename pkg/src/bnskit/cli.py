"""Command line interface: ``bnskit <subcommand> ...``.

Exit codes: 0 success or decided verdict, 1 usage/input error, 2 UNKNOWN verdict.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .characters import Character, CharacterError
from .fox import StructureError, fox_matrix
from .growth import GrowthError, check_levitt_bound, estimate_degree, growth_sequence, parse_automorphism, GrowthKind
from .presentation import Presentation, PresentationError, first_betti, load_presentation
from .random_model import SampleConfig, count_cyclically_reduced, default_threads, run_experiment, write_log
from .sigma import decide, primitive_character, symmetry_report
from .transform import TransformError, TransformRecord, insert_commutators, remove_commutators
from .words import CyclicWord, parse_word

log = logging.getLogger("bnskit")

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as UNKNOWN
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(obj, fmt: str, text: str | None = None) -> None:
    if fmt == "text" and text is not None:
        sys.stdout.write(text.rstrip("\n") + "\n")
    else:
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _char(text: str | None) -> Character | None:
    return None if text is None else Character.parse(text)


def cmd_analyze(args) -> int:
    p = load_presentation(args.pres)
    phi = _char(args.char)
    if phi is None:
        b1 = first_betti(p)
        if b1 != 1:
            raise CliError(f"b1 = {b1}, supply --char")
        rep = symmetry_report(p, args.assume_no_zero_divisors)
        text = (f"b1 = 1, character {rep.plus_verdict.character}\n"
                f"+phi: {rep.plus_verdict.membership.value}\n-phi: {rep.minus_verdict.membership.value}\n"
                f"nonsymmetric: {rep.nonsymmetric}, not_lerf: {rep.not_lerf}, not_fibering: {rep.not_fibering}")
        _emit(rep.to_json(), args.format, text)
        return EXIT_OK if rep.decided else EXIT_UNKNOWN
    verdict = decide(p, phi, args.assume_no_zero_divisors)
    text = f"{verdict.membership.value}\n" + "\n".join(f"  - {j}" for j in verdict.justification)
    _emit(verdict.to_json(), args.format, text)
    return EXIT_OK if verdict.decided else EXIT_UNKNOWN


def cmd_sample(args) -> int:
    if args.config:
        config = SampleConfig.from_toml(args.config, n=args.rels, m=args.gens, l=args.len,
                                        trials=args.trials, seed=args.seed)
    else:
        missing = [f for f in ("gens", "rels", "len", "trials", "seed") if getattr(args, f) is None]
        if missing:
            raise CliError("missing " + ", ".join("--" + f for f in missing))
        config = SampleConfig(n=args.rels, m=args.gens, l=args.len, trials=args.trials, seed=args.seed)
    report = run_experiment(config, threads=args.threads, log=bool(args.log))
    log.info("sampled %d presentations in %.2fs", config.trials, report.runtime)
    if args.log:
        write_log(report, args.log)
    if args.format == "csv" or args.format == "text":
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_json(), "json")
    return EXIT_OK


def _read_transform_input(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if "output" in data and "character" in data:
            return Presentation.from_json(data["output"]), Character(data["character"])
        return Presentation.from_json(data), None
    return load_presentation(path), None


def cmd_transform(args) -> int:
    p, record_phi = _read_transform_input(args.input)
    phi = _char(args.char) or record_phi
    if phi is None:
        raise CliError("supply --char (normalized character)")
    if args.remove:
        original = remove_commutators(p.relators, phi)
        q = Presentation(p.rank, original)
        _emit({"character": list(phi.values), "presentation": q.to_json(), "text": q.format()},
              args.format, q.format())
        return EXIT_OK
    record = insert_commutators(p.relators, phi)
    _emit(record.to_json(), args.format, record.output_presentation().format())
    return EXIT_OK


def cmd_fox(args) -> int:
    p = load_presentation(args.pres)
    phi = _char(args.char)
    if phi is None and p.deficiency == 1 and first_betti(p) == 1:
        phi = primitive_character(p)
    dump = fox_matrix(p, phi)
    _emit(dump, args.format)
    return EXIT_OK


def cmd_growth(args) -> int:
    with open(args.auto, encoding="utf-8") as fh:
        phi = parse_automorphism(fh.read())
    g = parse_word(args.word, phi.names)
    seq = growth_sequence(phi, g, args.iters, args.cap)
    est = estimate_degree(seq)
    out = {"automorphism": phi.status, "truncated": seq.truncated, "lengths": list(seq.lengths),
           **est.to_json()}
    if est.kind is GrowthKind.POLYNOMIAL:
        ok = check_levitt_bound(phi, est)
        out["levitt_bound_ok"] = ok
        if not ok and phi.verified:
            log.error("degree %d exceeds rank - 1 = %d: estimator bug", est.degree, phi.rank - 1)
    _emit(out, args.format, str(est))
    return EXIT_OK


def cmd_count(args) -> int:
    counts = [count_cyclically_reduced(args.gens, k) for k in range(1, args.len + 1)]
    if args.format == "json":
        _emit({"gens": args.gens, "counts": counts}, "json")
    else:
        sys.stdout.write(",".join(map(str, counts)) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="bnskit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="BNS verdicts for a deficiency-1 presentation")
    a.add_argument("--pres", required=True)
    a.add_argument("--char")
    a.add_argument("--assume-no-zero-divisors", action="store_true")
    a.set_defaults(func=cmd_analyze, default_format="json")

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo estimates in the few-relator model")
    s.add_argument("--gens", type=int)
    s.add_argument("--rels", type=int)
    s.add_argument("--len", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--config", help="TOML file with n, m, l, trials, seed")
    s.add_argument("--log", help="write one JSON line per sample")
    s.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default ${'{'}BNSKIT_THREADS{'}'} or 1)")
    s.set_defaults(func=cmd_sample, default_format="csv")

    t = sub.add_parser("transform", parents=[common], help="insert or remove the commutators")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--char")
    t.add_argument("--remove", action="store_true")
    t.set_defaults(func=cmd_transform, default_format="json")

    f = sub.add_parser("fox", parents=[common], help="dump the Fox matrix")
    f.add_argument("--pres", required=True)
    f.add_argument("--char")
    f.set_defaults(func=cmd_fox, default_format="json")

    g = sub.add_parser("growth", parents=[common], help="growth of a conjugacy class")
    g.add_argument("--auto", required=True)
    g.add_argument("--word", required=True)
    g.add_argument("--iters", type=int, default=64)
    g.add_argument("--cap", type=int, default=200_000)
    g.set_defaults(func=cmd_growth, default_format="json")

    c = sub.add_parser("count", parents=[common], help="count cyclically reduced words by length")
    c.add_argument("--gens", type=int, required=True)
    c.add_argument("--len", type=int, required=True)
    c.set_defaults(func=cmd_count, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, PresentationError, CharacterError, TransformError, GrowthError,
            StructureError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
