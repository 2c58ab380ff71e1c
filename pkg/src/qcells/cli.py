"""Command-line front end: verify minors, sweep Weyl groups, print images.

Subcommands
-----------
verify         check the predicted monomial for one word at one or all k
sweep          verify every element / reduced word / position of a type
feigin-minor   print the image of a flag minor and its cross-check
reduced-words  list reduced words of an element, or all elements
selftest       run a small fixed battery of known values

Exit codes: 0 all checks pass, 1 some identity failed, 2 bad usage,
3 the presentation search cap was exhausted.

Defaults for --search-cap, --format and --jobs can be overridden with the
environment variables QCELLS_SEARCH_CAP, QCELLS_FORMAT and QCELLS_JOBS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Iterator

from .cartan import (
    RootDatum,
    Weight,
    build_root_datum,
    is_reduced,
    reduced_words,
    weyl_elements,
)
from .cells import (
    MatrixCoeffSpec,
    PresentationError,
    VerificationReport,
    chamber_ansatz,
    class_equal,
    feigin_matrix_coeff,
    feigin_minor,
    verify_theorem,
)
from .hwmod import extremal_vector, get_module
from .qtorus import TorusPresentation, torus_str
from .scalars import scalar_str

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class UsageError(Exception):
    """Invalid command-line input (reported on stderr, exit code 2)."""


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        return fallback


def _env_str(name: str, fallback: str) -> str:
    return os.environ.get(name, fallback)


def _datum(cartan: str) -> RootDatum:
    try:
        return build_root_datum(cartan.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_word(text: str, datum: RootDatum) -> tuple[int, ...]:
    try:
        letters = tuple(int(p) for p in text.replace(" ", "").split(",") if p)
    except ValueError as exc:
        raise UsageError(f"cannot parse word {text!r}: letters must be integers") from exc
    if not letters:
        raise UsageError("word must contain at least one letter")
    bad = [i for i in letters if i not in datum.index_set]
    if bad:
        raise UsageError(
            f"letter {bad[0]} is outside the index set 1..{len(datum.index_set)}"
        )
    return letters


def _parse_reduced_word(text: str, datum: RootDatum) -> tuple[int, ...]:
    letters = _parse_word(text, datum)
    if not is_reduced(datum, letters):
        raise UsageError(f"word {','.join(map(str, letters))} is not reduced")
    return letters


def _parse_lambda(text: str, datum: RootDatum) -> Weight:
    try:
        coords = tuple(int(p) for p in text.replace(" ", "").split(",") if p)
    except ValueError as exc:
        raise UsageError(f"cannot parse weight {text!r}") from exc
    if len(coords) != len(datum.index_set):
        raise UsageError(
            f"weight needs {len(datum.index_set)} coordinates, got {len(coords)}"
        )
    lam = Weight(coords)
    if not lam.is_dominant():
        raise UsageError("weight must be dominant (all coordinates >= 0)")
    return lam


def _parse_k(text: str, word: tuple[int, ...]) -> list[int]:
    if text == "all":
        return list(range(1, len(word) + 1))
    try:
        k = int(text)
    except ValueError as exc:
        raise UsageError(f"--k must be an integer or 'all', got {text!r}") from exc
    if not 1 <= k <= len(word):
        raise UsageError(f"k={k} is out of range for a word of length {len(word)}")
    return [k]


def _record(
    cartan: str,
    word: tuple[int, ...],
    k: int,
    rep: VerificationReport,
    chamber: VerificationReport,
) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "cartan": cartan,
        "word": list(word),
        "k": k,
        "lhs": torus_str(rep.lhs),
        "rhs": torus_str(rep.rhs),
        "equal": rep.equal,
        "presentation": {
            "lambda": list(rep.presentation.lam.coords),
            "uprime_coeffs": [scalar_str(c) for c in rep.presentation.coeffs],
        },
    }
    if chamber.exponent_match and chamber.residual_q_power is not None:
        rec["residual_q_power"] = chamber.residual_q_power
    return rec


def _text_line(rec: dict[str, Any]) -> str:
    word = ",".join(map(str, rec["word"]))
    if "error" in rec:
        return f"{rec['cartan']} word {word} k={rec['k']}: CAP  {rec['error']}"
    status = "ok" if rec["equal"] else "MISMATCH"
    lamp = ",".join(map(str, rec["presentation"]["lambda"]))
    parts = [
        f"{rec['cartan']} word {word} k={rec['k']}: {status}",
        f"lhs = {rec['lhs']}",
        f"lam' = {lamp}",
    ]
    if not rec["equal"]:
        parts.insert(2, f"rhs = {rec['rhs']}")
    if "residual_q_power" in rec:
        parts.append(f"t_{rec['k']} residual q^{rec['residual_q_power']}")
    return "  ".join(parts)


def _run_instance(
    cartan: str, pres: TorusPresentation, k: int, search_cap: int
) -> dict[str, Any]:
    try:
        rep = verify_theorem(pres, k, search_cap)
    except PresentationError as exc:
        return {"cartan": cartan, "word": list(pres.letters), "k": k, "error": str(exc)}
    chamber = chamber_ansatz(pres, k)
    return _record(cartan, pres.letters, k, rep, chamber)


def _emit_records(
    instances: list[tuple[TorusPresentation, int]],
    cartan: str,
    search_cap: int,
    fmt: str,
    jobs: int,
    out,
) -> tuple[int, int, int]:
    """Run instances (possibly in a thread pool), print in input order.

    Returns (total, equal, capped).
    """

    def run(inst: tuple[TorusPresentation, int]) -> dict[str, Any]:
        return _run_instance(cartan, inst[0], inst[1], search_cap)

    if jobs > 1:
        pool = ThreadPoolExecutor(max_workers=jobs)
        results: Iterator[dict[str, Any]] = pool.map(run, instances)
    else:
        pool = None
        results = map(run, instances)
    total = equal = capped = 0
    try:
        for rec in results:
            total += 1
            if "error" in rec:
                capped += 1
            elif rec["equal"]:
                equal += 1
            if fmt == "json":
                print(json.dumps(rec, ensure_ascii=False), file=out)
            else:
                print(_text_line(rec), file=out)
    finally:
        if pool is not None:
            pool.shutdown()
    return total, equal, capped


def cmd_verify(args: argparse.Namespace) -> int:
    datum = _datum(args.cartan)
    word = _parse_reduced_word(args.word, datum)
    ks = _parse_k(args.k, word)
    pres = TorusPresentation(datum, word)
    instances = [(pres, k) for k in ks]
    total, equal, capped = _emit_records(
        instances, datum.name, args.search_cap, args.format, args.jobs, sys.stdout
    )
    if capped:
        return EXIT_CAP
    return EXIT_OK if equal == total else EXIT_MISMATCH


def cmd_sweep(args: argparse.Namespace) -> int:
    datum = _datum(args.cartan)
    instances: list[tuple[TorusPresentation, int]] = []
    for w in weyl_elements(datum, args.max_length):
        if not w:
            continue
        for word in reduced_words(datum, w):
            pres = TorusPresentation(datum, word)
            instances.extend((pres, k) for k in range(1, len(word) + 1))
    total, equal, capped = _emit_records(
        instances, datum.name, args.search_cap, args.format, args.jobs, sys.stdout
    )
    mismatched = total - equal - capped
    if args.format == "json":
        summary = {
            "summary": {
                "cartan": datum.name,
                "instances": total,
                "equal": equal,
                "mismatched": mismatched,
                "capped": capped,
            }
        }
        print(json.dumps(summary, ensure_ascii=False))
    else:
        print(
            f"{datum.name}: {total} instances, {equal} equal, "
            f"{mismatched} mismatched, {capped} capped"
        )
    if capped:
        return EXIT_CAP
    return EXIT_OK if mismatched == 0 else EXIT_MISMATCH


def cmd_feigin_minor(args: argparse.Namespace) -> int:
    datum = _datum(args.cartan)
    word = _parse_reduced_word(args.word, datum)
    lam = _parse_lambda(getattr(args, "lambda"), datum)
    pres = TorusPresentation(datum, word)
    closed = feigin_minor(pres, lam)
    mod = get_module(datum, lam)
    pairing = feigin_matrix_coeff(
        pres, MatrixCoeffSpec(mod, extremal_vector(mod, word), mod.highest())
    )
    equal = class_equal(closed, pairing)
    if args.format == "json":
        rec = {
            "cartan": datum.name,
            "word": list(word),
            "lambda": list(lam.coords),
            "closed_form": torus_str(closed),
            "pairing": torus_str(pairing),
            "equal": equal,
        }
        print(json.dumps(rec, ensure_ascii=False))
    else:
        print(torus_str(closed))
        print(f"pairing route: {torus_str(pairing)}")
        print(f"equal: {'yes' if equal else 'NO'}")
    return EXIT_OK if equal else EXIT_MISMATCH


def cmd_reduced_words(args: argparse.Namespace) -> int:
    datum = _datum(args.cartan)
    if args.word is not None:
        word = _parse_word(args.word, datum)
        words = reduced_words(datum, word)
        if args.format == "json":
            rec = {
                "cartan": datum.name,
                "word": list(word),
                "reduced_words": [list(w) for w in words],
            }
            print(json.dumps(rec, ensure_ascii=False))
        else:
            for w in words:
                print(",".join(map(str, w)))
        return EXIT_OK
    elements = [w for w in weyl_elements(datum, args.max_length) if w]
    if args.format == "json":
        rec = {
            "cartan": datum.name,
            "elements": [
                {"word": list(w), "reduced_words": len(reduced_words(datum, w))}
                for w in elements
            ],
        }
        print(json.dumps(rec, ensure_ascii=False))
    else:
        for w in elements:
            n = len(reduced_words(datum, w))
            print(f"{','.join(map(str, w))}  ({n} reduced words)")
    return EXIT_OK


_SELFTEST = (
    ("A1", (1,), 1, "q^1 · t1^-1"),
    ("A2", (1, 2, 1), 1, "q^1 · t1^-1"),
    ("A2", (1, 2, 1), 2, "q^2 · t1^-1 t2^-1"),
    ("A2", (1, 2, 1), 3, "q^2 · t2^-1 t3^-1"),
    ("B2", (2, 1, 2, 1), 2, None),
    ("G2", (1, 2), 2, None),
)


def cmd_selftest(args: argparse.Namespace) -> int:
    failures = 0
    for cartan, word, k, expect in _SELFTEST:
        datum = _datum(cartan)
        pres = TorusPresentation(datum, word)
        rep = verify_theorem(pres, k)
        chamber = chamber_ansatz(pres, k)
        ok = rep.equal and bool(chamber.exponent_match)
        if expect is not None:
            ok = ok and torus_str(rep.lhs) == expect
        shown = torus_str(rep.lhs)
        status = "ok" if ok else "FAIL"
        print(f"{cartan} word {','.join(map(str, word))} k={k}: {status}  {shown}")
        if not ok:
            failures += 1
    minor = feigin_minor(TorusPresentation(_datum("A2"), (1, 2, 1)), Weight((1, 0)))
    ok = torus_str(minor) == "t2 t3"
    print(f"A2 word 1,2,1 minor lambda=1,0: {'ok' if ok else 'FAIL'}  {torus_str(minor)}")
    if not ok:
        failures += 1
    print(f"selftest: {'all passed' if failures == 0 else f'{failures} failed'}")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcells",
        description="Verify quantum torus images of flag minors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, word_required: bool = True) -> None:
        p.add_argument("--cartan", required=True, help="Cartan type, e.g. A2, B2, G2")
        if word_required:
            p.add_argument("--word", required=True, help="comma-separated letters, 1-based")
        p.add_argument(
            "--search-cap",
            type=int,
            default=_env_int("QCELLS_SEARCH_CAP", 3),
            help="largest coordinate sum tried for the presenting highest weight",
        )
        p.add_argument(
            "--format",
            choices=("text", "json"),
            default=_env_str("QCELLS_FORMAT", "text"),
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=_env_int("QCELLS_JOBS", 1),
            help="worker threads; output order does not depend on this",
        )

    p = sub.add_parser("verify", help="check predicted monomials for one word")
    common(p)
    p.add_argument("--k", default="all", help="position (1-based) or 'all'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verify a whole Weyl group")
    common(p, word_required=False)
    p.add_argument(
        "--max-length", type=int, default=None, help="bound on Weyl element length"
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("feigin-minor", help="print the image of one flag minor")
    common(p)
    p.add_argument(
        "--lambda",
        required=True,
        help="dominant weight, comma-separated coordinates",
    )
    p.set_defaults(func=cmd_feigin_minor)

    p = sub.add_parser("reduced-words", help="list reduced words or elements")
    p.add_argument("--cartan", required=True)
    p.add_argument("--word", default=None, help="element given by any word over the letters")
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default=_env_str("QCELLS_FORMAT", "text"),
    )
    p.set_defaults(func=cmd_reduced_words)

    p = sub.add_parser("selftest", help="run a fixed battery of known values")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PresentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    raise SystemExit(main())
