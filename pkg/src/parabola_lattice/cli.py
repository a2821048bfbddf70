"""Command line entry point: ``python -m parabola_lattice <command>``."""

from __future__ import annotations

import argparse
import json
import sys

from . import counting as ct
from . import harness as hs


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parabola-lattice", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, hlp in [
        ("error-grid", "floor-sum error and proof-chain checks over a grid"),
        ("near-grid", "near-curve counts and discrepancy checks over a grid"),
        ("extremal", "rank |E(a,a)|/sqrt(a) over a_min..a_max"),
        ("prove-chain", "dump every intermediate quantity for one cell"),
    ]:
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=1, metavar="N")
        p.add_argument("--seed", type=int, metavar="U64", help="overrides the config seed")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _chain_text(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    lines = ["key,value"]
    for k, v in doc.items():
        if k == "exp_sums":
            lines += [f"S({h}),{re!r}{im:+.17g}j" for h, (re, im) in enumerate(v, 1)]
        else:
            lines.append(f"{k},{v}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = hs.load_spec(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise hs.ConfigError("seed must be an unsigned 64-bit integer")
            spec.seed = args.seed
        if args.threads < 1:
            raise hs.ConfigError("--threads must be >= 1")
        if args.command == "prove-chain":
            cells = spec.instances()
            if len(cells) != 1:
                raise hs.ConfigError(f"prove-chain needs exactly one cell, config gives {len(cells)}")
            inst = cells[0]
            H = None if spec.H_rule[0] == "auto" else spec.H_rule[1]
            doc = hs.prove_chain(inst, spec.epsilon, H)
            _emit(_chain_text(doc, args.format), args.out)
            rows = hs.error_cell("c00000", inst, doc["H"], spec.epsilon, spec.envelope_C, spec.ibound_C)
        elif args.command == "error-grid":
            rows = hs.run_error_grid(spec, args.threads)
        elif args.command == "near-grid":
            rows = hs.run_near_grid(spec, args.threads)
        else:
            rows = hs.extremal_search(spec.a_min, spec.a_max, spec, args.threads)
    except hs.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.command != "prove-chain":
        _emit(hs.to_json(rows) if args.format == "json" else hs.to_csv(rows), args.out)
    return 0 if all(r.passed for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
