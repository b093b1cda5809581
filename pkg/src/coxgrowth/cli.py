"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded,
4 internal invariant violated.  Reports go to stdout, diagnostics to stderr.
Default settings can be supplied as a JSON object in the file named by the
``COXGROWTH_CONFIG`` environment variable (keys as in :class:`AnalysisConfig`);
command-line flags take precedence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction

from . import oracle, report
from .analysis import Caps, analyze, build
from .automata import export_dot
from .diagram import parse_diagram
from .errors import InternalInvariantError, ResourceCapError
from .growth import DEFAULT_TOL, count_words

CONFIG_ENV = "COXGROWTH_CONFIG"
EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 2, 3, 4
COMMANDS = ("check", "roots", "automaton", "growth", "analyze", "oracle")


@dataclass(frozen=True)
class AnalysisConfig:
    path: str = ""
    k: int | None = None  # None: 30, or 8 for the oracle command
    tol: Fraction = DEFAULT_TOL
    cap_degree: int = Caps.degree
    cap_sigma: int = Caps.sigma
    cap_states: int = Caps.states
    cap_charpoly: int = Caps.charpoly
    cap_elements: int = Caps.elements
    format: str = "text"
    oracle: bool = False
    dot: bool = False
    corroborate: bool = False
    kind: str = "both"
    figures: str | None = None

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.k is not None and self.k < 0:
            raise ValueError("--k must be non-negative")
        if self.format not in ("text", "json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        self.caps  # validates the caps

    @property
    def caps(self):
        return Caps(self.cap_degree, self.cap_sigma, self.cap_states, self.cap_charpoly,
                    self.cap_elements)

    def horizon(self, command):
        if self.k is not None:
            return self.k
        return oracle.DEFAULT_DEPTH if command == "oracle" else 30


def load_config(env=None) -> AnalysisConfig:
    env = os.environ if env is None else env
    path = env.get(CONFIG_ENV)
    if not path:
        return AnalysisConfig()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(AnalysisConfig)} - {"path"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    if "tol" in data:
        data["tol"] = Fraction(str(data["tol"]))
    return AnalysisConfig(**data)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _tolerance(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None


def make_parser():
    p = argparse.ArgumentParser(
        prog="coxgrowth",
        description="Growth rates of Coxeter groups from small-root automata.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "check": "parse a diagram, report infinity-spanning and the admissible labelling",
        "roots": "list the small roots",
        "automaton": "build the ShortLex and Geo automata",
        "growth": "word and geodesic counts only",
        "analyze": "full pipeline: counts, rates, certificates, delta report",
        "oracle": "brute-force counts by enumerating the group",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("path", help="diagram file ('-' for stdin)")
        sp.add_argument("--format", choices=("text", "json", "csv"))
        sp.add_argument("--k", type=int, help="horizon (default 30; oracle default 8)")
        sp.add_argument("--tol", type=_tolerance, help="rate enclosure width (default 1e-9)")
        sp.add_argument("--cap-degree", type=_positive_int)
        sp.add_argument("--cap-sigma", type=_positive_int)
        sp.add_argument("--cap-states", type=_positive_int)
        sp.add_argument("--cap-charpoly", type=_positive_int)
        sp.add_argument("--cap-elements", type=_positive_int)
        if name == "automaton":
            sp.add_argument("--dot", action="store_true", default=None,
                            help="emit Graphviz DOT instead of a table")
            sp.add_argument("--kind", choices=("shortlex", "geo", "both"))
        if name == "analyze":
            sp.add_argument("--oracle", action="store_true", default=None,
                            help="cross-check counts against brute-force enumeration")
            sp.add_argument("--corroborate", action="store_true", default=None,
                            help="characteristic polynomials, Perron margins, growth series")
            sp.add_argument("--figures", metavar="DIR", help="write PNG figures into DIR")
    return p


def resolve(args, base: AnalysisConfig) -> AnalysisConfig:
    updates = {"path": args.path}
    for f in fields(AnalysisConfig):
        v = getattr(args, f.name, None)
        if f.name != "path" and v is not None:
            updates[f.name] = v
    return replace(base, **updates)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def run_command(command, cfg: AnalysisConfig, text: str):
    """Return ``(payload, raw_text)``; raw_text bypasses formatting (DOT output)."""
    d = parse_diagram(text)
    caps = cfg.caps
    if command == "check":
        return report.check_json(d), None
    if command == "roots":
        _, _, _, s, _, _ = build(d, caps)
        return report.roots_json(s), None
    if command == "automaton":
        _, _, _, _, sl, geo = build(d, caps)
        chosen = {"shortlex": [sl], "geo": [geo], "both": [sl, geo]}[cfg.kind]
        if cfg.dot:
            return None, "".join(export_dot(a) for a in chosen)
        return report.automata_json(chosen), None
    if command == "growth":
        K = cfg.horizon(command)
        _, _, _, _, sl, geo = build(d, caps)
        return report.counts_json(count_words(sl, K), count_words(geo, K)), None
    if command == "oracle":
        from .diagram import as_coxeter
        cox = as_coxeter(d).require_connected()
        res = oracle.explore(cox, cfg.horizon(command), max_degree=caps.degree,
                             max_elements=caps.elements)
        return report.oracle_json(list(res.w), list(res.g)), None
    if command == "analyze":
        an = analyze(d, cfg.horizon(command), cfg.tol, caps, run_oracle=cfg.oracle,
                     corroborate=cfg.corroborate)
        payload = report.analysis_json(an)
        if cfg.figures:
            from .plotting import write_figures
            for path in write_figures(an, cfg.figures):
                print(f"wrote {path}", file=sys.stderr)
        return payload, None
    raise ValueError(f"unknown command {command!r}")


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        head, rows = report.csv_rows(payload)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(head)
        writer.writerows(rows)
        return buf.getvalue()
    return "\n".join(report.text_lines(payload)) + "\n"


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        cfg = resolve(args, load_config())
        payload, raw = run_command(args.command, cfg, _read(cfg.path))
        sys.stdout.write(raw if raw is not None else render(payload, cfg.format))
    except ResourceCapError as exc:
        print(f"coxgrowth: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalInvariantError as exc:
        print(f"coxgrowth: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"coxgrowth: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
