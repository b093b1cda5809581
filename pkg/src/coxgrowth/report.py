"""Plain-data renderings of results, shared by the CLI and the JSON schema.

Everything returned here is built from ints, strings, bools, lists and
dicts only, with a fixed key order, so ``json.dumps`` output is stable.
Generators and roots are numbered from 1.  Counts are decimal strings;
rates are rational intervals rounded outward to a 10^-40 grid and written
as ``"p/q"`` strings.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import __version__
from .automata import FAIL, Automaton
from .diagram import INF, CoxeterDiagram, GeometricDiagram, as_coxeter, infinity_spanned
from .roots import NEGATIVE_SELF, NOT_SMALL, SmallRootSet

GRID = 10**40


def label_json(m):
    return "inf" if m == INF else m


def fraction_str(q: Fraction):
    return f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction, digits=12):
    """Round-to-nearest decimal rendering of a rational (for display only)."""
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def interval_json(enc, digits=12):
    lo = Fraction(math.floor(enc.lo * GRID), GRID)
    hi = Fraction(math.ceil(enc.hi * GRID), GRID)
    return {"lo": fraction_str(lo), "hi": fraction_str(hi),
            "lo_decimal": decimal_str(enc.lo, digits), "hi_decimal": decimal_str(enc.hi, digits),
            "converged": bool(enc.converged)}


def diagram_json(d: CoxeterDiagram):
    return {"rank": d.rank, "labels": [[label_json(m) for m in row] for row in d.labels]}


def check_json(d):
    cox = as_coxeter(d)
    tree = infinity_spanned(cox)
    labelling = None
    if tree:
        from .diagram import admissible_labelling
        labelling = [p + 1 for p in admissible_labelling(cox, tree)]
    geometric = None
    if isinstance(d, GeometricDiagram):
        geometric = {"ultraparallel_edges": [[i + 1, j + 1] for i, j in
                                             sorted(d.ultraparallel_edges())],
                     "ultraparallel_connected": d.ultraparallel_connected()}
    warnings = []
    if cox.rank >= 2 and cox.is_free_product():
        warnings.append("all labels are inf: free product of Z/2's, every element has a "
                        "unique geodesic")
    if not cox.is_connected():
        warnings.append("diagram is disconnected; analysis will refuse it")
    return {
        "command": "check",
        "kind": "geometric" if geometric is not None else "coxeter",
        "diagram": diagram_json(cox),
        "connected": cox.is_connected(),
        "geometric": geometric,
        "infinity_spanned": bool(tree),
        "reason": None if tree else tree.reason,
        "tree": [[i + 1, j + 1] for i, j in tree.edges] if tree else None,
        "labelling": labelling,
        "free_product": cox.rank >= 2 and cox.is_free_product(),
        "warnings": warnings,
    }


def _action_json(t):
    if t == NOT_SMALL:
        return "not_small"
    if t == NEGATIVE_SELF:
        return "negative_self"
    return t + 1


def roots_json(s: SmallRootSet, digits=30):
    f = s.form.field
    return {
        "command": "roots",
        "diagram": diagram_json(s.diagram),
        "field": {"L": f.L, "degree": f.degree, "generator": f"c = 2cos(pi/{f.L})",
                  "minimal_polynomial": list(f.modulus)},
        "count": len(s),
        "roots": [{"index": k + 1,
                   "exact": [str(c) for c in r],
                   "decimal": [c.decimal(digits) for c in r],
                   "text": s.format_root(k)}
                  for k, r in enumerate(s.roots)],
        "action": [[_action_json(t) for t in row] for row in s.action],
    }


def automaton_json(a: Automaton):
    return {
        "kind": a.kind,
        "alphabet": a.n,
        "order": [i + 1 for i in a.order],
        "states": [[r + 1 for r in st] for st in a.states],
        "transitions": [[None if t == FAIL else t for t in row] for row in a.trans],
    }


def automata_json(automata):
    return {"command": "automaton", "automata": [automaton_json(a) for a in automata]}


def counts_json(w, g, command="growth"):
    return {"command": command, "K": len(w) - 1,
            "w": [str(x) for x in w], "g": [str(x) for x in g]}


def oracle_json(w, g):
    out = counts_json(w, g, "oracle")
    out["depth"] = out.pop("K")
    return out


def _corroboration_json(c):
    out = {}
    for name in ("shortlex", "geo"):
        entry = c[name]
        e = {"dim": entry["dim"], "skipped": entry.get("skipped")}
        if "charpoly" in entry:
            perron = entry["perron"]
            P, Q = entry["series"]
            e.update({
                "charpoly": [str(x) for x in entry["charpoly"]],
                "margin": None if perron is None or perron.margin is None
                else float(f"{perron.margin:.10g}"),
                "corroborated": bool(perron is not None and perron.corroborated),
                "note": "" if perron is None else perron.note,
                "series": {"P": [str(x) for x in P], "Q": [str(x) for x in Q]},
            })
        out[name] = e
    return out


def analysis_json(an, digits=12):
    r = an.report
    delta = None
    if r.delta is not None:
        enc = r.delta_enclosure
        delta = {
            "delta_hat": decimal_str(r.delta.delta_hat, digits),
            "enclosure": None if enc is None else [decimal_str(enc[0], digits),
                                                   decimal_str(enc[1], digits)],
            "ratios": [decimal_str(x, digits) for x in r.delta.ratios],
            "trend": float(f"{r.delta.trend:.10g}"),
            "strict_domination": r.delta.strict_domination,
            "free_product": r.delta.free_product,
        }
    return {
        "command": "analyze",
        "version": __version__,
        "diagram": diagram_json(an.diagram),
        "infinity_spanned": an.spanned,
        "labelling": None if an.labelling is None else [p + 1 for p in an.labelling],
        "shortlex_order": [v + 1 for v in an.order],
        "sigma_size": len(an.roots),
        "states": {"shortlex": len(an.shortlex), "geo": len(an.geo)},
        "K": len(r.w) - 1,
        "w": [str(x) for x in r.w],
        "g": [str(x) for x in r.g],
        "omega": interval_json(r.omega, digits),
        "gamma": interval_json(r.gamma, digits),
        "certificates": {"shortlex": r.shortlex_certificate.to_json(),
                         "geo": r.geo_certificate.to_json()},
        "delta": delta,
        "oracle": an.oracle,
        "corroboration": _corroboration_json(an.corroboration) if an.corroboration else None,
    }


def csv_rows(payload):
    """Header plus rows for the CSV output format."""
    cmd = payload["command"]
    if cmd in ("growth", "oracle", "analyze"):
        ratios = (payload.get("delta") or {}).get("ratios")
        head = ["k", "w_k", "g_k"] + (["r_k"] if cmd == "analyze" else [])
        rows = []
        for k, (w, g) in enumerate(zip(payload["w"], payload["g"])):
            row = [k, w, g]
            if cmd == "analyze":
                row.append(ratios[k] if ratios else "")
            rows.append(row)
        return head, rows
    if cmd == "roots":
        n = payload["diagram"]["rank"]
        head = ["index"] + [f"a{i + 1}" for i in range(n)] + [f"a{i + 1}_decimal"
                                                              for i in range(n)]
        return head, [[r["index"]] + r["exact"] + r["decimal"] for r in payload["roots"]]
    if cmd == "automaton":
        rows = []
        for a in payload["automata"]:
            for k, row in enumerate(a["transitions"]):
                for letter, t in enumerate(row):
                    rows.append([a["kind"], k, letter + 1, "" if t is None else t])
        return ["kind", "state", "letter", "target"], rows
    if cmd == "check":
        rows = [[key, _flat(payload[key])] for key in
                ("kind", "connected", "infinity_spanned", "reason", "tree", "labelling",
                 "free_product")]
        geo = payload["geometric"]
        if geo is not None:
            rows.append(["ultraparallel_connected", _flat(geo["ultraparallel_connected"])])
        return ["field", "value"], rows
    raise ValueError(f"no CSV layout for {cmd}")


def _flat(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join("-".join(map(str, x)) if isinstance(x, list) else str(x) for x in v)
    return str(v)


def _yn(b):
    return "yes" if b else "no"


def text_lines(payload, automata=None):
    """Human-readable report."""
    cmd = payload["command"]
    out = []
    if cmd == "check":
        d = payload["diagram"]
        out.append(f"{payload['kind']} diagram of rank {d['rank']}")
        if payload["geometric"] is not None:
            out.append("bold/dashed subgraph connected: "
                       + _yn(payload["geometric"]["ultraparallel_connected"]))
        out.append(f"connected: {_yn(payload['connected'])}")
        out.append(f"infinity-spanned: {_yn(payload['infinity_spanned'])}")
        if payload["infinity_spanned"]:
            out.append("spanning tree: " + _flat(payload["tree"]))
            out.append("admissible labelling (old -> new): " + ", ".join(
                f"{v + 1}->{p}" for v, p in enumerate(payload["labelling"])))
        else:
            out.append(f"reason: {payload['reason']}")
        out.extend(f"warning: {w}" for w in payload["warnings"])
    elif cmd == "roots":
        f = payload["field"]
        out.append(f"field: Q(c), c = 2cos(pi/{f['L']}), degree {f['degree']}")
        out.append(f"small roots: {payload['count']}")
        for r in payload["roots"]:
            out.append(f"  r{r['index']} = {r['text']}")
            out.append("       ~ (" + ", ".join(r["decimal"]) + ")")
    elif cmd == "automaton":
        for a in payload["automata"]:
            out.append(f"{a['kind']}: {len(a['states'])} states, order "
                       + " ".join(map(str, a["order"])))
            for k, row in enumerate(a["transitions"]):
                label = "{}" if k == 0 else "{" + ", ".join(f"r{r}" for r in a["states"][k]) + "}"
                moves = "  ".join(f"s{i + 1}->{'fail' if t is None else t}"
                                  for i, t in enumerate(row))
                out.append(f"  {k}: {label}  {moves}")
    elif cmd in ("growth", "oracle"):
        out.append("k  w_k  g_k")
        for k, (w, g) in enumerate(zip(payload["w"], payload["g"])):
            out.append(f"{k}  {w}  {g}")
    elif cmd == "analyze":
        out.append(f"rank {payload['diagram']['rank']}, infinity-spanned: "
                   f"{_yn(payload['infinity_spanned'])}")
        out.append("shortlex order: " + " ".join(map(str, payload["shortlex_order"])))
        out.append(f"|Sigma| = {payload['sigma_size']}, states: shortlex "
                   f"{payload['states']['shortlex']}, geo {payload['states']['geo']}")
        for name, key in (("omega", "omega"), ("gamma", "gamma")):
            e = payload[key]
            out.append(f"{name} in [{e['lo_decimal']}, {e['hi_decimal']}]"
                       + ("" if e["converged"] else " (tolerance not reached)"))
        for name, c in payload["certificates"].items():
            tail = f" ({c['reason']})" if c["reason"] else ""
            out.append(f"{name}: {c['conclusion']}{tail}")
        dl = payload["delta"]
        if dl is not None:
            out.append(f"delta ~ {dl['delta_hat']}"
                       + ("" if dl["enclosure"] is None else
                          f" in [{dl['enclosure'][0]}, {dl['enclosure'][1]}]"))
            out.append(f"gamma_lo > omega_hi: {_yn(dl['strict_domination'])}")
            out.append(f"|r_K - 1| = {dl['trend']}")
        o = payload["oracle"]
        if o is not None:
            out.append(f"oracle (k <= {o['depth']}): w {'agrees' if o['w_match'] else 'DIFFERS'}"
                       f", g {'agrees' if o['g_match'] else 'DIFFERS'}")
        c = payload["corroboration"]
        if c is not None:
            for name, e in c.items():
                if e["skipped"]:
                    out.append(f"{name} charpoly skipped: {e['skipped']}")
                else:
                    out.append(f"{name} Perron margin: {e['margin']}"
                               f" ({'corroborated' if e['corroborated'] else 'not corroborated'})")
                    out.append(f"{name} series: P = {' '.join(e['series']['P'])}; "
                               f"Q = {' '.join(e['series']['Q'])}")
        out.append("k  w_k  g_k" + ("  r_k" if dl else ""))
        for k, (w, g) in enumerate(zip(payload["w"], payload["g"])):
            out.append(f"{k}  {w}  {g}" + (f"  {dl['ratios'][k]}" if dl else ""))
    return out
