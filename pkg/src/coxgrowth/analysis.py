"""End-to-end pipeline: diagram -> small roots -> automata -> growth data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .algebra import DEFAULT_MAX_DEGREE
from .automata import DEFAULT_MAX_STATES, Automaton, build_geo, build_shortlex
from .diagram import CoxeterDiagram, as_coxeter, admissible_labelling, infinity_spanned
from .errors import ResourceCapError
from .growth import (DEFAULT_CHARPOLY_DIM, DEFAULT_MAX_ITER, DEFAULT_TOL, GrowthReport,
                     characteristic_polynomial, corroborate_perron, count_words, delta_report,
                     growth_rate, perron_certificate, rational_series)
from .roots import DEFAULT_MAX_ROOTS, SmallRootSet, small_roots

# Strict domination is checked on outer bounds; when the default-width
# intervals still overlap we shrink the tolerance this many times (x1000 each).
REFINE_STEPS = 3


@dataclass(frozen=True)
class Caps:
    degree: int = DEFAULT_MAX_DEGREE
    sigma: int = DEFAULT_MAX_ROOTS
    states: int = DEFAULT_MAX_STATES
    charpoly: int = DEFAULT_CHARPOLY_DIM
    elements: int = oracle.DEFAULT_MAX_ELEMENTS

    def __post_init__(self):
        for name in ("degree", "sigma", "states", "charpoly", "elements"):
            if getattr(self, name) < 1:
                raise ValueError(f"cap {name} must be positive")


@dataclass
class Analysis:
    diagram: CoxeterDiagram
    tree: object  # SpanningTree or NotSpanned
    labelling: tuple | None  # perm[old] = new when infinity-spanned
    order: tuple  # ShortLex generator priority
    roots: SmallRootSet
    shortlex: Automaton
    geo: Automaton
    report: GrowthReport
    oracle: dict | None = None
    corroboration: dict = field(default_factory=dict)

    @property
    def spanned(self):
        return bool(self.tree)

    @property
    def first_generator(self):
        """The vertex playing the role of generator 1 in the admissible labelling."""
        return self.order[0]


def shortlex_order(d: CoxeterDiagram):
    """(tree, perm, order): order lists vertices by their admissible label."""
    tree = infinity_spanned(d)
    if not tree:
        return tree, None, tuple(range(d.rank))
    perm = admissible_labelling(d, tree)
    order = tuple(sorted(range(d.rank), key=lambda v: perm[v]))
    return tree, perm, order


def build(d, caps: Caps = Caps()):
    """Small roots and both automata for a connected diagram."""
    d = as_coxeter(d).require_connected()
    tree, perm, order = shortlex_order(d)
    s = small_roots(d, caps.degree, caps.sigma)
    sl = build_shortlex(s, order, caps.states)
    geo = build_geo(s, caps.states)
    return tree, perm, order, s, sl, geo


def analyze(d, K=30, tol=DEFAULT_TOL, caps: Caps = Caps(), run_oracle=False, oracle_depth=8,
            corroborate=False, max_iter=DEFAULT_MAX_ITER) -> Analysis:
    tol = Fraction(tol)
    if not 0 < tol < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    if K < 0:
        raise ValueError("horizon K must be non-negative")
    tree, perm, order, s, sl, geo = build(d, caps)
    d = s.diagram
    w, g = count_words(sl, K), count_words(geo, K)
    omega = growth_rate(sl, tol, max_iter)
    gamma = growth_rate(geo, tol, max_iter)
    cert_sl, cert_geo = perron_certificate(sl), perron_certificate(geo)
    free = d.is_free_product()

    delta = None
    if bool(tree) and cert_sl.certified and cert_geo.certified:
        t = tol
        for _ in range(REFINE_STEPS):
            if free or gamma.lo > omega.hi:
                break
            t /= 1000
            omega, gamma = growth_rate(sl, t, max_iter), growth_rate(geo, t, max_iter)
        delta = delta_report(w, g, omega, gamma, K, (cert_sl, cert_geo), free)

    report = GrowthReport(w, g, omega, gamma, cert_sl, cert_geo, delta)
    result = Analysis(d, tree, perm, order, s, sl, geo, report)

    if run_oracle:
        depth = min(K, oracle_depth)
        res = oracle.explore(d, depth, order=order, max_degree=caps.degree,
                             max_elements=caps.elements)
        result.oracle = {
            "depth": depth, "w": list(res.w), "g": list(res.g),
            "w_match": list(res.w) == w[:depth + 1],
            "g_match": list(res.g) == g[:depth + 1],
        }
    if corroborate:
        result.corroboration = corroboration(sl, geo, omega, gamma, caps.charpoly)
    return result


def corroboration(sl, geo, omega, gamma, cap=DEFAULT_CHARPOLY_DIM):
    """Characteristic polynomials, numeric Perron margins and rational growth series."""
    from .growth import transfer_matrix

    out = {}
    for name, a, rho in (("shortlex", sl, omega), ("geo", geo, gamma)):
        T = transfer_matrix(a)
        entry = {"dim": T.dim}
        try:
            p = characteristic_polynomial(T, cap)
        except ResourceCapError as exc:
            entry["skipped"] = str(exc)
            out[name] = entry
            continue
        entry["charpoly"] = p
        entry["perron"] = corroborate_perron(p, rho) if rho.hi > 0 else None
        entry["series"] = rational_series(a, cap)
        out[name] = entry
    return out
