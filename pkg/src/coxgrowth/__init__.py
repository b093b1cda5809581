"""Growth of Coxeter groups via small-root automata."""

from .algebra import FieldElement, NumberField, gram_matrix, minimal_polynomial_2cos
from .analysis import Caps, analyze
from .automata import build_geo, build_shortlex, run
from .diagram import (INF, CoxeterDiagram, GeometricDiagram, admissible_labelling,
                      infinity_spanned, parse_diagram, to_coxeter)
from .errors import (CoxGrowthError, DiagramError, InternalInvariantError,
                     ResourceCapError)
from .growth import count_words, growth_rate, perron_certificate, spectral_radius_enclosure
from .roots import small_roots

__version__ = "0.1.0"

__all__ = [
    "INF", "Caps", "CoxGrowthError", "CoxeterDiagram", "DiagramError", "FieldElement",
    "GeometricDiagram", "InternalInvariantError", "NumberField", "ResourceCapError",
    "admissible_labelling", "analyze", "build_geo", "build_shortlex", "count_words",
    "gram_matrix", "growth_rate", "infinity_spanned", "minimal_polynomial_2cos",
    "parse_diagram", "perron_certificate", "run", "small_roots",
    "spectral_radius_enclosure", "to_coxeter",
]
