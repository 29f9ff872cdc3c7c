"""Trace-induced sesquilinear forms on the Temperley-Lieb tower.

``gram`` builds exact Gram matrices with certified signatures, ``witness``
searches for indefiniteness certificates at roots of unity, ``diamond``
holds the corrected involution at ``delta = 0``, ``radical`` the norm series
of radical elements, and ``onb`` a high-precision path-basis backend.
"""

from .diamond import (
    DiamondTable,
    MissingImage,
    default_table,
    diamond_gram,
    diamond_norm,
    diamond_zero,
)
from .gram import GramReport, diagram_basis, gram, inequivalence_ratios
from .radical import Divergent, l3_radical_example, radical_norm_bound
from .witness import NoWitness, NotFound, WitnessPair, indefiniteness_witness

__all__ = [
    "DiamondTable",
    "Divergent",
    "GramReport",
    "MissingImage",
    "NoWitness",
    "NotFound",
    "WitnessPair",
    "default_table",
    "diagram_basis",
    "diamond_gram",
    "diamond_norm",
    "diamond_zero",
    "gram",
    "indefiniteness_witness",
    "inequivalence_ratios",
    "l3_radical_example",
    "radical_norm_bound",
]
