"""Reference vector fields typed in by hand, used by the verifier suites.

Each field is ``{short coordinate: [(coefficient, "factor factor ..."), ...]}``;
monomials are products of the listed coordinates in the given order.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import SuperDerivation
from .flag_atlas import Chart, parse_flag, standard_chart
from .superpoly import SuperPolynomial

__all__ = [
    "GR2211_SPACE",
    "GR2211_NAMES",
    "GR2211_MU",
    "GR2211_EXTRA",
    "GR2212_SPACE",
    "GR2212_NAMES",
    "GR2212_H4",
    "GR2212_Z",
    "build",
]

GR2211_SPACE = "Gr(2|2; 1|1)"
GR2211_NAMES = {"x": "x1_11", "y": "y1_11", "xi": "xi1_11", "eta": "eta1_11"}

# fundamental fields of E_ab on the chart [[x, xi], [1, 0], [eta, y], [0, 1]]
GR2211_MU = {
    (1, 1): {"x": [(1, "x")], "xi": [(1, "xi")]},
    (1, 2): {"x": [(1, "")]},
    (2, 2): {"x": [(-1, "x")], "eta": [(-1, "eta")]},
    (2, 1): {"x": [(-1, "x x")], "eta": [(-1, "x eta")], "xi": [(-1, "x xi")], "y": [(1, "xi eta")]},
    (3, 4): {"y": [(1, "")]},
    (4, 3): {"y": [(-1, "y y")], "xi": [(-1, "y xi")], "eta": [(-1, "y eta")], "x": [(-1, "xi eta")]},
    (3, 3): {"y": [(1, "y")], "eta": [(1, "eta")]},
    (4, 4): {"y": [(-1, "y")], "xi": [(-1, "xi")]},
    (1, 4): {"xi": [(1, "")]},
    (3, 2): {"eta": [(1, "")]},
    (1, 3): {"x": [(1, "eta")], "xi": [(1, "y")]},
    (3, 1): {"y": [(1, "xi")], "eta": [(1, "x")]},
    (2, 3): {"x": [(-1, "x eta")], "xi": [(-1, "x y")], "y": [(1, "y eta")]},
    (4, 1): {"y": [(-1, "y xi")], "eta": [(-1, "x y")], "x": [(1, "x xi")]},
    (2, 4): {"xi": [(-1, "x")], "y": [(1, "eta")]},
    (4, 2): {"eta": [(-1, "y")], "x": [(1, "xi")]},
}

# the two global fields outside the image of gl(2|2)
GR2211_EXTRA = {
    "eta d/dxi": {"xi": [(1, "eta")]},
    "xi d/deta": {"eta": [(1, "xi")]},
}

GR2212_SPACE = "Gr(2|2; 1|2)"
GR2212_NAMES = {"x": "x1_11", "xi1": "xi1_11", "xi2": "xi1_12"}

# graded basis (degree, field) on the chart [[x, xi1, xi2], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
GR2212_H4 = [
    (-1, {"xi1": [(1, "")]}),
    (-1, {"xi2": [(1, "")]}),
    (-1, {"xi1": [(1, "x")]}),
    (-1, {"xi2": [(1, "x")]}),
    (0, {"x": [(1, "")]}),
    (0, {"x": [(1, "x")], "xi1": [(1, "xi1")]}),
    (0, {"x": [(1, "x")], "xi2": [(1, "xi2")]}),
    (0, {"xi2": [(1, "xi1")]}),
    (0, {"xi1": [(1, "xi2")]}),
    (0, {"xi1": [(1, "x xi1")], "xi2": [(1, "x xi2")], "x": [(1, "x x")]}),
    (1, {"x": [(1, "xi1")]}),
    (1, {"x": [(1, "xi2")]}),
    (1, {"x": [(1, "x xi1")], "xi2": [(1, "xi1 xi2")]}),
    (1, {"x": [(1, "x xi2")], "xi1": [(-1, "xi1 xi2")]}),
    (2, {"x": [(1, "xi1 xi2")]}),
]

GR2212_Z = {"xi1": [(1, "xi1")], "xi2": [(1, "xi2")]}


def build(data: dict, chart: Chart | None = None, names: dict | None = None,
          space: str | None = None) -> SuperDerivation:
    """Turn a hand-typed field into a SuperDerivation on ``chart`` (default: standard chart of ``space``)."""
    if chart is None:
        chart = standard_chart(parse_flag(space))
    names = names or {}
    V = chart.variables()
    coeffs = {}
    for short, terms in data.items():
        total = 0
        for c, word in terms:
            mono = SuperPolynomial.const(chart.table, Fraction(c))
            for f in word.split():
                mono = mono * V[names.get(f, f)]
            total = total + mono
        coeffs[names.get(short, short)] = total
    return SuperDerivation(chart, coeffs)
