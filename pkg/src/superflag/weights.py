"""Torus weights, dominance, Weyl dimensions and H^0 counts for homogeneous bundles.

Weights are integer vectors in the basis mu_1..mu_m, lambda_1..lambda_n of the
diagonal torus of gl_m + gl_n.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

__all__ = [
    "Weight",
    "PsiRepresentation",
    "NotDominant",
    "weight_of",
    "torus_fields",
    "is_dominant",
    "weyl_dim",
    "gl_weyl_dim",
    "gelfand_tsetlin_dim",
    "restrict",
    "psi_weights",
    "bwb_sections",
    "EQ11_ROWS",
    "eq11_rows",
    "eq11_expected",
    "section_table",
    "format_table",
]


@dataclass(frozen=True)
class Weight:
    mu: tuple
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(a) for a in self.mu))
        object.__setattr__(self, "lam", tuple(int(a) for a in self.lam))

    @property
    def m(self) -> int:
        return len(self.mu)

    @property
    def n(self) -> int:
        return len(self.lam)

    @classmethod
    def zero(cls, m: int, n: int) -> "Weight":
        return cls((0,) * m, (0,) * n)

    @classmethod
    def from_terms(cls, m: int, n: int, terms: dict) -> "Weight":
        """``terms`` maps ("mu", i) / ("lam", j) with 1-based indices to coefficients."""
        mu, lam = [0] * m, [0] * n
        for (kind, i), c in terms.items():
            if not 1 <= i <= (m if kind == "mu" else n):
                raise ValueError(f"index {kind}_{i} out of range for m={m}, n={n}")
            (mu if kind == "mu" else lam)[i - 1] += c
        return cls(mu, lam)

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.mu, other.mu)),
                      tuple(a + b for a, b in zip(self.lam, other.lam)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.mu), tuple(-a for a in self.lam))

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.mu) and not any(self.lam)

    def __str__(self):
        parts = []
        for sym, vec in (("μ", self.mu), ("λ", self.lam)):
            for i, c in enumerate(vec, 1):
                if c:
                    parts.append((c, f"{sym}{i}"))
        if not parts:
            return "0"
        parts.sort(key=lambda p: p[0] < 0)
        out = ""
        for c, s in parts:
            mag = "" if abs(c) == 1 else str(abs(c))
            if not out:
                out = ("-" if c < 0 else "") + mag + s
            else:
                out += (" - " if c < 0 else " + ") + mag + s
        return out

    def to_json(self):
        return {"mu": list(self.mu), "lambda": list(self.lam)}

    @classmethod
    def from_json(cls, data):
        return cls(data["mu"], data["lambda"])


class NotDominant(ValueError):
    pass


def torus_fields(chart):
    """Fundamental fields of E_11, ..., E_{m+n,m+n} on ``chart``."""
    from .fields import fundamental_field
    from .lie_superalgebra import E

    m, n = chart.flag.m, chart.flag.n
    return [fundamental_field(E(m, n, i, i), chart) for i in range(1, m + n + 1)]


def weight_of(v, chart=None, torus=None):
    """Joint eigenvalues of ``ad mu(E_ii)`` on ``v`` as a Weight, or None if ``v`` is not a weight vector."""
    from .fields import eigenvalue, field_bracket

    chart = chart or v.chart
    if chart is None:
        raise ValueError("weight_of needs a chart")
    if not v:
        return None
    torus = torus if torus is not None else torus_fields(chart)
    vals = []
    for h in torus:
        w = field_bracket(h, v)
        lam = Fraction(0) if not w else eigenvalue(w, v)
        if lam is None or lam.denominator != 1:
            return None
        vals.append(int(lam))
    m = chart.flag.m
    return Weight(vals[:m], vals[m:])


def is_dominant(w: Weight) -> bool:
    return all(a >= b for a, b in zip(w.mu, w.mu[1:])) and all(a >= b for a, b in zip(w.lam, w.lam[1:]))


def gl_weyl_dim(hw) -> int:
    """Weyl dimension of the gl_N module with weakly decreasing highest weight ``hw``."""
    hw = list(hw)
    if any(a < b for a, b in zip(hw, hw[1:])):
        raise NotDominant(f"{hw} is not weakly decreasing")
    num = prod((hw[i] - hw[j] + j - i) for i, j in itertools.combinations(range(len(hw)), 2))
    den = prod((j - i) for i, j in itertools.combinations(range(len(hw)), 2))
    return num // den


def weyl_dim(w: Weight) -> int:
    if not is_dominant(w):
        raise NotDominant(f"{w} is not dominant")
    return gl_weyl_dim(w.mu) * gl_weyl_dim(w.lam)


@lru_cache(maxsize=None)
def _gt_count(top: tuple) -> int:
    if len(top) <= 1:
        return 1
    ranges = [range(top[i + 1], top[i] + 1) for i in range(len(top) - 1)]
    return sum(_gt_count(row) for row in itertools.product(*ranges))


def gelfand_tsetlin_dim(w: Weight) -> int:
    """Dimension by enumerating Gelfand-Tsetlin patterns; independent of the Weyl formula."""
    if not is_dominant(w):
        raise NotDominant(f"{w} is not dominant")
    return _gt_count(w.mu) * _gt_count(w.lam)


def restrict(w: Weight, k: int, l: int) -> Weight:
    """Restriction to the torus of gl_k + gl_l acting on the last k even and last l odd slots."""
    return Weight(w.mu[w.m - k:], w.lam[w.n - l:])


@dataclass
class PsiRepresentation:
    m: int
    n: int
    weights: Counter = field(default_factory=Counter)
    k1: int | None = None
    l1: int | None = None
    case: str = "generic"

    def __post_init__(self):
        self.weights = Counter(self.weights)
        if any(c <= 0 for c in self.weights.values()):
            raise ValueError("multiplicities must be positive")

    def items(self):
        return sorted(self.weights.items(), key=lambda kv: (kv[0].mu, kv[0].lam), reverse=True)

    def local_dimension(self) -> int:
        """Sum of Weyl dimensions of the stabilizer-factor modules, i.e. the fiber dimension."""
        k, l = (2, 2) if self.case != "generic" else (self.k1, self.l1)
        return sum(c * weyl_dim(restrict(w, k, l)) for w, c in self.weights.items())

    def to_json(self):
        return {"m": self.m, "n": self.n, "k1": self.k1, "l1": self.l1, "case": self.case,
                "weights": [[w.to_json(), c] for w, c in self.items()]}


def psi_weights(m: int, n: int, k1: int, l1: int, case: str = "generic") -> PsiRepresentation:
    """Highest weights of the stabilizer acting on the fiber, in ambient coordinates.

    ``case`` is "generic" (fiber pgl_{k1|l1} or gl_{k1}, gl_{l1} adjoint),
    "a" (fiber Gr(2|2; 1|1)), "b+" (fibers whose extra field has weight
    mu_{m-1}+mu_m-lambda_{n-1}-lambda_n) or "b-" (the opposite weight).
    """
    if not (0 <= k1 <= m and 0 <= l1 <= n):
        raise ValueError(f"need 0 <= k1 <= m and 0 <= l1 <= n, got {(m, n, k1, l1)}")

    def W(*pairs):
        t = {}
        for kind, i, c in pairs:
            t[(kind, i)] = t.get((kind, i), 0) + c
        return Weight.from_terms(m, n, t)

    out = Counter()
    if case == "generic":
        a, b = m - k1 + 1, n - l1 + 1
        if k1 > 1:
            out[W(("mu", a, 1), ("mu", m, -1))] += 1
        if l1 > 1:
            out[W(("lam", b, 1), ("lam", n, -1))] += 1
        if k1 > 0 and l1 > 0:
            out[W(("mu", a, 1), ("lam", n, -1))] += 1
            out[W(("lam", b, 1), ("mu", m, -1))] += 1
            out[Weight.zero(m, n)] += 1
    elif case in ("a", "b+", "b-"):
        if m < 2 or n < 2:
            raise ValueError("exceptional fibers need m, n >= 2")
        out[W(("mu", m - 1, 1), ("mu", m, -1))] += 1
        out[W(("lam", n - 1, 1), ("lam", n, -1))] += 1
        out[W(("mu", m - 1, 1), ("lam", n, -1))] += 1
        out[W(("lam", n - 1, 1), ("mu", m, -1))] += 1
        out[Weight.zero(m, n)] += 1
        extra = W(("mu", m - 1, 1), ("mu", m, 1), ("lam", n - 1, -1), ("lam", n, -1))
        if case in ("a", "b+"):
            out[extra] += 1
        if case in ("a", "b-"):
            out[-extra] += 1
    else:
        raise ValueError(f"unsupported case tag {case!r}")
    return PsiRepresentation(m, n, out, k1, l1, case)


def bwb_sections(rep: PsiRepresentation):
    """``(dimension, [(weight, multiplicity, weyl_dim)])`` over the dominant highest weights."""
    survivors = [(w, c, weyl_dim(w)) for w, c in rep.items() if is_dominant(w)]
    return sum(c * d for _, c, d in survivors), survivors


# Rows of the section table: (modules, predicate on (m, n, k1, l1)).
EQ11_ROWS = [
    (("C",), lambda m, n, k, l: 0 < k < m and 0 < l < n),
    (("r1", "r2", "C"), lambda m, n, k, l: 1 < k == m and 0 < l < n),
    (("r3", "r4", "C"), lambda m, n, k, l: 0 < k < m and 1 < l == n),
    (("r2", "C"), lambda m, n, k, l: 1 == k == m and 0 < l < n),
    (("r3", "C"), lambda m, n, k, l: 0 < k < m and 1 == l == n),
    ((), lambda m, n, k, l: 0 < k < m and 0 == l <= n),
    ((), lambda m, n, k, l: 0 == k <= m and 0 < l < n),
    ((), lambda m, n, k, l: 0 == k < m and 1 == l <= n),
    ((), lambda m, n, k, l: 1 == k <= m and 0 == l < n),
    (("r1",), lambda m, n, k, l: 1 < k == m and 0 == l < n),
    (("r4",), lambda m, n, k, l: 0 == k < m and 1 < l == n),
]


def eq11_rows(m: int, n: int, k1: int, l1: int) -> list[int]:
    """Indices of every table row whose condition holds; more than one means an overlap."""
    return [i for i, (_, pred) in enumerate(EQ11_ROWS) if pred(m, n, k1, l1)]


def _module_weight(name: str, m: int, n: int) -> Weight:
    pairs = {"C": {}, "r1": {("mu", 1): 1, ("mu", m): -1}, "r2": {("mu", 1): 1, ("lam", n): -1},
             "r3": {("lam", 1): 1, ("mu", m): -1}, "r4": {("lam", 1): 1, ("lam", n): -1}}[name]
    t = {}
    for key, c in pairs.items():
        t[key] = t.get(key, 0) + c
    return Weight.from_terms(m, n, t)


def eq11_expected(m: int, n: int, k1: int, l1: int):
    """``(dimension, modules, rows)`` predicted by the table, or None when no row applies.

    Raises ValueError if overlapping rows disagree.
    """
    rows = eq11_rows(m, n, k1, l1)
    if not rows:
        return None
    answers = {EQ11_ROWS[i][0] for i in rows}
    if len(answers) > 1:
        raise ValueError(f"overlapping rows {rows} disagree at {(m, n, k1, l1)}")
    modules = answers.pop()
    dim = sum(weyl_dim(_module_weight(s, m, n)) for s in modules)
    return dim, modules, rows


def section_table(max_m: int = 4, max_n: int = 4):
    """One record per (m, n, k1, l1) with a nontrivial proper first step."""
    out = []
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            for k1 in range(m + 1):
                for l1 in range(n + 1):
                    if (k1, l1) in ((0, 0), (m, n)):
                        continue
                    dim, surv = bwb_sections(psi_weights(m, n, k1, l1))
                    exp = eq11_expected(m, n, k1, l1)
                    out.append({
                        "m": m, "n": n, "k1": k1, "l1": l1,
                        "dimension": dim,
                        "modules": [str(w) for w, _, _ in surv],
                        "rows": exp[2] if exp else [],
                        "expected": exp[0] if exp else None,
                        "overlap": bool(exp and len(exp[2]) > 1),
                        "match": exp is not None and exp[0] == dim,
                    })
    return out


def format_table(records) -> str:
    lines = [f"{'m':>2} {'n':>2} {'k1':>3} {'l1':>3} {'dim':>4} {'table':>5}  rows      highest weights"]
    for r in records:
        exp = "-" if r["expected"] is None else str(r["expected"])
        rows = ",".join(str(i + 1) for i in r["rows"]) or "-"
        flag = "" if r["match"] else "  MISMATCH"
        if r["overlap"]:
            flag += "  (overlap)"
        lines.append(f"{r['m']:>2} {r['n']:>2} {r['k1']:>3} {r['l1']:>3} {r['dimension']:>4} {exp:>5}  "
                     f"{rows:<8}  {', '.join(r['modules']) or '-'}{flag}")
    return "\n".join(lines)
