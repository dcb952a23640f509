"""Flag supermanifolds of type F(m|n; k|l): charts and exact transition maps."""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .superpoly import RationalSuperFunction, SuperPolynomial, VarTable, rf_is_regular
from .supermatrix import SingularMatrix, SuperMatrix, mat_inverse, mat_mul, mat_rows

__all__ = [
    "FlagType",
    "ChartIndex",
    "Chart",
    "Atlas",
    "SingularOverlap",
    "parse_flag",
    "enumerate_charts",
    "standard_chart",
    "standard_index",
    "make_chart",
    "get_atlas",
    "transition",
    "normalize_frames",
    "display_name",
]


class SingularOverlap(ArithmeticError):
    """The C-submatrix selected by the target chart has a singular body."""


@dataclass(frozen=True)
class FlagType:
    m: int
    n: int
    k: tuple[int, ...]
    l: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))
        object.__setattr__(self, "l", tuple(self.l))
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")
        if len(self.k) != len(self.l) or not self.k:
            raise ValueError("k and l must be nonempty and of equal length")
        ks = (self.m,) + self.k
        ls = (self.n,) + self.l
        for s in range(1, len(ks)):
            if not 0 <= ks[s] <= ks[s - 1] or not 0 <= ls[s] <= ls[s - 1]:
                raise ValueError(f"dimensions must decrease weakly: {self}")
        totals = [a + b for a, b in zip(ks, ls)]
        if not all(totals[s] > totals[s + 1] for s in range(len(totals) - 1)) or totals[-1] <= 0:
            raise ValueError(f"total dimensions must decrease strictly and stay positive: {self}")

    @property
    def r(self) -> int:
        return len(self.k)

    @property
    def is_grassmannian(self) -> bool:
        return self.r == 1

    def level_dims(self, s: int) -> tuple[int, int, int, int]:
        """``(k_{s-1}, l_{s-1}, k_s, l_s)`` for level ``s`` (1-based)."""
        ks = (self.m,) + self.k
        ls = (self.n,) + self.l
        return ks[s - 1], ls[s - 1], ks[s], ls[s]

    def dimension(self) -> tuple[int, int]:
        even = odd = 0
        for s in range(1, self.r + 1):
            kp, lp, k, l = self.level_dims(s)
            even += (kp - k) * k + (lp - l) * l
            odd += (kp - k) * l + (lp - l) * k
        return even, odd

    def base(self) -> "FlagType":
        """The Grassmannian of the first level."""
        return FlagType(self.m, self.n, self.k[:1], self.l[:1])

    def chart_count(self) -> int:
        out = 1
        for s in range(1, self.r + 1):
            kp, lp, k, l = self.level_dims(s)
            out *= comb(kp, k) * comb(lp, l)
        return out

    def __str__(self):
        if self.r == 1:
            return f"Gr({self.m}|{self.n}; {self.k[0]}|{self.l[0]})"
        ks = ",".join(map(str, self.k))
        ls = ",".join(map(str, self.l))
        return f"F({self.m}|{self.n}; {ks} | {ls})"


_FLAG_RE = re.compile(r"^\s*F\s*\(\s*(\d+)\s*\|\s*(\d+)\s*;\s*([\d\s,]+)\|([\d\s,]+)\)\s*$")
_GR_RE = re.compile(r"^\s*Gr\s*\(\s*(\d+)\s*\|\s*(\d+)\s*;\s*(\d+)\s*\|\s*(\d+)\s*\)\s*$")


def parse_flag(text: str) -> FlagType:
    """Parse ``"F(2|2; 1,1 | 2,1)"`` or ``"Gr(2|2; 1|1)"``."""
    mt = _GR_RE.match(text)
    if mt:
        m, n, k, l = map(int, mt.groups())
        return FlagType(m, n, (k,), (l,))
    mt = _FLAG_RE.match(text)
    if mt:
        m, n = int(mt.group(1)), int(mt.group(2))
        k = tuple(int(v) for v in mt.group(3).split(",") if v.strip())
        l = tuple(int(v) for v in mt.group(4).split(",") if v.strip())
        return FlagType(m, n, k, l)
    raise ValueError(f"cannot parse flag type {text!r}")


@dataclass(frozen=True)
class ChartIndex:
    """Per level, the 1-based even and odd row sets carrying the identity block."""

    levels: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __str__(self):
        parts = []
        for ev, od in self.levels:
            parts.append("{" + ",".join(map(str, ev)) + "|" + ",".join(map(str, od)) + "}")
        return "".join(parts)

    def to_json(self):
        return [{"even": list(ev), "odd": list(od)} for ev, od in self.levels]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((tuple(d["even"]), tuple(d["odd"])) for d in data))

    @classmethod
    def parse(cls, text: str) -> "ChartIndex":
        levels = []
        for ev, od in re.findall(r"\{([\d,]*)\|([\d,]*)\}", text):
            levels.append((tuple(int(v) for v in ev.split(",") if v),
                           tuple(int(v) for v in od.split(",") if v)))
        if not levels:
            raise ValueError(f"cannot parse chart index {text!r}")
        return cls(tuple(levels))


def enumerate_charts(t: FlagType) -> list[ChartIndex]:
    choices = []
    for s in range(1, t.r + 1):
        kp, lp, k, l = t.level_dims(s)
        choices.append(list(itertools.product(itertools.combinations(range(1, kp + 1), k),
                                              itertools.combinations(range(1, lp + 1), l))))
    return [ChartIndex(tuple(c)) for c in itertools.product(*choices)]


def standard_index(t: FlagType) -> ChartIndex:
    levels = []
    for s in range(1, t.r + 1):
        kp, lp, k, l = t.level_dims(s)
        levels.append((tuple(range(kp - k + 1, kp + 1)), tuple(range(lp - l + 1, lp + 1))))
    return ChartIndex(tuple(levels))


_GREEK = {"xi": "ξ", "eta": "η"}


def display_name(name: str) -> str:
    """``xi2_13`` -> ``ξ^2_{13}``."""
    mt = re.match(r"^(x|y|xi|eta)(\d+)_(\d+)$", name)
    if not mt:
        return name
    base, s, ij = mt.groups()
    return f"{_GREEK.get(base, base)}^{s}_{{{ij}}}"


def _entry_name(s: int, row_par: int, row: int, col_par: int, col: int) -> str:
    base = {(0, 0): "x", (0, 1): "xi", (1, 0): "eta", (1, 1): "y"}[(row_par, col_par)]
    return f"{base}{s}_{row}{col}" if row < 10 and col < 10 else f"{base}{s}_{row}.{col}"


class Chart:
    """Coordinates of one chart: a VarTable and the matrices Z_{I_1..I_r}.

    Rows of Z_{I_s} are the even rows 1..k_{s-1} followed by the odd rows
    1..l_{s-1}; columns likewise.  Free entries are named by level, row and
    column, e.g. ``xi1_12`` sits in even row 1 and odd column 2 of level 1.
    """

    def __init__(self, flag: FlagType, index: ChartIndex):
        self.flag = flag
        self.index = index
        even, odd = [], []
        layout = []  # per level: list of (row_par, row, col_par, col, name or planted value)
        for s, (I_ev, I_od) in enumerate(index.levels, start=1):
            kp, lp, k, l = flag.level_dims(s)
            if len(I_ev) != k or len(I_od) != l:
                raise ValueError(f"chart index {index} does not fit {flag}")
            rows = [(0, i) for i in range(1, kp + 1)] + [(1, i) for i in range(1, lp + 1)]
            cols = [(0, j) for j in range(1, k + 1)] + [(1, j) for j in range(1, l + 1)]
            ident = {(0, i): (0, a + 1) for a, i in enumerate(I_ev)}
            ident.update({(1, i): (1, a + 1) for a, i in enumerate(I_od)})
            cells = []
            lev_x, lev_y, lev_xi, lev_eta = [], [], [], []
            for rp, ri in rows:
                row_cells = []
                for cp, cj in cols:
                    if (rp, ri) in ident:
                        row_cells.append(1 if ident[(rp, ri)] == (cp, cj) else 0)
                    else:
                        name = _entry_name(s, rp, ri, cp, cj)
                        row_cells.append(name)
                        {(0, 0): lev_x, (1, 1): lev_y, (0, 1): lev_xi, (1, 0): lev_eta}[(rp, cp)].append(name)
                cells.append(row_cells)
            even += lev_x + lev_y
            odd += lev_xi + lev_eta
            layout.append((cells, [p for p, _ in rows], [p for p, _ in cols]))
        self.table = VarTable(even, odd)
        self.level_of = {}
        self.matrices = []
        for s, (cells, rpar, cpar) in enumerate(layout, start=1):
            entries = []
            for row in cells:
                out = []
                for v in row:
                    if isinstance(v, str):
                        self.level_of[v] = s
                        out.append(SuperPolynomial.var(self.table, v))
                    else:
                        out.append(v)
                entries.append(out)
            self.matrices.append(SuperMatrix(self.table, entries, rpar, cpar))
        self._layout = layout

    @property
    def names(self) -> tuple[str, ...]:
        return self.table.names

    def variables(self) -> dict[str, SuperPolynomial]:
        return {n: SuperPolynomial.var(self.table, n) for n in self.table.names}

    def level_names(self, s: int) -> list[str]:
        return [v for v in self.table.names if self.level_of[v] == s]

    def free_positions(self, s: int):
        """``(name, row, col)`` with raw 0-based positions of the free entries of Z_{I_s}."""
        cells = self._layout[s - 1][0]
        out = []
        for i, row in enumerate(cells):
            for j, v in enumerate(row):
                if isinstance(v, str):
                    out.append((v, i, j))
        return out

    def planted_positions(self, s: int):
        cells = self._layout[s - 1][0]
        return [(i, j, v) for i, row in enumerate(cells) for j, v in enumerate(row) if not isinstance(v, str)]

    def identity_rows(self, s: int) -> tuple[list[int], list[int]]:
        """0-based positions inside the even and odd row groups of the identity rows."""
        I_ev, I_od = self.index.levels[s - 1]
        return [i - 1 for i in I_ev], [i - 1 for i in I_od]

    def display_names(self) -> dict[str, str]:
        return {v: display_name(v) for v in self.table.names}

    def pretty(self) -> str:
        names = self.display_names()
        return "\n\n".join(f"Z_{s}:\n" + z.pretty(names) for s, z in enumerate(self.matrices, start=1))

    def __repr__(self):
        return f"Chart({self.flag}, {self.index})"

    def __eq__(self, other):
        return isinstance(other, Chart) and (self.flag, self.index) == (other.flag, other.index)

    def __hash__(self):
        return hash((self.flag, self.index))


def normalize_frames(chart_to: Chart, frames: list[SuperMatrix]) -> dict[str, RationalSuperFunction]:
    """Bring a stack of frame matrices to the normal form of ``chart_to``.

    ``frames[0]`` is the (m|n) x (k_1|l_1) frame of the first level and
    ``frames[s]`` the coordinate matrix of level s+1 relative to level s.
    Returns the values of the free coordinates of ``chart_to``.
    """
    values: dict[str, RationalSuperFunction] = {}
    carry = None
    for s, Z in enumerate(frames, start=1):
        M = Z if carry is None else mat_mul(carry, Z)
        ev, od = chart_to.identity_rows(s)
        C = mat_rows(M, ev, od)
        try:
            Ci = mat_inverse(C)
        except SingularMatrix as exc:
            raise SingularOverlap(f"level {s}: rows {chart_to.index.levels[s - 1]} give a singular block") from exc
        N = mat_mul(M, Ci)
        for i, j, v in chart_to.planted_positions(s):
            if N.entries[i][j] != v:
                raise ArithmeticError(f"planted entry ({i},{j}) of level {s} came out as {N.entries[i][j]}")
        for name, i, j in chart_to.free_positions(s):
            values[name] = N.entries[i][j]
        carry = C
    return values


class Atlas:
    """All charts of a flag type with a lazily filled, lock-protected transition cache."""

    def __init__(self, flag: FlagType):
        self.flag = flag
        self.indices = enumerate_charts(flag)
        self._charts = {idx: Chart(flag, idx) for idx in self.indices}
        self.standard = self._charts[standard_index(flag)]
        self._cache: dict = {}
        self._lock = threading.Lock()

    def chart(self, index) -> Chart:
        if isinstance(index, Chart):
            return index
        if isinstance(index, str):
            index = ChartIndex.parse(index)
        return self._charts[index]

    @property
    def charts(self) -> list[Chart]:
        return [self._charts[i] for i in self.indices]

    def transition(self, src, dst) -> dict[str, RationalSuperFunction]:
        """Target coordinates as functions of the source coordinates."""
        src = self.chart(src)
        dst = self.chart(dst)
        key = (src.index, dst.index)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            if isinstance(hit, Exception):
                raise hit
            return hit
        try:
            if src.index == dst.index:
                value = {v: RationalSuperFunction.from_poly(SuperPolynomial.var(src.table, v))
                         for v in src.names}
            else:
                value = normalize_frames(dst, list(src.matrices))
        except SingularOverlap as exc:
            with self._lock:
                self._cache[key] = exc
            raise
        with self._lock:
            self._cache.setdefault(key, value)
            return self._cache[key]

    def polynomial_transition(self, src, dst) -> dict[str, SuperPolynomial] | None:
        """The transition when all its components are polynomial, else ``None``."""
        out = {}
        for v, f in self.transition(src, dst).items():
            ok, q = rf_is_regular(f)
            if not ok:
                return None
            out[v] = q
        return out


@lru_cache(maxsize=None)
def get_atlas(flag: FlagType) -> Atlas:
    return Atlas(flag)


def make_chart(flag: FlagType, index: ChartIndex) -> Chart:
    return get_atlas(flag).chart(index)


def standard_chart(flag: FlagType) -> Chart:
    return get_atlas(flag).standard


def transition(flag: FlagType, src, dst) -> dict[str, RationalSuperFunction]:
    return get_atlas(flag).transition(src, dst)
