"""Exact arithmetic in Q[x_1..x_p] (x) Lambda(xi_1..xi_q) and its localization.

A :class:`SuperPolynomial` stores terms keyed by ``(even_exponents, odd_mask)``
where ``odd_mask`` is a bitmask over the odd variables of its
:class:`VarTable`; bit ``j`` set means the odd variable ``j`` occurs.  The
monomial itself is read in increasing index order, so the sign of any
reordering is folded into the rational coefficient.

A :class:`RationalSuperFunction` is ``num / den`` where ``den`` is a product of
powers of odd-free polynomials ("factors").  Denominators only ever arise from
:func:`sp_invert`, so they never contain odd variables.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "VarTable",
    "SuperPolynomial",
    "RationalSuperFunction",
    "VarTableMismatch",
    "sp_add",
    "sp_mul",
    "sp_partial",
    "sp_substitute",
    "sp_invert",
    "rf_is_regular",
]


class VarTableMismatch(ValueError):
    pass


class VarTable:
    """Ordered even and odd variable names.

    ``nilpotent`` names even variables that square to zero; they model the
    formal parameter of a one-parameter subgroup.
    """

    __slots__ = ("even", "odd", "nilpotent", "_index", "_nil_idx", "_hash")

    def __init__(self, even_names: Iterable[str] = (), odd_names: Iterable[str] = (),
                 nilpotent: Iterable[str] = ()):
        self.even = tuple(even_names)
        self.odd = tuple(odd_names)
        self.nilpotent = frozenset(nilpotent)
        index = {}
        for i, name in enumerate(self.even):
            index[name] = (0, i)
        for j, name in enumerate(self.odd):
            if name in index:
                raise ValueError(f"duplicate variable name {name!r}")
            index[name] = (1, j)
        if len(index) != len(self.even) + len(self.odd):
            raise ValueError("duplicate variable names")
        if not self.nilpotent <= set(self.even):
            raise ValueError("nilpotent variables must be even")
        self._index = index
        self._nil_idx = tuple(sorted(index[v][1] for v in self.nilpotent))
        self._hash = hash((self.even, self.odd, self.nilpotent))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VarTable):
            return NotImplemented
        return (self.even, self.odd, self.nilpotent) == (other.even, other.odd, other.nilpotent)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VarTable(even={list(self.even)}, odd={list(self.odd)})"

    def __contains__(self, name):
        return name in self._index

    @property
    def names(self) -> tuple[str, ...]:
        return self.even + self.odd

    def locate(self, name: str) -> tuple[int, int]:
        """Return ``(parity, position)`` of a variable."""
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def parity(self, name: str) -> int:
        return self.locate(name)[0]

    def extend(self, even: Iterable[str] = (), odd: Iterable[str] = (), nilpotent: Iterable[str] = (),
               odd_first: bool = False) -> "VarTable":
        odd = tuple(odd)
        odd_names = odd + self.odd if odd_first else self.odd + odd
        return VarTable(self.even + tuple(even), odd_names, self.nilpotent | frozenset(nilpotent))

    def to_json(self):
        return {"even": list(self.even), "odd": list(self.odd), "nilpotent": sorted(self.nilpotent)}


def _check_same(a, b):
    if a.table != b.table:
        raise VarTableMismatch(f"{a.table!r} vs {b.table!r}")


@lru_cache(maxsize=1 << 16)
def _merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation (sorted a) + (sorted b) of odd indices."""
    inversions = 0
    while b:
        low = b & -b
        j = low.bit_length() - 1
        inversions += (a >> (j + 1)).bit_count()
        b ^= low
    return -1 if inversions & 1 else 1


def _mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


def _term_key(key):
    exps, mask = key
    return (sum(exps), exps, _mask_indices(mask))


class SuperPolynomial:
    """Immutable element of Q[even] (x) Lambda(odd)."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping | None = None, _trusted: bool = False):
        self.table = table
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for (exps, mask), c in (terms or {}).items():
                if c:
                    clean[(tuple(exps), int(mask))] = Fraction(c)
            self.terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, table: VarTable) -> "SuperPolynomial":
        return cls(table, {}, _trusted=True)

    @classmethod
    def const(cls, table: VarTable, c) -> "SuperPolynomial":
        c = Fraction(c)
        if not c:
            return cls.zero(table)
        return cls(table, {((0,) * len(table.even), 0): c}, _trusted=True)

    @classmethod
    def var(cls, table: VarTable, name: str) -> "SuperPolynomial":
        parity, idx = table.locate(name)
        exps = [0] * len(table.even)
        mask = 0
        if parity == 0:
            exps[idx] = 1
        else:
            mask = 1 << idx
        return cls(table, {(tuple(exps), mask): Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, table: VarTable, exps, odd_indices=(), coeff=1) -> "SuperPolynomial":
        """Build ``coeff * x^exps * xi_{i1} xi_{i2} ...`` with odd factors in the given order."""
        sign = 1
        mask = 0
        for j in odd_indices:
            bit = 1 << j
            if mask & bit:
                return cls.zero(table)
            sign *= _merge_sign(mask, bit)
            mask |= bit
        return cls(table, {(tuple(exps), mask): Fraction(coeff) * sign})

    # -- basic protocol ------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.table == other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPolynomial.const(self.table, other)
        if isinstance(other, RationalSuperFunction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"SuperPolynomial({self.to_str()})"

    def __str__(self):
        return self.to_str()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return sp_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.table, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return sp_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return sp_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, RationalSuperFunction):
            return RationalSuperFunction.from_poly(self) * other
        if isinstance(other, SuperPolynomial):
            return sp_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = SuperPolynomial.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = sp_mul(result, base)
            k >>= 1
            if k:
                base = sp_mul(base, base)
        return result

    def _coerce(self, other):
        if isinstance(other, SuperPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return SuperPolynomial.const(self.table, other)
        return NotImplemented

    def scale(self, c) -> "SuperPolynomial":
        c = Fraction(c)
        if not c:
            return SuperPolynomial.zero(self.table)
        return SuperPolynomial(self.table, {k: v * c for k, v in self.terms.items()}, _trusted=True)

    # -- structure -----------------------------------------------------
    def parity(self):
        """0 or 1 for homogeneous values, ``None`` when mixed. Zero counts as even."""
        parities = {mask.bit_count() & 1 for _, mask in self.terms}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else 0

    def parity_part(self, p: int) -> "SuperPolynomial":
        return SuperPolynomial(self.table, {k: c for k, c in self.terms.items()
                                            if (k[1].bit_count() & 1) == p}, _trusted=True)

    def is_odd_free(self) -> bool:
        return all(mask == 0 for _, mask in self.terms)

    def body(self) -> "SuperPolynomial":
        """Odd-free, nilpotent-free part."""
        nil = self.table._nil_idx
        return SuperPolynomial(self.table, {k: c for k, c in self.terms.items()
                                            if k[1] == 0 and not any(k[0][i] for i in nil)},
                               _trusted=True)

    def is_constant(self) -> bool:
        return all(mask == 0 and not any(exps) for exps, mask in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(((0,) * len(self.table.even), 0), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(e) + m.bit_count() for e, m in self.terms), default=-1)

    def free_names(self) -> set[str]:
        used = set()
        for exps, mask in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(self.table.even[i])
            for j in _mask_indices(mask):
                used.add(self.table.odd[j])
        return used

    def retable(self, table: VarTable, rename: Mapping[str, str] | None = None) -> "SuperPolynomial":
        """Re-express over another table holding (renamed) copies of the used variables."""
        rename = rename or {}
        emap = [table.locate(rename.get(n, n)) if rename.get(n, n) in table else None
                for n in self.table.even]
        omap = [table.locate(rename.get(n, n)) if rename.get(n, n) in table else None
                for n in self.table.odd]
        out = {}
        ne = len(table.even)
        for (exps, mask), c in self.terms.items():
            new = [0] * ne
            for i, e in enumerate(exps):
                if e:
                    loc = emap[i]
                    if loc is None or loc[0] != 0:
                        raise VarTableMismatch(f"variable {self.table.even[i]} missing from target table")
                    new[loc[1]] += e
            order = []
            for j in _mask_indices(mask):
                loc = omap[j]
                if loc is None or loc[0] != 1:
                    raise VarTableMismatch(f"variable {self.table.odd[j]} missing from target table")
                order.append(loc[1])
            term = SuperPolynomial.monomial(table, new, order, c)
            for k, v in term.terms.items():
                out[k] = out.get(k, 0) + v
        return SuperPolynomial(table, out)

    def drop_variables(self, names: Iterable[str]) -> "SuperPolynomial":
        """Set the named variables to zero."""
        even_idx = []
        odd_bits = 0
        for n in names:
            p, i = self.table.locate(n)
            if p == 0:
                even_idx.append(i)
            else:
                odd_bits |= 1 << i
        return SuperPolynomial(self.table, {k: c for k, c in self.terms.items()
                                            if not (k[1] & odd_bits) and not any(k[0][i] for i in even_idx)},
                               _trusted=True)

    # -- rendering -----------------------------------------------------
    def to_str(self, names: Mapping[str, str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or {}
        pieces = []
        for (exps, mask), c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e:
                    v = names.get(self.table.even[i], self.table.even[i])
                    factors.append(v if e == 1 else f"{v}^{e}")
            for j in _mask_indices(mask):
                factors.append(names.get(self.table.odd[j], self.table.odd[j]))
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self):
        """Stable term list, sorted by the canonical order."""
        return [{"even": list(exps), "odd": list(_mask_indices(mask)), "coeff": str(c)}
                for (exps, mask), c in self.sorted_terms()]

    @classmethod
    def from_json(cls, table: VarTable, data) -> "SuperPolynomial":
        terms = {}
        for t in data:
            mask = 0
            for j in t["odd"]:
                mask |= 1 << j
            terms[(tuple(t["even"]), mask)] = Fraction(t["coeff"])
        return cls(table, terms)

    def dumps(self) -> str:
        return json.dumps({"table": self.table.to_json(), "terms": self.to_json()}, sort_keys=True)


def sp_add(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    _check_same(a, b)
    out = dict(a.terms)
    for k, c in b.terms.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s += c
            if s:
                out[k] = s
            else:
                del out[k]
    return SuperPolynomial(a.table, out, _trusted=True)


def sp_mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    _check_same(a, b)
    if not a.terms or not b.terms:
        return SuperPolynomial.zero(a.table)
    nil = a.table._nil_idx
    out: dict = {}
    for (ea, ma), ca in a.terms.items():
        for (eb, mb), cb in b.terms.items():
            if ma & mb:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            if nil and any(e[i] > 1 for i in nil):
                continue
            key = (e, ma | mb)
            c = ca * cb
            if _merge_sign(ma, mb) < 0:
                c = -c
            s = out.get(key)
            if s is None:
                out[key] = c
            else:
                s += c
                if s:
                    out[key] = s
                else:
                    del out[key]
    return SuperPolynomial(a.table, out, _trusted=True)


def sp_partial(a: SuperPolynomial, v: str) -> SuperPolynomial:
    """Partial derivative; odd variables use the left derivative."""
    parity, idx = a.table.locate(v)
    out = {}
    if parity == 0:
        for (exps, mask), c in a.terms.items():
            e = exps[idx]
            if e:
                new = exps[:idx] + (e - 1,) + exps[idx + 1:]
                out[(new, mask)] = c * e
    else:
        bit = 1 << idx
        below = bit - 1
        for (exps, mask), c in a.terms.items():
            if mask & bit:
                # moving v to the front passes the odd variables of lower index
                if (mask & below).bit_count() & 1:
                    c = -c
                out[(exps, mask ^ bit)] = c
    return SuperPolynomial(a.table, out, _trusted=True)


# ---------------------------------------------------------------------------
# exact division by an odd-free polynomial
# ---------------------------------------------------------------------------

def _leading(terms):
    return max(terms, key=lambda k: _grlex_key(k[0]))


def divmod_even(a: SuperPolynomial, d: SuperPolynomial, stop_on_remainder: bool = False):
    """Divide by an odd-free ``d``: ``a = q*d + r``.

    The remainder is the normal form modulo the principal ideal (d) under the
    graded-lex order, so ``r == 0`` iff ``d`` divides ``a``.  It is computed
    separately for each odd monomial.  With ``stop_on_remainder`` the function
    returns ``None`` as soon as a nonzero remainder term appears.
    """
    _check_same(a, d)
    if not d.terms:
        raise ZeroDivisionError("division by zero polynomial")
    if not d.is_odd_free():
        raise ValueError("divisor must be odd-free")
    lt_key = _leading(d.terms)
    lt_exps = lt_key[0]
    lt_c = d.terms[lt_key]
    d_rest = [(e, c) for (e, _), c in d.terms.items() if e != lt_exps]
    quotient: dict = {}
    remainder: dict = {}
    by_mask: dict[int, dict] = {}
    for (exps, mask), c in a.terms.items():
        by_mask.setdefault(mask, {})[exps] = c
    for mask, poly in by_mask.items():
        poly = dict(poly)
        while poly:
            exps = max(poly, key=_grlex_key)
            c = poly.pop(exps)
            if all(x >= y for x, y in zip(exps, lt_exps)):
                qe = tuple(x - y for x, y in zip(exps, lt_exps))
                qc = c / lt_c
                quotient[(qe, mask)] = quotient.get((qe, mask), 0) + qc
                for e, dc in d_rest:
                    ne = tuple(x + y for x, y in zip(qe, e))
                    v = poly.get(ne, 0) - qc * dc
                    if v:
                        poly[ne] = v
                    else:
                        poly.pop(ne, None)
            else:
                if stop_on_remainder:
                    return None
                remainder[(exps, mask)] = c
    return SuperPolynomial(a.table, quotient), SuperPolynomial(a.table, remainder, _trusted=True)


def exact_divide(a: SuperPolynomial, d: SuperPolynomial):
    """Quotient ``a / d`` if the division is exact, else ``None``."""
    if len(d.terms) == 1:
        (dexps, dmask), dc = next(iter(d.terms.items()))
        if dmask:
            raise ValueError("divisor must be odd-free")
        out = {}
        for (exps, mask), c in a.terms.items():
            if any(x < y for x, y in zip(exps, dexps)):
                return None
            out[(tuple(x - y for x, y in zip(exps, dexps)), mask)] = c / dc
        return SuperPolynomial(a.table, out, _trusted=True)
    res = divmod_even(a, d, stop_on_remainder=True)
    if res is None:
        return None
    return res[0]


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

def _normalize_factor(b: SuperPolynomial):
    """Split an odd-free nonzero polynomial into ``scalar * prod(factor^e)``.

    Monomial content becomes single-variable factors; the remaining part is
    made monic w.r.t. the graded-lex leading term.
    """
    if not b.terms:
        raise ZeroDivisionError("zero denominator")
    if not b.is_odd_free():
        raise ValueError("denominator factor must be odd-free")
    table = b.table
    n = len(table.even)
    content = [min(exps[i] for exps, _ in b.terms) for i in range(n)]
    factors = []
    if any(content):
        for i, e in enumerate(content):
            if e:
                factors.append((SuperPolynomial.var(table, table.even[i]), e))
        b = SuperPolynomial(table, {(tuple(x - y for x, y in zip(exps, content)), 0): c
                                    for (exps, _), c in b.terms.items()}, _trusted=True)
    lead = b.terms[_leading(b.terms)]
    if not b.is_constant():
        factors.append((b.scale(1 / lead), 1))
    return lead, factors


class RationalSuperFunction:
    """``num / den`` with ``den`` a product of powers of odd-free factors.

    Values are kept reduced: no denominator factor divides the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: SuperPolynomial, den: Mapping | None = None, _reduce: bool = True):
        self.num = num
        den = dict(den or {})
        if den and _reduce:
            num, den = _reduce_pair(num, den)
            self.num = num
        self.den = den

    @property
    def table(self) -> VarTable:
        return self.num.table

    @classmethod
    def from_poly(cls, p: SuperPolynomial) -> "RationalSuperFunction":
        return cls(p, None, _reduce=False)

    @classmethod
    def const(cls, table, c) -> "RationalSuperFunction":
        return cls(SuperPolynomial.const(table, c), None, _reduce=False)

    @classmethod
    def zero(cls, table) -> "RationalSuperFunction":
        return cls(SuperPolynomial.zero(table), None, _reduce=False)

    @classmethod
    def over(cls, num: SuperPolynomial, den_poly: SuperPolynomial, power: int = 1) -> "RationalSuperFunction":
        """``num / den_poly**power`` for an odd-free ``den_poly``."""
        lead, factors = _normalize_factor(den_poly)
        den = {f: e * power for f, e in factors}
        return cls(num.scale(Fraction(1) / lead ** power), den)

    def is_polynomial(self) -> bool:
        return not self.den

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def den_poly(self) -> SuperPolynomial:
        out = SuperPolynomial.const(self.table, 1)
        for f, e in self.den.items():
            out = out * f ** e
        return out

    def parity(self):
        return self.num.parity()

    def parity_part(self, p) -> "RationalSuperFunction":
        return RationalSuperFunction(self.num.parity_part(p), self.den)

    def body(self) -> "RationalSuperFunction":
        return RationalSuperFunction(self.num.body(), self.den)

    def _coerce(self, other):
        if isinstance(other, RationalSuperFunction):
            return other
        if isinstance(other, SuperPolynomial):
            return RationalSuperFunction.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalSuperFunction.const(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same(self, other)
        if not self.den and not other.den:
            return RationalSuperFunction(self.num + other.num, None, _reduce=False)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        den = dict(self.den)
        for f, e in other.den.items():
            if den.get(f, 0) < e:
                den[f] = e
        a = self.num * _den_power_poly(self.table, den, self.den)
        b = other.num * _den_power_poly(self.table, den, other.den)
        return RationalSuperFunction(a + b, den)

    __radd__ = __add__

    def __neg__(self):
        return RationalSuperFunction(-self.num, self.den, _reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalSuperFunction(self.num.scale(other), self.den, _reduce=False)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same(self, other)
        num = self.num * other.num
        if not self.den and not other.den:
            return RationalSuperFunction(num, None, _reduce=False)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RationalSuperFunction(num, den)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __pow__(self, k: int):
        result = RationalSuperFunction.const(self.table, 1)
        for _ in range(k):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __eq__(self, other):
        if isinstance(other, (SuperPolynomial, RationalSuperFunction, int, Fraction)):
            other = self._coerce(other)
            if self.table != other.table:
                return False
            if not self.den and not other.den:
                return self.num == other.num
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        if self.den:
            raise TypeError("only polynomial-valued rational functions are hashable")
        return hash(self.num)

    def __repr__(self):
        return f"RationalSuperFunction({self.to_str()})"

    def __str__(self):
        return self.to_str()

    def to_str(self, names=None) -> str:
        n = self.num.to_str(names)
        if not self.den:
            return n
        parts = []
        for f, e in sorted(self.den.items(), key=lambda fe: fe[0].to_str()):
            s = f.to_str(names)
            if len(f.terms) > 1:
                s = f"({s})"
            parts.append(s if e == 1 else f"{s}^{e}")
        num = n if len(self.num.terms) <= 1 else f"({n})"
        den = "*".join(parts)
        return f"{num}/({den})" if len(parts) > 1 else f"{num}/{den}"

    def to_json(self):
        return {"num": self.num.to_json(),
                "den": [{"factor": f.to_json(), "power": e}
                        for f, e in sorted(self.den.items(), key=lambda fe: fe[0].to_str())]}

    @classmethod
    def from_json(cls, table, data):
        den = {SuperPolynomial.from_json(table, d["factor"]): d["power"] for d in data["den"]}
        return cls(SuperPolynomial.from_json(table, data["num"]), den)

    # -- analysis ------------------------------------------------------
    def invert(self) -> "RationalSuperFunction":
        inv = sp_invert(self.num)
        if not self.den:
            return inv
        return inv * RationalSuperFunction.from_poly(self.den_poly())

    def partial(self, v: str) -> "RationalSuperFunction":
        """Derivative by the quotient rule; the denominator is even and odd-free."""
        dn = sp_partial(self.num, v)
        if not self.den:
            return RationalSuperFunction(dn, None, _reduce=False)
        if self.table.parity(v) == 1:
            return RationalSuperFunction(dn, self.den)
        # d(N/prod f^e) = dN/D - N * sum(e * df/f) / D
        out = RationalSuperFunction(dn, self.den)
        for f, e in self.den.items():
            df = sp_partial(f, v)
            if df.terms:
                den = dict(self.den)
                den[f] = den[f] + 1
                out = out - RationalSuperFunction((df * self.num).scale(e), den)
        return out

    def is_regular(self):
        """``(True, polynomial)`` when the value is a polynomial, else ``(False, None)``."""
        return rf_is_regular(self)

    def map_num(self, fn) -> "RationalSuperFunction":
        return RationalSuperFunction(fn(self.num), self.den)


def _den_power_poly(table, full, part) -> SuperPolynomial:
    out = SuperPolynomial.const(table, 1)
    for f, e in full.items():
        k = e - part.get(f, 0)
        if k:
            out = out * f ** k
    return out


def _reduce_pair(num: SuperPolynomial, den: dict):
    den = {f: e for f, e in den.items() if e}
    if not num.terms:
        return num, {}
    for f in list(den):
        e = den[f]
        while e:
            q = exact_divide(num, f)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            den[f] = e
        else:
            del den[f]
    return num, den


def sp_invert(a: SuperPolynomial) -> RationalSuperFunction:
    """``1/a`` for even ``a`` with nonzero body, via the finite nilpotent series."""
    if a.parity() != 0:
        raise ValueError("only even elements can be inverted")
    b = a.body()
    if not b.terms:
        raise ZeroDivisionError("element has zero body")
    n = a - b
    # 1/(b+n) = sum_j (-n)^j / b^(j+1); the sum is finite because n is nilpotent
    powers = [SuperPolynomial.const(a.table, 1)]
    while True:
        nxt = powers[-1] * (-n)
        if not nxt.terms:
            break
        powers.append(nxt)
    top = len(powers) - 1
    num = SuperPolynomial.zero(a.table)
    bpow = SuperPolynomial.const(a.table, 1)
    for j in range(top, -1, -1):
        num = num + powers[j] * bpow
        if j:
            bpow = bpow * b
    if b.is_constant():
        return RationalSuperFunction(num.scale(Fraction(1) / b.constant_term() ** (top + 1)), None,
                                     _reduce=False)
    return RationalSuperFunction.over(num, b, top + 1)


def rf_is_regular(f: RationalSuperFunction):
    if not isinstance(f, RationalSuperFunction):
        return True, f
    num, den = _reduce_pair(f.num, f.den)
    if den:
        return False, None
    return True, num


def sp_substitute(a, images: Mapping[str, RationalSuperFunction], target: VarTable | None = None
                  ) -> RationalSuperFunction:
    """Ring homomorphism sending each variable to its image.

    Variables missing from ``images`` are sent to themselves, which requires the
    target table to contain them.  Images must respect parity.
    """
    if isinstance(a, RationalSuperFunction):
        out = sp_substitute(a.num, images, target)
        for f, e in a.den.items():
            inv = sp_substitute(f, images, target).invert()
            for _ in range(e):
                out = out * inv
        return out
    table = a.table
    conv = {}
    for name, img in images.items():
        if name not in table:
            raise KeyError(f"unknown variable {name!r}")
        if isinstance(img, SuperPolynomial):
            img = RationalSuperFunction.from_poly(img)
        elif isinstance(img, (int, Fraction)):
            if target is None:
                raise ValueError("constant images need an explicit target table")
            img = RationalSuperFunction.const(target, img)
        p = img.parity()
        if p is None or (p != table.parity(name) and not img.is_zero()):
            raise ValueError(f"image of {name!r} violates parity")
        conv[name] = img
    if target is None:
        if conv:
            target = next(iter(conv.values())).table
        else:
            target = table
    for img in conv.values():
        if img.table != target:
            raise VarTableMismatch("all images must live over one target table")
    ev = []
    for name in table.even:
        if name in conv:
            ev.append(conv[name])
        else:
            ev.append(RationalSuperFunction.from_poly(SuperPolynomial.var(target, name)))
    od = []
    for name in table.odd:
        if name in conv:
            od.append(conv[name])
        else:
            od.append(RationalSuperFunction.from_poly(SuperPolynomial.var(target, name)))
    power_cache: dict = {}

    def even_power(i, e):
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = ev[i] if e == 1 else even_power(i, e - 1) * ev[i]
        return power_cache[key]

    out = RationalSuperFunction.zero(target)
    for (exps, mask), c in a.terms.items():
        term = RationalSuperFunction.const(target, c)
        for i, e in enumerate(exps):
            if e:
                term = term * even_power(i, e)
        for j in _mask_indices(mask):
            term = term * od[j]
        out = out + term
    return out
