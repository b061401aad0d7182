"""Exact truncated multivariate power series over Laurent polynomials in t.

The coefficient ring is Z[t, t^-1] with arbitrary-precision integers; series
are truncated at a fixed total degree in the x-variables.  On top of the ring
arithmetic sit the two fixed-point solvers: solve_f for the one-variable face
count of the associahedra and solve_F for the per-tree face counts of the
2-associahedra.  Both solvers iterate equations whose degree-d output only
depends on strictly smaller degrees, so D rounds stabilize exactly.
"""

from __future__ import annotations

import json
from typing import Mapping

from .trees import Tree, dim_tree, root_decompose, tree_to_text


class LaurentPoly:
    """Laurent polynomial in t with integer coefficients; no stored zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def term(cls, coeff: int, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def coefficient(self, exp: int) -> int:
        return self.coeffs.get(exp, 0)

    def eval_minus1(self) -> int:
        return sum(c if e % 2 == 0 else -c for e, c in self.coeffs.items())

    def is_nonneg_poly(self) -> bool:
        return all(e >= 0 and c > 0 for e, c in self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                bits.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else str(c))
                bits.append(f"{head}t^{e}" if e != 1 else f"{head}t")
        return " + ".join(bits)


LP_ZERO = LaurentPoly()
LP_ONE = LaurentPoly.term(1)


class TruncatedSeries:
    """Power series in x_1..x_r truncated at total degree D, Laurent coefficients."""

    __slots__ = ("var_count", "max_degree", "terms")

    def __init__(self, var_count: int, max_degree: int,
                 terms: Mapping[tuple[int, ...], LaurentPoly] | None = None):
        if var_count < 1 or max_degree < 0:
            raise ValueError("need var_count >= 1 and max_degree >= 0")
        self.var_count = var_count
        self.max_degree = max_degree
        self.terms: dict[tuple[int, ...], LaurentPoly] = {}
        for n, p in (terms or {}).items():
            if len(n) != var_count:
                raise ValueError("exponent vector has wrong length")
            if sum(n) <= max_degree and p:
                self.terms[n] = p

    @classmethod
    def zero(cls, var_count: int, max_degree: int) -> "TruncatedSeries":
        return cls(var_count, max_degree)

    @classmethod
    def constant(cls, var_count: int, max_degree: int, p: LaurentPoly) -> "TruncatedSeries":
        return cls(var_count, max_degree, {(0,) * var_count: p})

    @classmethod
    def variable(cls, var_count: int, max_degree: int, i: int) -> "TruncatedSeries":
        """The series x_i (1-based index)."""
        n = [0] * var_count
        n[i - 1] = 1
        return cls(var_count, max_degree, {tuple(n): LP_ONE})

    def _check_shape(self, other: "TruncatedSeries"):
        if self.var_count != other.var_count or self.max_degree != other.max_degree:
            raise ValueError("operands have mismatched shape")

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedSeries) and self.var_count == other.var_count
                and self.max_degree == other.max_degree and self.terms == other.terms)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_shape(other)
        out = dict(self.terms)
        for n, p in other.terms.items():
            q = out.get(n)
            out[n] = p if q is None else q + p
        return TruncatedSeries(self.var_count, self.max_degree, out)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + other.scaled(LaurentPoly.term(-1))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_shape(other)
        D = self.max_degree
        out: dict[tuple[int, ...], LaurentPoly] = {}
        for n1, p1 in self.terms.items():
            d1 = sum(n1)
            for n2, p2 in other.terms.items():
                if d1 + sum(n2) > D:
                    continue
                n = tuple(a + b for a, b in zip(n1, n2))
                prod = p1 * p2
                q = out.get(n)
                out[n] = prod if q is None else q + prod
        return TruncatedSeries(self.var_count, self.max_degree, out)

    def scaled(self, p: LaurentPoly) -> "TruncatedSeries":
        return TruncatedSeries(self.var_count, self.max_degree,
                               {n: q * p for n, q in self.terms.items()})

    def coefficient_poly(self, n: tuple[int, ...]) -> LaurentPoly:
        if sum(n) > self.max_degree:
            raise ValueError(f"exponent {n} exceeds truncation degree {self.max_degree}")
        return self.terms.get(tuple(n), LP_ZERO)

    def constant_term(self) -> LaurentPoly:
        return self.terms.get((0,) * self.var_count, LP_ZERO)

    def truncate_to(self, max_degree: int) -> "TruncatedSeries":
        return TruncatedSeries(self.var_count, max_degree, self.terms)

    def embed(self, var_count: int, offset: int, max_degree: int | None = None) -> "TruncatedSeries":
        """Reinterpret in a wider variable set, own vars at block `offset`."""
        D = self.max_degree if max_degree is None else max_degree
        out = {}
        for n, p in self.terms.items():
            if sum(n) > D:
                continue
            m = [0] * var_count
            m[offset:offset + len(n)] = n
            out[tuple(m)] = p
        return TruncatedSeries(var_count, D, out)

    def to_json_dict(self) -> dict:
        rows = []
        for n in sorted(self.terms):
            p = self.terms[n]
            rows.append({"n": list(n),
                         "t_poly": [[e, str(p.coeffs[e])] for e in sorted(p.coeffs)]})
        return {"vars": self.var_count, "max_degree": self.max_degree, "terms": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def geometric_inverse(u: TruncatedSeries) -> TruncatedSeries:
    """sum_{j>=0} u^j; requires zero constant term so the sum truncates."""
    if u.constant_term():
        raise ValueError("geometric_inverse needs a zero constant term")
    one = TruncatedSeries.constant(u.var_count, u.max_degree, LP_ONE)
    out = one
    power = one
    for _ in range(u.max_degree):
        power = power * u
        if not power.terms:
            break
        out = out + power
    return out


def _validate_counts(series: TruncatedSeries, what: str):
    for n, p in series.terms.items():
        if not p.is_nonneg_poly():
            raise ArithmeticError(f"{what}: coefficient at {n} is not a nonnegative "
                                  f"t-polynomial: {p!r}")


def solve_f(max_degree: int) -> TruncatedSeries:
    """Unique fixed point of f = x + f^2 * sum_j (t f)^j with linear term x."""
    if max_degree < 1:
        raise ValueError("need max_degree >= 1")
    x = TruncatedSeries.variable(1, max_degree, 1)
    f = TruncatedSeries.zero(1, max_degree)
    for _ in range(max_degree):
        f_new = x + (f * f) * geometric_inverse(f.scaled(LaurentPoly.term(1, 1)))
        if f_new == f:
            break
        f = f_new
    assert f == x + (f * f) * geometric_inverse(f.scaled(LaurentPoly.term(1, 1))), \
        "fixed point failed to stabilize"
    _validate_counts(f, "solve_f")
    return f


def check_f_closed_form(max_degree: int) -> tuple[bool, tuple | None]:
    """Verify (2(1+t)f - 1 - tx)^2 == 1 - 4x - 2tx + t^2 x^2 as truncated series.

    Returns (True, None) on success, else (False, first offending exponent).
    """
    f = solve_f(max_degree)
    return _check_f_closed_form_of(f)


def _check_f_closed_form_of(f: TruncatedSeries) -> tuple[bool, tuple | None]:
    D = f.max_degree
    t1 = LaurentPoly({0: 2, 1: 2})  # 2(1+t)
    x = TruncatedSeries.variable(1, D, 1)
    one = TruncatedSeries.constant(1, D, LP_ONE)
    lhs_lin = f.scaled(t1) - one - x.scaled(LaurentPoly.term(1, 1))
    lhs = lhs_lin * lhs_lin
    rhs = (one
           + x.scaled(LaurentPoly({0: -4, 1: -2}))
           + (x * x).scaled(LaurentPoly.term(1, 2)))
    if lhs == rhs:
        return True, None
    diff = lhs - rhs
    bad = min(n for n, p in diff.terms.items() if p)
    return False, bad


_F_CACHE: dict[tuple[str, int], TruncatedSeries] = {}


def solve_F(tree: Tree, max_degree: int) -> TruncatedSeries:
    """Fixed point of the per-tree counting equation.

    For the one-leaf tree this is solve_f.  For T = C(T_1..T_k) the equation

        F = F^2 / (t^p - t F) + t^(p-1) (prod_i t^(p_i)/(t^(p_i) - t F_i) - 1)

    is iterated with the divisions expanded as t-shifted geometric series, so
    intermediates are Laurent in t.  Final coefficients must come out as
    nonnegative t-polynomials (they count faces); anything else raises.
    """
    if max_degree < 1:
        raise ValueError("need max_degree >= 1")
    key = (tree_to_text(tree), max_degree)
    cached = _F_CACHE.get(key)
    if cached is not None:
        return cached

    r = tree.leaf_count()
    p = dim_tree(tree)
    if r == 1:
        F = solve_f(max_degree)
    else:
        branches = root_decompose(tree)
        horiz = TruncatedSeries.constant(r, max_degree, LP_ONE)
        offset = 0
        for child in branches:
            q_i = child.leaf_count()
            p_i = dim_tree(child)
            child_F = solve_F(child, max_degree).embed(r, offset)
            horiz = horiz * geometric_inverse(child_F.scaled(LaurentPoly.term(1, 1 - p_i)))
            offset += q_i
        one = TruncatedSeries.constant(r, max_degree, LP_ONE)
        H = (horiz - one).scaled(LaurentPoly.term(1, p - 1))

        F = TruncatedSeries.zero(r, max_degree)
        for _ in range(max_degree + 1):
            vert = (F * F).scaled(LaurentPoly.term(1, -p)) \
                * geometric_inverse(F.scaled(LaurentPoly.term(1, 1 - p)))
            F_new = vert + H
            if F_new == F:
                break
            F = F_new
        vert = (F * F).scaled(LaurentPoly.term(1, -p)) \
            * geometric_inverse(F.scaled(LaurentPoly.term(1, 1 - p)))
        assert F == vert + H, "fixed point failed to stabilize"

    if F.terms.get((0,) * r):
        raise ArithmeticError("solve_F produced a constant term; W_n requires n != 0")
    _validate_counts(F, f"solve_F({key[0]})")
    _F_CACHE[key] = F
    return F


def eval_t_minus1(series: TruncatedSeries) -> TruncatedSeries:
    """Substitute t = -1 in every coefficient."""
    out = {}
    for n, p in series.terms.items():
        v = p.eval_minus1()
        if v:
            out[n] = LaurentPoly.term(v)
    return TruncatedSeries(series.var_count, series.max_degree, out)


def coefficient(series: TruncatedSeries, m: int, n: tuple[int, ...]) -> int:
    """The t^m coefficient of the x^n term (0 if absent)."""
    return series.coefficient_poly(tuple(n)).coefficient(m)


def t_minus1_closed_form(tree: Tree, max_degree: int) -> TruncatedSeries:
    """Truncation of (-1)^d(T) * (1/prod_i (1 - x_i) - 1)."""
    r = tree.leaf_count()
    sign = LaurentPoly.term((-1) ** dim_tree(tree))
    prod = TruncatedSeries.constant(r, max_degree, LP_ONE)
    for i in range(1, r + 1):
        prod = prod * geometric_inverse(TruncatedSeries.variable(r, max_degree, i))
    one = TruncatedSeries.constant(r, max_degree, LP_ONE)
    return (prod - one).scaled(sign)
