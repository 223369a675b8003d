#!/usr/bin/env python3
"""
Exact Polynomial Layer
Sparse multivariate polynomials over the rationals (sympy PolyRing elements),
the polynomial text grammar, Sylvester resultants with fraction-free
elimination, discriminants, trial division, squarefree decomposition and
univariate factoring over Q
"""

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import MonomialOrder, grevlex
from sympy.polys.rings import PolyElement, PolyRing

from errors import InvalidInputError, ParseError, ResourceLimitError, VariableMismatchError

logger = logging.getLogger(__name__)

Polynomial = PolyElement
Monomial = Tuple[int, ...]
Variable = Union[str, int, PolyElement]

XYZ = ("x", "y", "z")
XYZW = ("x", "y", "z", "w")


class EliminationOrder(MonomialOrder):
    """Block order: grevlex on the first `front` variables, then grevlex on the rest"""

    alias = "elimination"
    is_global = True

    def __init__(self, front: int):
        self.front = front

    def __call__(self, monomial):
        return (grevlex(monomial[:self.front]), grevlex(monomial[self.front:]))

    def __repr__(self):
        return f"EliminationOrder({self.front})"

    def __eq__(self, other):
        return isinstance(other, EliminationOrder) and other.front == self.front

    def __hash__(self):
        return hash((self.__class__.__name__, self.front))


@lru_cache(maxsize=None)
def polynomial_ring(names: Tuple[str, ...] = XYZW, order: MonomialOrder = grevlex) -> PolyRing:
    """Cached ring QQ[names] with the given monomial order (grevlex by default)"""
    return PolyRing(tuple(names), QQ, order)


def var_names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def var_index(ring: PolyRing, v: Variable) -> int:
    if isinstance(v, int):
        if 0 <= v < ring.ngens:
            return v
    elif isinstance(v, PolyElement):
        if v.ring == ring and v in ring.gens:
            return ring.gens.index(v)
    else:
        names = var_names(ring)
        if v in names:
            return names.index(v)
    raise InvalidInputError(f"unknown variable {v!r} for ring in {', '.join(var_names(ring))}")


def gen(ring: PolyRing, name: str) -> Polynomial:
    return ring.gens[var_index(ring, name)]


def absolute_conic(ring: PolyRing) -> Polynomial:
    """A = x^2 + y^2 + z^2 in the given ring"""
    x, y, z = (gen(ring, n) for n in XYZ)
    return x**2 + y**2 + z**2


def embed(p: Polynomial, ring: PolyRing) -> Polynomial:
    """Move p into another ring, matching variables by name"""
    if p.ring == ring:
        return p
    target = var_names(ring)
    index = [target.index(n) if n in target else None for n in var_names(p.ring)]
    terms = {}
    for monom, coeff in p.iterterms():
        new = [0] * ring.ngens
        for i, e in enumerate(monom):
            if not e:
                continue
            if index[i] is None:
                raise VariableMismatchError(
                    f"variable {var_names(p.ring)[i]} does not exist in target ring")
            new[index[i]] = e
        terms[tuple(new)] = coeff
    return ring.from_dict(terms)


def _same_ring(p: Polynomial, q: Polynomial) -> None:
    if p.ring != q.ring:
        raise VariableMismatchError(
            f"variable lists differ: ({', '.join(var_names(p.ring))}) vs ({', '.join(var_names(q.ring))})")


# ---------------------------------------------------------------------------
# degrees, content, canonical forms
# ---------------------------------------------------------------------------

def total_degree(p: Polynomial) -> int:
    """Total degree; -1 for the zero polynomial"""
    return max((sum(m) for m in p.itermonoms()), default=-1)


def degree_in(p: Polynomial, v: Variable) -> int:
    i = var_index(p.ring, v)
    return max((m[i] for m in p.itermonoms()), default=-1)


def is_homogeneous(p: Polynomial) -> bool:
    return len({sum(m) for m in p.itermonoms()}) <= 1


def content(p: Polynomial):
    """Positive rational content: gcd of numerators over lcm of denominators"""
    if not p:
        return QQ.zero
    num = 0
    den = 1
    for c in p.values():
        num = math.gcd(num, int(c.numerator))
        den = math.lcm(den, int(c.denominator))
    return QQ(num, den)


def normalize(p: Polynomial) -> Polynomial:
    """Integer coefficients with gcd 1 and positive leading coefficient"""
    if not p:
        return p
    c = content(p)
    q = p.quo_ground(c)
    return -q if q.LC < 0 else q


def equal_up_to_scalar(p: Polynomial, q: Polynomial) -> bool:
    """Exact cross-multiplication check p * lc(q) == q * lc(p)"""
    _same_ring(p, q)
    if not p or not q:
        return not p and not q
    return p.mul_ground(q.LC) == q.mul_ground(p.LC)


def sort_key(p: Polynomial) -> Tuple[int, str]:
    return (total_degree(p), format_polynomial(p))


def monomials_of_degree(nvars: int, d: int) -> List[Monomial]:
    if d < 0:
        return []
    result = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        result.append(tuple(e))
    return result


def coefficients_in(p: Polynomial, v: Variable) -> Dict[int, Polynomial]:
    """Coefficients of p as a polynomial in v (coefficients stay in p's ring, free of v)"""
    ring = p.ring
    i = var_index(ring, v)
    buckets: Dict[int, dict] = {}
    for monom, coeff in p.iterterms():
        rest = monom[:i] + (0,) + monom[i + 1:]
        buckets.setdefault(monom[i], {})[rest] = coeff
    return {e: ring.from_dict(terms) for e, terms in buckets.items()}


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    _same_ring(p, q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise InvalidInputError(f"unknown operation {op!r}")


def partial(p: Polynomial, v: Variable) -> Polynomial:
    return p.diff(p.ring.gens[var_index(p.ring, v)])


def substitute_many(p: Polynomial, mapping: Dict[Variable, Polynomial]) -> Polynomial:
    """Simultaneous substitution of variables by polynomials of the same ring"""
    ring = p.ring
    replacements = {}
    for v, r in mapping.items():
        if not isinstance(r, PolyElement):
            r = ring(r)
        _same_ring(p, r)
        replacements[var_index(ring, v)] = r

    powers: Dict[Tuple[int, int], Polynomial] = {}
    result = ring.zero
    for monom, coeff in p.iterterms():
        rest = list(monom)
        term = ring.one
        for i, r in replacements.items():
            e = rest[i]
            if not e:
                continue
            rest[i] = 0
            key = (i, e)
            if key not in powers:
                powers[key] = r**e
            term = term * powers[key]
        result += term.mul_term((tuple(rest), coeff))
    return result


def substitute(p: Polynomial, v: Variable, r: Polynomial) -> Polynomial:
    return substitute_many(p, {v: r})


def evaluate_at(p: Polynomial, values: Dict[Variable, object]) -> Polynomial:
    """Substitute rational constants; the result stays in p's ring"""
    ring = p.ring
    return substitute_many(p, {v: ring.ground_new(QQ.convert(c)) for v, c in values.items()})


def homogenize_binary(f: Polynomial, v: Variable, h: Variable, degree: int) -> Polynomial:
    """h^degree * f(v/h) for f univariate in v"""
    ring = f.ring
    i = var_index(ring, v)
    j = var_index(ring, h)
    terms = {}
    for monom, coeff in f.iterterms():
        e = monom[i]
        new = [0] * ring.ngens
        new[i] = e
        new[j] = degree - e
        terms[tuple(new)] = coeff
    return ring.from_dict(terms)


# ---------------------------------------------------------------------------
# resultants and discriminants
# ---------------------------------------------------------------------------

def sylvester_matrix(p: Polynomial, q: Polynomial, v: Variable) -> List[List[Polynomial]]:
    ring = p.ring
    m = degree_in(p, v)
    n = degree_in(q, v)
    cp = coefficients_in(p, v)
    cq = coefficients_in(q, v)
    size = m + n
    rows = []
    for i in range(n):
        row = [ring.zero] * size
        for j in range(m + 1):
            row[i + j] = cp.get(m - j, ring.zero)
        rows.append(row)
    for i in range(m):
        row = [ring.zero] * size
        for j in range(n + 1):
            row[i + j] = cq.get(n - j, ring.zero)
        rows.append(row)
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[Polynomial]], ring: Optional[PolyRing] = None) -> Polynomial:
    """
    Fraction-free Gaussian elimination; every division is exact.

    Parameters:
    - matrix: square matrix of polynomials from one ring
    - ring: ring of the entries, only needed for an empty matrix

    Returns:
    - the determinant
    """
    M = [list(row) for row in matrix]
    n = len(M)
    if n == 0:
        return ring.one
    ring = M[0][0].ring
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            for j in range(k + 1, n):
                M[i][j] = (pivot * M[i][j] - mik * M[k][j]).exquo(prev)
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(p: Polynomial, q: Polynomial, v: Variable) -> Polynomial:
    """Sylvester resultant Res_v(p, q), a polynomial free of v"""
    _same_ring(p, q)
    if degree_in(p, v) < 1 or degree_in(q, v) < 1:
        raise InvalidInputError(f"resultant needs both inputs of positive degree in {v}")
    return bareiss_determinant(sylvester_matrix(p, q, v))


def discriminant(p: Polynomial, v: Variable) -> Polynomial:
    """Res_v(p, dp/dv) with content removed and positive leading coefficient"""
    if degree_in(p, v) < 2:
        raise InvalidInputError(f"discriminant needs degree at least 2 in {v}")
    return normalize(resultant(p, partial(p, v), v))


def first_subresultant(p: Polynomial, q: Polynomial, v: Variable) -> Tuple[Polynomial, Polynomial]:
    """
    Coefficients (s1, s0) of the first subresultant s1*v + s0 of p and q.

    Over a point where p and q have exactly one common root in v and s1 does
    not vanish, that root is -s0/s1.
    """
    _same_ring(p, q)
    m = degree_in(p, v)
    n = degree_in(q, v)
    if m < 1 or n < 1 or m + n < 3:
        raise InvalidInputError("first subresultant needs degrees m, n >= 1 with m + n >= 3")
    ring = p.ring
    cp = coefficients_in(p, v)
    cq = coefficients_in(q, v)
    width = m + n - 1  # columns for v^(m+n-2) .. v^0
    rows = []
    for i in range(n - 1):
        row = [ring.zero] * width
        for j in range(m + 1):
            row[i + j] = cp.get(m - j, ring.zero)
        rows.append(row)
    for i in range(m - 1):
        row = [ring.zero] * width
        for j in range(n + 1):
            row[i + j] = cq.get(n - j, ring.zero)
        rows.append(row)
    size = len(rows)
    lead = [row[:size - 1] for row in rows]
    s1 = bareiss_determinant([lead[r] + [rows[r][width - 2]] for r in range(size)])
    s0 = bareiss_determinant([lead[r] + [rows[r][width - 1]] for r in range(size)])
    return s1, s0


def trial_divide(p: Polynomial, d: Polynomial) -> Tuple[Polynomial, int]:
    """Largest k with d^k | p, together with p / d^k"""
    _same_ring(p, d)
    if not p:
        raise InvalidInputError("trial division of the zero polynomial")
    if not d or d.is_ground:
        raise InvalidInputError("trial divisor must be non-constant")
    k = 0
    current = p
    while True:
        quotient, remainder = current.div(d)
        if remainder:
            return current, k
        current = quotient
        k += 1


# ---------------------------------------------------------------------------
# univariate algebra (binary forms are dehomogenized internally)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquarefreeDecomposition:
    factors: Tuple[Tuple[Polynomial, int], ...]
    unit: object

    def expand(self) -> Polynomial:
        result = None
        for f, k in self.factors:
            result = f**k if result is None else result * f**k
        if result is None:
            raise InvalidInputError("empty decomposition")
        return result.mul_ground(self.unit)

    def part(self, multiplicity: int) -> List[Polynomial]:
        return [f for f, k in self.factors if k == multiplicity]


@dataclass(frozen=True)
class _UnivariateView:
    poly: Polynomial           # univariate in `main`
    main: int
    hom: Optional[int]         # homogenizing variable for binary forms
    degree: int                # total degree of the original form
    at_infinity: int           # multiplicity of the hom variable


def _univariate_view(p: Polynomial) -> _UnivariateView:
    ring = p.ring
    used = [i for i in range(ring.ngens) if any(m[i] for m in p.itermonoms())]
    if len(used) <= 1:
        main = used[0] if used else 0
        return _UnivariateView(p, main, None, degree_in(p, main), 0)
    if len(used) == 2 and is_homogeneous(p):
        main, hom = used
        h = ring.gens[hom]
        k = min(m[hom] for m in p.itermonoms())
        rest = p.exquo(h**k) if k else p
        dehom = substitute(rest, hom, ring.one)
        return _UnivariateView(dehom, main, hom, total_degree(p), k)
    raise InvalidInputError(
        "expected a univariate polynomial or a binary homogeneous form")


def _rehomogenize(view: _UnivariateView, f: Polynomial) -> Polynomial:
    if view.hom is None:
        return f
    return homogenize_binary(f, view.main, view.hom, degree_in(f, view.main))


def _yun(f: Polynomial, x: Polynomial) -> List[Tuple[Polynomial, int]]:
    f = f.monic()
    fp = f.diff(x)
    a = f.gcd(fp)
    b = f.exquo(a)
    c = fp.exquo(a)
    d = c - b.diff(x)
    out = []
    i = 1
    while not b.is_ground:
        ai = b.gcd(d)
        b = b.exquo(ai)
        c = d.exquo(ai)
        d = c - b.diff(x)
        if not ai.is_ground:
            out.append((ai, i))
        i += 1
    return out


def _finish(p: Polynomial, view: _UnivariateView, factors: List[Tuple[Polynomial, int]]) -> Tuple[Tuple[Tuple[Polynomial, int], ...], object]:
    ring = p.ring
    result = [(normalize(_rehomogenize(view, f)), k) for f, k in factors]
    if view.at_infinity:
        result.append((ring.gens[view.hom], view.at_infinity))
    result.sort(key=lambda fk: (fk[1], sort_key(fk[0])))
    product = ring.one
    for f, k in result:
        product *= f**k
    unit = QQ(p.LC) / QQ(product.LC)
    return tuple(result), unit


def squarefree(p: Polynomial) -> SquarefreeDecomposition:
    """Yun decomposition of a univariate polynomial or binary form"""
    if not p:
        raise InvalidInputError("squarefree decomposition of the zero polynomial")
    view = _univariate_view(p)
    x = p.ring.gens[view.main]
    factors = _yun(view.poly, x) if not view.poly.is_ground else []
    result, unit = _finish(p, view, factors)
    return SquarefreeDecomposition(result, unit)


def factor_univariate(p: Polynomial, v: Optional[Variable] = None, max_degree: int = 20) -> List[Tuple[Polynomial, int]]:
    """Irreducible factors over Q with multiplicities, sorted deterministically"""
    if not p:
        raise InvalidInputError("cannot factor the zero polynomial")
    view = _univariate_view(p)
    if v is not None and var_index(p.ring, v) not in (view.main, view.hom):
        raise InvalidInputError(f"{v} is not a variable of the input")
    if view.degree > max_degree:
        raise ResourceLimitError(f"univariate factoring limited to degree {max_degree}, got {view.degree}")
    factors = []
    if not view.poly.is_ground:
        _, factors = view.poly.factor_list()
    result, _ = _finish(p, view, list(factors))
    return list(result)


def rational_roots(p: Polynomial) -> List[object]:
    """Rational roots of a univariate polynomial, ascending"""
    if not p or p.is_ground:
        return []
    view = _univariate_view(p)
    x = p.ring.gens[view.main]
    roots = []
    _, factors = view.poly.factor_list()
    for f, _ in factors:
        if degree_in(f, view.main) == 1:
            c = coefficients_in(f, x)
            roots.append(-QQ(c[0].LC if 0 in c else 0) / QQ(c[1].LC))
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^]))")


def _tokenize(text: str, names: Tuple[str, ...]) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    ordered = sorted(names, key=len, reverse=True)
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            start = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = match.start(match.lastgroup)
        if match.lastgroup == "name":
            ident = match.group("name")
            offset = 0
            while offset < len(ident):
                for n in ordered:
                    if ident.startswith(n, offset):
                        tokens.append(("name", n, start + offset))
                        offset += len(n)
                        break
                else:
                    raise ParseError(f"unknown variable in {ident!r}", start + offset)
        else:
            tokens.append((match.lastgroup, match.group(match.lastgroup), start))
        pos = match.end()
    return tokens


def _parse_number(token: str):
    if "/" in token:
        num, den = (int(part) for part in token.split("/"))
        if den == 0:
            raise ZeroDivisionError
        return QQ(num, den)
    return QQ(int(token))


def parse_polynomial(text: str, ring: Optional[PolyRing] = None) -> Polynomial:
    """
    Parse `c*x^a*y^b*z^c*w^d` terms joined by +/-; `*` and `^1` are optional.

    Raises ParseError carrying the character position of the problem.
    """
    ring = ring or polynomial_ring(XYZW)
    names = var_names(ring)
    tokens = _tokenize(text, names)
    if not tokens:
        raise ParseError("empty polynomial", 0)

    result = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = QQ.one
        kind, value, pos = tokens[i]
        if kind == "op" and value in "+-":
            if value == "-":
                sign = -sign
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", pos)
        first = False

        coeff = sign
        exps = [0] * ring.ngens
        seen_factor = False
        if i < len(tokens) and tokens[i][0] == "num":
            try:
                coeff = coeff * _parse_number(tokens[i][1].replace(" ", ""))
            except ZeroDivisionError:
                raise ParseError("zero denominator", tokens[i][2])
            seen_factor = True
            i += 1
        while i < len(tokens):
            kind, value, pos = tokens[i]
            if kind == "op" and value == "*":
                if not seen_factor:
                    raise ParseError("unexpected '*'", pos)
                i += 1
                if i >= len(tokens) or tokens[i][0] != "name":
                    raise ParseError("expected a variable after '*'", pos)
                continue
            if kind != "name":
                break
            j = names.index(value)
            i += 1
            e = 1
            if i < len(tokens) and tokens[i][1] == "^":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                    raise ParseError("expected an integer exponent", tokens[i][2])
                e = int(tokens[i + 1][1])
                i += 2
            exps[j] += e
            seen_factor = True
        if not seen_factor:
            where = tokens[i][2] if i < len(tokens) else len(text)
            raise ParseError("expected a coefficient or a variable", where)
        key = tuple(exps)
        result[key] = result.get(key, QQ.zero) + coeff

    return ring.from_dict({m: c for m, c in result.items() if c})


def _format_coeff(c) -> str:
    c = QQ(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


def format_polynomial(p: Polynomial) -> str:
    """Inverse of parse_polynomial, terms in decreasing ring order"""
    if not p:
        return "0"
    names = var_names(p.ring)
    parts = []
    for monom, coeff in p.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = _format_coeff(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(magnitude)] + factors)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)
