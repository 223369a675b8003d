#!/usr/bin/env python3
"""
Ideal Arithmetic
Buchberger Groebner bases with the Gebauer-Moeller criteria and sugar
selection, normal forms, intersection, quotient, saturation, elimination,
graded pieces as vector spaces and rational solving of zero-dimensional systems
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.groebnertools import groebner as sympy_groebner
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import MonomialOrder, grevlex, lex
from sympy.polys.rings import PolyRing

from errors import InvalidInputError, ResourceLimitError
from poly import (
    EliminationOrder,
    Polynomial,
    embed,
    evaluate_at,
    format_polynomial,
    is_homogeneous,
    monomials_of_degree,
    polynomial_ring,
    rational_roots,
    total_degree,
    var_names,
)
from utils.config import get_settings

logger = logging.getLogger(__name__)


class OrderKind(Enum):
    GREVLEX = "grevlex"
    ELIMINATION = "elimination"
    LEX = "lex"


@dataclass(frozen=True)
class TermOrder:
    kind: OrderKind = OrderKind.GREVLEX
    front: int = 0

    def monomial_order(self) -> MonomialOrder:
        if self.kind == OrderKind.ELIMINATION:
            return EliminationOrder(self.front)
        if self.kind == OrderKind.LEX:
            return lex
        return grevlex

    @classmethod
    def of(cls, ring: PolyRing) -> "TermOrder":
        if isinstance(ring.order, EliminationOrder):
            return cls(OrderKind.ELIMINATION, ring.order.front)
        if ring.order == lex:
            return cls(OrderKind.LEX)
        return cls(OrderKind.GREVLEX)


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------

def spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial of monic f and g"""
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _update(lmG: List[tuple], pairs: Dict[Tuple[int, int], tuple], lmf: tuple, ring: PolyRing) -> Tuple[set, set]:
    """Gebauer-Moeller: pairs to drop, and new pairs (i, new) to add"""
    lcm = ring.monomial_lcm
    mul = ring.monomial_mul
    div = ring.monomial_div
    new = len(lmG)

    dropped = set()
    for (i, j) in pairs:
        lij = lcm(lmG[i], lmG[j])
        if div(lij, lmf) and lij != lcm(lmG[i], lmf) and lij != lcm(lmG[j], lmf):
            dropped.add((i, j))

    by_lcm: Dict[tuple, List[int]] = {}
    for i in range(new):
        by_lcm.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal = []
    for L in sorted(by_lcm, key=ring.order):
        if all(not div(L, M) for M in minimal):
            minimal.append(L)
    added = set()
    for L in minimal:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in by_lcm[L]):
            added.add((min(by_lcm[L]), new))
    return dropped, added


def minimalize(G: List[Polynomial]) -> List[Polynomial]:
    if not G:
        return []
    R = G[0].ring
    Gmin = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in Gmin):
            Gmin.append(f)
    return Gmin


def interreduce(G: List[Polynomial]) -> List[Polynomial]:
    return [G[i].rem(G[:i] + G[i + 1:]).monic() for i in range(len(G))]


def buchberger(F: Sequence[Polynomial], max_pairs: Optional[int] = None) -> List[Polynomial]:
    """
    Reduced Groebner basis of F under F's ring order.

    Parameters:
    - F: polynomials of one ring (zeros are ignored)
    - max_pairs: budget of processed S-pairs, ResourceLimitError beyond it

    Returns:
    - monic reduced basis sorted by increasing leading monomial
    """
    F = [f for f in F if f]
    if not F:
        return []
    R = F[0].ring
    lcm = R.monomial_lcm

    G: List[Polynomial] = []
    lmG: List[tuple] = []
    sugar: List[int] = []
    pairs: Dict[Tuple[int, int], tuple] = {}

    def pair_key(i, j):
        L = lcm(lmG[i], lmG[j])
        s = max(sugar[i] + sum(L) - sum(lmG[i]), sugar[j] + sum(L) - sum(lmG[j]))
        return (s, R.order(L), i, j)

    def add(f, s):
        dropped, added = _update(lmG, pairs, f.LM, R)
        for p in dropped:
            del pairs[p]
        G.append(f)
        lmG.append(f.LM)
        sugar.append(s)
        for (i, j) in added:
            pairs[(i, j)] = pair_key(i, j)

    for f in F:
        add(f.monic(), total_degree(f))

    processed = 0
    while pairs:
        (i, j) = min(pairs, key=pairs.get)
        s_sugar = pairs.pop((i, j))[0]
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise ResourceLimitError(f"Groebner basis exceeded the budget of {max_pairs} S-pairs")
        r = spoly(G[i], G[j]).rem(G)
        if r:
            add(r.monic(), s_sugar)

    basis = interreduce(minimalize(G))
    logger.debug(f"buchberger: {len(F)} generators, {processed} pairs, {len(basis)} basis elements")
    return sorted(basis, key=lambda g: R.order(g.LM))


def compute_basis(F: Sequence[Polynomial], method: Optional[str] = None, max_pairs: Optional[int] = None) -> List[Polynomial]:
    settings = get_settings()
    method = method or settings.groebner_method
    max_pairs = settings.max_pairs if max_pairs is None else max_pairs
    F = [f for f in F if f]
    if not F:
        return []
    if method == "buchberger":
        return buchberger(F, max_pairs=max_pairs)
    if method == "sympy":
        R = F[0].ring
        return sorted((g.monic() for g in sympy_groebner(F, R)), key=lambda g: R.order(g.LM))
    raise InvalidInputError(f"unknown Groebner method {method!r}")


# ---------------------------------------------------------------------------
# Ideal
# ---------------------------------------------------------------------------

class Ideal:
    """Finitely generated ideal with a lazily cached reduced Groebner basis"""

    def __init__(self, generators: Iterable[Polynomial] = (), ring: Optional[PolyRing] = None):
        gens = [g for g in generators]
        if ring is None:
            if not gens:
                raise InvalidInputError("a ring is required for an ideal without generators")
            ring = gens[0].ring
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(embed(g, ring) for g in gens if g)
        self._basis: Optional[List[Polynomial]] = None
        self._lock = threading.Lock()

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def __repr__(self):
        gens = ", ".join(format_polynomial(g) for g in self.generators[:4])
        more = ", ..." if len(self.generators) > 4 else ""
        return f"Ideal<{gens}{more}>"

    @property
    def order(self) -> TermOrder:
        return TermOrder.of(self.ring)

    @property
    def variables(self) -> Tuple[str, ...]:
        return var_names(self.ring)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_homogeneous(self) -> bool:
        return all(is_homogeneous(g) for g in self.generators)

    @property
    def basis(self) -> List[Polynomial]:
        if self._basis is None:
            with self._lock:
                if self._basis is None:
                    self._basis = compute_basis(self.generators)
        return self._basis

    @property
    def is_unit(self) -> bool:
        return any(g.is_ground for g in self.basis)

    def groebner(self) -> "Ideal":
        self.basis
        return self

    def contains(self, p: Polynomial) -> bool:
        return not normal_form(p, self)

    def is_subset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "Ideal") -> bool:
        return self.is_subset(other) and other.is_subset(self)

    def to_strings(self) -> List[str]:
        return [format_polynomial(g) for g in self.generators]


def groebner(I: Ideal, method: Optional[str] = None) -> Ideal:
    """Ideal generated by the reduced basis of I, with that basis cached"""
    basis = compute_basis(I.generators, method=method)
    result = Ideal(basis, ring=I.ring)
    result._basis = basis
    return result


def change_ring(I: Ideal, ring: PolyRing) -> Ideal:
    return Ideal(I.generators, ring=ring)


def normal_form(p: Polynomial, I: Ideal) -> Polynomial:
    p = embed(p, I.ring)
    basis = I.basis
    return p.rem(basis) if basis else p


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(list(I.generators) + [embed(g, I.ring) for g in J.generators], ring=I.ring)


def power(I: Ideal, n: int) -> Ideal:
    if n < 1:
        raise InvalidInputError(f"ideal power needs n >= 1, got {n}")
    products = {}
    for combo in combinations_with_replacement(range(len(I.generators)), n):
        p = I.ring.one
        for i in combo:
            p = p * I.generators[i]
        products[format_polynomial(p.monic())] = p
    return Ideal(products.values(), ring=I.ring)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return Ideal([f * embed(g, I.ring) for f in I.generators for g in J.generators], ring=I.ring)


def eliminate(I: Ideal, variables: Sequence[str]) -> Ideal:
    """I intersected with the polynomial ring in the remaining variables (grevlex)"""
    names = var_names(I.ring)
    gone = [v for v in names if v in set(variables)]
    kept = tuple(v for v in names if v not in set(variables))
    target = polynomial_ring(kept, grevlex)
    if not gone:
        return change_ring(I, target)
    block = polynomial_ring(tuple(gone) + kept, EliminationOrder(len(gone)))
    basis = compute_basis([embed(g, block) for g in I.generators])
    k = len(gone)
    survivors = [g for g in basis if all(not any(m[:k]) for m in g.itermonoms())]
    return Ideal([embed(g, target) for g in survivors], ring=target)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J from t*I + (1 - t)*J by eliminating t"""
    if I.is_zero or J.is_zero:
        return Ideal([], ring=I.ring)
    if I.is_unit:
        return change_ring(J, I.ring)
    if J.is_unit:
        return I
    names = var_names(I.ring)
    aux = polynomial_ring(("_t",) + names, EliminationOrder(1))
    t = aux.gens[0]
    gens = [t * embed(g, aux) for g in I.generators]
    gens += [(1 - t) * embed(g, aux) for g in J.generators]
    result = eliminate(Ideal(gens, ring=aux), ["_t"])
    return change_ring(result, I.ring)


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    if not ideals:
        raise InvalidInputError("intersection of an empty family")
    result = ideals[0]
    for J in ideals[1:]:
        result = intersect(result, J)
    return result


def _variable_name(I: Ideal, g: Polynomial) -> Optional[str]:
    g = embed(g, I.ring)
    if g.is_term and total_degree(g) == 1:
        return var_names(I.ring)[list(g.LM).index(1)]
    return None


def _divide_by_variable(I: Ideal, name: str, saturate: bool) -> Ideal:
    """Bayer: with v last in grevlex, a homogeneous basis divides by v termwise"""
    names = var_names(I.ring)
    order = tuple(n for n in names if n != name) + (name,)
    ring = polynomial_ring(order, grevlex)
    v = ring.gens[-1]
    result = []
    for g in compute_basis([embed(g, ring) for g in I.generators]):
        k = min(m[-1] for m in g.itermonoms())
        if not saturate:
            k = min(k, 1)
        result.append(g.exquo(v**k) if k else g)
    if ring == I.ring:
        basis = sorted(interreduce(minimalize(result)), key=lambda g: ring.order(g.LM))
        divided = Ideal(basis, ring=ring)
        divided._basis = basis
        return divided
    return Ideal([embed(g, I.ring) for g in result], ring=I.ring)


def quotient_by_element(I: Ideal, g: Polynomial) -> Ideal:
    g = embed(g, I.ring)
    if not g:
        return Ideal([I.ring.one], ring=I.ring)
    name = _variable_name(I, g)
    if name is not None and I.is_homogeneous:
        return _divide_by_variable(I, name, saturate=False)
    meet = intersect(I, Ideal([g], ring=I.ring))
    return Ideal([h.exquo(g) for h in meet.generators], ring=I.ring)


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) as the intersection of I : g over generators g of J"""
    if J.is_zero:
        return Ideal([I.ring.one], ring=I.ring)
    return intersect_all([quotient_by_element(I, g) for g in J.generators])


def saturate(I: Ideal, J: Ideal) -> Ideal:
    """(I : J^inf) by iterated quotients"""
    if J.is_zero:
        return Ideal([I.ring.one], ring=I.ring)
    if len(J.generators) == 1 and I.is_homogeneous:
        name = _variable_name(I, J.generators[0])
        if name is not None:
            return _divide_by_variable(I, name, saturate=True)
    current = I
    while True:
        nxt = quotient(current, J)
        if nxt.is_subset(current):
            return current
        current = nxt


def saturate_by_variable(I: Ideal, name: str) -> Ideal:
    if not I.is_homogeneous:
        raise InvalidInputError("saturation by a variable needs a homogeneous ideal")
    return _divide_by_variable(I, name, saturate=True)


# ---------------------------------------------------------------------------
# linear algebra on graded pieces
# ---------------------------------------------------------------------------

def rref(rows: List[List], ncols: int) -> Tuple[List[List], List[int]]:
    """Reduced row echelon form over QQ; zero rows are dropped"""
    if not rows:
        return [], []
    M = DomainMatrix([[QQ.convert(c) for c in row] for row in rows], (len(rows), ncols), QQ)
    R, pivots = M.rref()
    reduced = R.to_list()[:len(pivots)]
    return reduced, list(pivots)


def nullspace(rows: List[List], ncols: int) -> List[List]:
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        vec = [QQ.zero] * ncols
        vec[f] = QQ.one
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][f]
        basis.append(vec)
    return basis


def _columns(polys: Sequence[Polynomial], ring: PolyRing, monomials: Optional[List[tuple]] = None) -> List[tuple]:
    if monomials is None:
        seen = set()
        for p in polys:
            seen.update(p.itermonoms())
        monomials = list(seen)
    return sorted(monomials, key=ring.order, reverse=True)


def _to_rows(polys: Sequence[Polynomial], columns: List[tuple]) -> List[List]:
    return [[p.get(m, QQ.zero) for m in columns] for p in polys]


def _from_row(row: Sequence, columns: List[tuple], ring: PolyRing) -> Polynomial:
    return ring.from_dict({m: c for m, c in zip(columns, row) if c})


def span_basis(polys: Sequence[Polynomial], ring: PolyRing) -> List[Polynomial]:
    """Canonical echelon basis of the Q-span of polys, decreasing leading monomials"""
    polys = [embed(p, ring) for p in polys if p]
    if not polys:
        return []
    columns = _columns(polys, ring)
    reduced, _ = rref(_to_rows(polys, columns), len(columns))
    return [_from_row(row, columns, ring) for row in reduced]


def subspace_intersection(U: Sequence[Polynomial], V: Sequence[Polynomial], ring: PolyRing) -> List[Polynomial]:
    """Echelon basis of span(U) ∩ span(V)"""
    U = [embed(p, ring) for p in U if p]
    V = [embed(p, ring) for p in V if p]
    if not U or not V:
        return []
    columns = _columns(U + V, ring)
    urows = _to_rows(U, columns)
    vrows = _to_rows(V, columns)
    # columns of the system are the spanning vectors: sum a_i U_i - sum b_j V_j = 0
    system = [[u[k] for u in urows] + [-v[k] for v in vrows] for k in range(len(columns))]
    combos = nullspace(system, len(U) + len(V))
    meet = []
    for a in combos:
        vec = [sum((a[i] * urows[i][k] for i in range(len(U))), QQ.zero) for k in range(len(columns))]
        meet.append(_from_row(vec, columns, ring))
    return span_basis(meet, ring)


def in_span(p: Polynomial, basis: Sequence[Polynomial], ring: PolyRing) -> bool:
    p = embed(p, ring)
    if not p:
        return True
    return len(span_basis(list(basis) + [p], ring)) == len(span_basis(basis, ring))


def residual(p: Polynomial, basis: Sequence[Polynomial], ring: PolyRing) -> Polynomial:
    """p reduced against an echelon basis (basis from span_basis)"""
    p = embed(p, ring)
    for b in basis:
        c = p.get(b.LM, QQ.zero)
        if c:
            p = p - b.mul_ground(c / b.LC)
    return p


def _multiples_in_degree(gens: Sequence[Polynomial], d: int, ring: PolyRing) -> List[Polynomial]:
    result = []
    for g in gens:
        e = d - total_degree(g)
        if e < 0:
            continue
        for m in monomials_of_degree(ring.ngens, e):
            result.append(g.mul_monom(m))
    return result


def graded_piece(I: Ideal, d: int) -> List[Polynomial]:
    """Basis of the degree-d component of a homogeneous ideal"""
    if d < 0:
        raise InvalidInputError("degree must be non-negative")
    if not I.is_homogeneous:
        raise InvalidInputError("graded pieces need a homogeneous ideal")
    if I.is_zero:
        return []
    return span_basis(_multiples_in_degree(I.basis, d, I.ring), I.ring)


def graded_piece_bruteforce(I: Ideal, d: int) -> List[Polynomial]:
    """Same space from the original generators, without a Groebner basis"""
    return span_basis(_multiples_in_degree(I.generators, d, I.ring), I.ring)


def hilbert_function(I: Ideal, d: int) -> int:
    """dim (R/I)_d, counted by standard monomials of the cached basis"""
    leads = [g.LM for g in I.basis]
    div = I.ring.monomial_div
    return sum(1 for m in monomials_of_degree(I.ring.ngens, d)
               if not any(div(m, lm) is not None for lm in leads))


def graded_dimension(I: Ideal, d: int) -> int:
    return comb(I.ring.ngens + d - 1, d) - hilbert_function(I, d)


def has_empty_projective_zero_set(I: Ideal) -> bool:
    """True iff every variable has a pure power among the leading monomials"""
    grevlex_ring = polynomial_ring(var_names(I.ring), grevlex)
    leads = [g.LM for g in change_ring(I, grevlex_ring).basis]
    n = grevlex_ring.ngens
    if any(sum(lm) == 0 for lm in leads):
        return True
    return all(any(lm[i] and sum(lm) == lm[i] for lm in leads) for i in range(n))


def rational_points(I: Ideal) -> List[Dict[str, object]]:
    """
    All rational solutions of a zero-dimensional affine system.

    Uses a lex basis and back substitution through rational roots of
    the univariate eliminants.
    """
    names = var_names(I.ring)
    ring = polynomial_ring(names, lex)
    basis = change_ring(I, ring).basis
    if not basis:
        raise InvalidInputError("the zero ideal has no finite solution set")
    if any(g.is_ground for g in basis):
        return []
    n = ring.ngens

    def candidates(values: Dict[int, object], i: int) -> List[object]:
        univariate = []
        for g in basis:
            h = evaluate_at(g, values) if values else g
            if not h:
                continue
            support = {k for m in h.itermonoms() for k in range(n) if m[k]}
            if not support:
                return []
            if support == {i}:
                univariate.append(h)
        if not univariate:
            raise InvalidInputError("system is not zero-dimensional")
        common = univariate[0]
        for h in univariate[1:]:
            common = common.gcd(h)
        return rational_roots(common)

    points = []

    def solve(values: Dict[int, object], i: int):
        if i < 0:
            if all(not evaluate_at(g, values) for g in basis):
                points.append({names[k]: v for k, v in sorted(values.items())})
            return
        for root in candidates(values, i):
            solve({**values, i: root}, i - 1)

    solve({}, n - 1)
    points.sort(key=lambda pt: tuple(pt[v] for v in names))
    return points
