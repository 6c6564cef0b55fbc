"""Hilbert series of weighted-graded quotient rings.

The series of R/I is computed from the leading-term ideal of a Groebner
basis (Macaulay's theorem) by the pivot recursion
K(I + <m>) = K(I) - t^deg(m) K(I : m) on monomial ideals.  Univariate
integer polynomials are plain {degree: coefficient} dicts throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import orders
from .groebner import groebner_basis, _key_cache
from .poly import Ring


# -- univariate helpers ------------------------------------------------------

def _uadd(a, b):
    out = dict(a)
    for d, c in b.items():
        nc = out.get(d, 0) + c
        if nc:
            out[d] = nc
        else:
            del out[d]
    return out


def _uscale_shift(a, c, shift):
    return {d + shift: cc * c for d, cc in a.items()}

def _umul(a, b):
    out = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            nc = out.get(d, 0) + ca * cb
            if nc:
                out[d] = nc
            else:
                del out[d]
    return out


def _udeg(a):
    return max(a) if a else -1


def _ueval(a, t):
    return sum(c * t ** d for d, c in a.items())


def _udiv_one_minus_tw(a, w):
    """Exact quotient a / (1 - t^w), or None when not divisible."""
    if not a:
        return {}
    q = {}
    deg = _udeg(a)
    # ascending recurrence: q_d = a_d + q_{d-w}
    for d in range(deg + 1):
        c = a.get(d, 0) + q.get(d - w, 0)
        if c:
            q[d] = c
    # the recurrence must terminate: q must vanish above deg - w
    for d in q:
        if d > deg - w:
            return None
    return q


def _ureverse(a):
    deg = _udeg(a)
    return {deg - d: c for d, c in a.items()}


def _vanishing_order_at_one(a):
    order = 0
    while a and _ueval(a, 1) == 0:
        # synthetic division by (t - 1)
        deg = _udeg(a)
        q = {}
        carry = 0
        for d in range(deg, 0, -1):
            carry = carry + a.get(d, 0)
            if carry:
                q[d - 1] = carry
        a = q
        order += 1
    return order


def _ustr(a, var="t"):
    if not a:
        return "0"
    pieces = []
    for d in sorted(a):
        c = a[d]
        if d == 0:
            body = str(abs(c))
        else:
            v = var if d == 1 else f"{var}^{d}"
            body = v if abs(c) == 1 else f"{abs(c)}*{v}"
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


# -- monomial-ideal numerator ------------------------------------------------

def _minimalize(gens):
    """Minimal generating set of the monomial ideal; deterministic order."""
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for m in gens:
        if any(all(x <= y for x, y in zip(g, m)) for g in out):
            continue
        out.append(m)
    return out


def _support(m):
    return frozenset(i for i, e in enumerate(m) if e)


def _numerator(gens, weights, memo):
    gens = tuple(_minimalize(gens))
    if not gens:
        return {0: 1}
    cached = memo.get(gens)
    if cached is not None:
        return cached

    # split into components with disjoint variable support
    supports = [_support(m) for m in gens]
    comp = list(range(len(gens)))

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    var_owner = {}
    for gi, s in enumerate(supports):
        for v in s:
            if v in var_owner:
                ra, rb = find(var_owner[v]), find(gi)
                comp[ra] = rb
            else:
                var_owner[v] = gi
    groups = {}
    for gi in range(len(gens)):
        groups.setdefault(find(gi), []).append(gens[gi])
    if len(groups) > 1:
        result = {0: 1}
        for sub in groups.values():
            result = _umul(result, _numerator(tuple(sub), weights, memo))
        memo[gens] = result
        return result

    wdeg = lambda m: sum(e * w for e, w in zip(m, weights))
    pures = [m for m in gens if len(_support(m)) == 1]
    if len(pures) == len(gens):
        result = {0: 1}
        for m in gens:
            result = _umul(result, {0: 1, wdeg(m): -1})
        memo[gens] = result
        return result

    # pivot on the variable occurring in the most generators
    counts = {}
    for m in gens:
        for v in _support(m):
            counts[v] = counts.get(v, 0) + 1
    pivot = max(counts, key=lambda v: (counts[v], -v))
    w = weights[pivot]

    without = tuple(m for m in gens if not m[pivot])
    quotient = tuple(
        m[:pivot] + (max(m[pivot] - 1, 0),) + m[pivot + 1:] for m in gens
    )
    # I + <x_pivot>: the remaining generators avoid the pivot variable
    left = _umul({0: 1, w: -1}, _numerator(without, weights, memo))
    right = _uscale_shift(_numerator(quotient, weights, memo), 1, w)
    result = _uadd(left, right)
    memo[gens] = result
    return result


def hilbert_numerator_monomial(gens, ring):
    """Numerator K with Hilb(R/<gens>) = K(t) / prod_vars (1 - t^w_i)."""
    memo = {}
    return _numerator(tuple(tuple(m) for m in gens), ring.weights, memo)


def leading_term_ideal(ideal, order, **caps):
    """Minimal generators of the leading-term ideal of a homogeneous ideal."""
    for g in ideal.generators:
        if not g.is_homogeneous():
            raise ValueError("leading_term_ideal needs homogeneous generators")
    annotated = groebner_basis(ideal, order, **caps)
    key = _key_cache(order)
    lts = [max(g.terms, key=key) for g in annotated.groebner_basis]
    return _minimalize(lts)


# -- the series object -------------------------------------------------------

@dataclass(frozen=True)
class HilbertSeries:
    """Rational function N(t) / prod (1 - t^w) with integer numerator."""

    numerator: tuple  # sorted ((degree, coeff), ...)
    denominator_weights: tuple
    reduced: bool = False

    @classmethod
    def make(cls, numerator, weights, reduced=False):
        num = tuple(sorted((d, c) for d, c in numerator.items() if c))
        return cls(num, tuple(sorted(weights)), reduced)

    def num_dict(self):
        return dict(self.numerator)

    def reduce(self):
        """Cancel whole (1 - t^w) denominator factors dividing the numerator."""
        num = self.num_dict()
        weights = list(self.denominator_weights)
        changed = True
        while changed:
            changed = False
            for w in sorted(set(weights)):
                q = _udiv_one_minus_tw(num, w)
                while q is not None and w in weights:
                    num = q
                    weights.remove(w)
                    changed = True
                    q = _udiv_one_minus_tw(num, w)
        return HilbertSeries.make(num, weights, reduced=True)

    @property
    def dimension(self):
        """Pole order at t = 1 (the Krull dimension for a quotient ring)."""
        return len(self.denominator_weights) - _vanishing_order_at_one(
            self.num_dict()
        )

    @property
    def a_invariant(self):
        """Degree of the rational function."""
        return _udeg(self.num_dict()) - sum(self.denominator_weights)

    def evaluate(self, t):
        t = Fraction(t)
        denom = Fraction(1)
        for w in self.denominator_weights:
            denom *= 1 - t ** w
        if denom == 0:
            raise ZeroDivisionError("pole of the Hilbert series")
        return Fraction(_ueval(self.num_dict(), t)) / denom

    def same_series(self, other):
        """Equality as rational functions (cross multiplication)."""
        a = self.num_dict()
        for w in other.denominator_weights:
            a = _umul(a, {0: 1, w: -1})
        b = other.num_dict()
        for w in self.denominator_weights:
            b = _umul(b, {0: 1, w: -1})
        return a == b

    def __str__(self):
        num = _ustr(self.num_dict())
        weights = self.denominator_weights
        if not weights:
            return num
        parts = []
        for w in sorted(set(weights)):
            count = weights.count(w)
            base = f"(1 - t^{w})" if w > 1 else "(1 - t)"
            parts.append(base if count == 1 else f"{base}^{count}")
        return f"({num}) / {''.join(parts)}"

    def record(self):
        return {
            "numerator": [[d, c] for d, c in self.numerator],
            "denominator_weights": list(self.denominator_weights),
            "dimension": self.dimension,
            "a_invariant": self.a_invariant,
        }


def hilbert_series_quotient(ideal, order=None, **caps):
    """Reduced Hilbert series of R/I for a homogeneous ideal I."""
    if order is None:
        order = orders.grevlex(ideal.ring)
    lts = leading_term_ideal(ideal, order, **caps)
    num = hilbert_numerator_monomial(lts, ideal.ring)
    return HilbertSeries.make(num, ideal.ring.weights).reduce()


def dimension_and_a_invariant(series):
    return series.dimension, series.a_invariant


def gorenstein_check(series):
    """(functional equation holds, holds with d == -a).

    The functional equation is Hilb(1/t) == (-1)^d t^(-a) Hilb(t); in terms
    of the stored form it reduces to rev(N) == (-1)^(d - s) N with s the
    number of denominator factors.
    """
    num = series.num_dict()
    d = series.dimension
    s = len(series.denominator_weights)
    rev = _ureverse(num)
    if (d - s) % 2 == 0:
        satisfied = rev == num
    else:
        satisfied = rev == {deg: -c for deg, c in num.items()}
    graded = satisfied and d == -series.a_invariant
    return satisfied, graded


def laurent_at_one(series, terms):
    """Leading Laurent coefficients at t=1: [c_{-d}, c_{-d+1}, ...].

    Exact expansion in s = 1 - t; entry j is the coefficient of
    (1 - t)^(j - d) with d the pole order.
    """
    num = series.num_dict()
    deg = _udeg(num)
    if deg < 0:
        return [Fraction(0)] * terms
    # N(1 - s) as a polynomial in s
    from math import comb

    n_s = {}
    for d0, c in num.items():
        for j in range(d0 + 1):
            coeff = c * comb(d0, j) * (-1) ** j
            nc = n_s.get(j, 0) + coeff
            if nc:
                n_s[j] = nc
            else:
                del n_s[j]
    # (1 - (1 - s)^w) = s * u_w(s) with u_w(0) = w
    u = {0: 1}
    for w in series.denominator_weights:
        uw = {}
        for j in range(1, w + 1):
            uw[j - 1] = -comb(w, j) * (-1) ** j
        u = _umul(u, uw)
    # strip the shared s-power from the numerator
    z = min(n_s) if n_s else 0
    n_s = {d0 - z: c for d0, c in n_s.items()}
    # exact power series division n_s / u up to `terms` coefficients
    inv0 = Fraction(1, u[0])
    coeffs = []
    acc = {d0: Fraction(c) for d0, c in n_s.items()}
    for j in range(terms):
        cj = acc.get(j, Fraction(0)) * inv0
        coeffs.append(cj)
        if cj:
            for du, cu in u.items():
                dd = j + du
                nv = acc.get(dd, Fraction(0)) - cj * cu
                acc[dd] = nv
    return coeffs


def complete_intersection_series(k, n):
    """Series of the moment-map complete intersection: (1-t^2)^C(n,2)/(1-t)^(2kn)."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    from math import comb

    e = comb(n, 2)
    num = {0: 1}
    for _ in range(e):
        num = _umul(num, {0: 1, 2: -1})
    return HilbertSeries.make(num, [1] * (2 * k * n))
