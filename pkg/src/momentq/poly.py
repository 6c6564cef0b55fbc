"""Sparse multivariate polynomials over exact rationals with weighted grading.

Monomials are dense exponent tuples indexed by the ring's variable table.
Coefficients are exact rationals (gmpy2.mpq when available, otherwise
fractions.Fraction); both are always stored in lowest terms with positive
denominator, so structural equality of the term map is mathematical equality.
"""

from __future__ import annotations

import re
from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a hard dep, this is a fallback
    Rat = Fraction

RAT_ZERO = Rat(0)
RAT_ONE = Rat(1)


class RingError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Ring:
    """An ordered table of named variables with positive grading weights."""

    __slots__ = ("names", "weights", "index", "nvars", "_zero_exps")

    def __init__(self, spec):
        names = []
        weights = []
        seen = set()
        for name, weight in spec:
            if name in seen:
                raise RingError(f"duplicate variable name {name!r}")
            if not isinstance(weight, int) or weight < 1:
                raise RingError(f"weight of {name!r} must be a positive integer")
            seen.add(name)
            names.append(name)
            weights.append(weight)
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(self.names)
        self._zero_exps = (0,) * self.nvars

    def __repr__(self):
        return f"Ring({list(zip(self.names, self.weights))!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.weights))

    def wdeg(self, exps):
        """Weighted degree of an exponent tuple."""
        return sum(e * w for e, w in zip(exps, self.weights))

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {self._zero_exps: RAT_ONE})

    def const(self, c):
        c = Rat(c)
        if not c:
            return self.zero()
        return Polynomial(self, {self._zero_exps: c})

    def var(self, name):
        try:
            i = self.index[name]
        except KeyError:
            raise RingError(f"unknown variable {name!r}") from None
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): RAT_ONE})

    def monomial(self, exps, coeff=1):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise RingError("exponent tuple has wrong length")
        coeff = Rat(coeff)
        if not coeff:
            return self.zero()
        return Polynomial(self, {exps: coeff})


def make_ring(spec):
    """Build a ring descriptor from (name, weight) pairs."""
    return Ring(spec)


class Polynomial:
    """Immutable sparse polynomial; terms map exponent tuples to nonzero rationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        # terms must already be canonical: no zero coefficients, Rat values
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_terms(cls, ring, items):
        terms = {}
        for exps, c in items:
            exps = tuple(exps)
            c = terms.get(exps, RAT_ZERO) + Rat(c)
            if c:
                terms[exps] = c
            else:
                terms.pop(exps, None)
        return cls(ring, terms)

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def constant_value(self):
        if not self.terms:
            return RAT_ZERO
        (m, c), = self.terms.items()
        if any(m):
            raise ValueError("not a constant polynomial")
        return c

    def degree(self):
        """Maximal weighted degree over all terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        wd = self.ring.wdeg
        return max(wd(m) for m in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        wd = self.ring.wdeg
        degs = {wd(m) for m in self.terms}
        return len(degs) == 1

    def variables(self):
        """Names of variables that actually occur."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.names[i])
        return used

    # -- arithmetic ------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingError("polynomials belong to different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return self + self.ring.const(other)
        self._check_ring(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            nc = terms.get(m, RAT_ZERO) + c
            if nc:
                terms[m] = nc
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return self - self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Rat(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: cc * c for m, cc in self.terms.items()})
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                nc = terms.get(m, RAT_ZERO) + ca * cb
                if nc:
                    terms[m] = nc
                else:
                    del terms[m]
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(RAT_ONE):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation ----------------------------------------

    def diff(self, name):
        """Formal partial derivative with respect to the named variable."""
        i = self.ring.index.get(name)
        if i is None:
            raise RingError(f"unknown variable {name!r}")
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if not e:
                continue
            mm = m[:i] + (e - 1,) + m[i + 1:]
            nc = terms.get(mm, RAT_ZERO) + c * e
            if nc:
                terms[mm] = nc
            else:
                del terms[mm]
        return Polynomial(self.ring, terms)

    def evaluate(self, assignment):
        """Evaluate at a map from variable name to rational; exact result."""
        values = {}
        for name, v in assignment.items():
            i = self.ring.index.get(name)
            if i is None:
                raise RingError(f"unknown variable {name!r}")
            values[i] = Rat(v)
        total = RAT_ZERO
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if not e:
                    continue
                if i not in values:
                    raise RingError(
                        f"no value assigned to variable {self.ring.names[i]!r}"
                    )
                v = v * values[i] ** e
            total += v
        return total

    def substitute(self, mapping, target=None):
        """Ring morphism: replace each occurring variable by a polynomial.

        `mapping` maps variable names to polynomials of the target ring;
        variables not occurring in self may be absent from the mapping.
        """
        if target is None:
            some = next(iter(mapping.values()))
            target = some.ring
        images = {}
        for name, img in mapping.items():
            i = self.ring.index.get(name)
            if i is None:
                raise RingError(f"unknown variable {name!r}")
            images[i] = img
        powers = {}

        def power(i, e):
            cached = powers.get((i, e))
            if cached is None:
                cached = images[i] ** e
                powers[(i, e)] = cached
            return cached

        result = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i not in images:
                    raise RingError(
                        f"no image for variable {self.ring.names[i]!r}"
                    )
                term = term * power(i, e)
            result = result + term
        return result

    # -- text form -------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<{format_poly(self)}>"


# ---------------------------------------------------------------------------
# Text grammar: terms joined by + / -, coefficients as int or num/den,
# variables `name` or `name[i]` / `name[i,j]`, powers with ^, products with *.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*(?:\[\s*\d+\s*(?:,\s*\d+\s*)*\])?)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos and not text[pos:].strip():
            break
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup is None:
            break
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "name":
            value = re.sub(r"\s+", "", value)
        tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
    return tokens


def parse_poly(text, ring):
    """Parse the interchange grammar into a polynomial of `ring`."""
    tokens = _tokenize(text)
    n = len(tokens)
    i = 0

    def peek():
        return tokens[i] if i < n else (None, None, len(text))

    def term():
        # coefficient and variable powers joined by '*'
        nonlocal i
        coeff = RAT_ONE
        exps = [0] * ring.nvars
        saw_factor = False
        while True:
            kind, value, pos = peek()
            if kind == "num":
                i += 1
                num = int(value)
                k2, v2, _ = peek()
                if k2 == "op" and v2 == "/":
                    i += 1
                    k3, v3, p3 = peek()
                    if k3 != "num":
                        raise ParseError("expected denominator", p3)
                    i += 1
                    if int(v3) == 0:
                        raise ParseError("zero denominator", p3)
                    coeff = coeff * Rat(num, int(v3))
                else:
                    coeff = coeff * num
            elif kind == "name":
                i += 1
                vi = ring.index.get(value)
                if vi is None:
                    raise ParseError(f"unknown variable {value!r}", pos)
                e = 1
                k2, v2, _ = peek()
                if k2 == "op" and v2 == "^":
                    i += 1
                    k3, v3, p3 = peek()
                    if k3 != "num":
                        raise ParseError("expected exponent", p3)
                    i += 1
                    e = int(v3)
                exps[vi] += e
            else:
                raise ParseError("expected coefficient or variable", pos)
            saw_factor = True
            kind, value, pos = peek()
            if kind == "op" and value == "*":
                i += 1
                continue
            break
        if not saw_factor:
            raise ParseError("empty term", peek()[2])
        return tuple(exps), coeff

    items = []
    sign = 1
    kind, value, pos = peek()
    if kind == "op" and value in "+-":
        if value == "-":
            sign = -1
        i += 1
    while True:
        exps, coeff = term()
        items.append((exps, sign * coeff))
        kind, value, pos = peek()
        if kind is None:
            break
        if kind == "op" and value in "+-":
            sign = 1 if value == "+" else -1
            i += 1
        else:
            raise ParseError(f"unexpected token {value!r}", pos)
    p = Polynomial.from_terms(ring, items)
    if len(items) == 1 and not any(items[0][0]) and items[0][1] == 0:
        return ring.zero()
    return p


def _format_coeff(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p):
    """Deterministic text form; parse(format(p)) == p."""
    if not p.terms:
        return "0"
    ring = p.ring
    wd = ring.wdeg
    # graded-lex on the ring's own variable sequence, highest first
    keys = sorted(p.terms, key=lambda m: (wd(m), m), reverse=True)
    pieces = []
    for m in keys:
        c = p.terms[m]
        factors = []
        for idx, e in enumerate(m):
            if not e:
                continue
            name = ring.names[idx]
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = c if c > 0 else -c
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)
