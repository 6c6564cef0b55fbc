"""Exterior algebra with polynomial coefficients and minor certificates.

Elements live in the exterior algebra of a rank-m free module over the Gram
ring; the columns of the Gram matrix give grade-1 elements, and the 2-form
Q = sum_l col_{2l-1} ^ col_{2l} has the Q_{i,j} generators as components.
The certificate construction solves Q ^ w = col-blade by the Case-1/Case-2
recursion and reads the minor identity off the e-basis components.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import factorial

from .model import minor, q_generator
from .poly import ParseError, Rat, RAT_ONE, format_poly, parse_poly


def sort_indices(seq):
    """(sign, sorted tuple) by transposition parity; sign 0 on a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def merge_indices(a, b):
    """Merge strictly increasing tuples; (sign, merged), sign 0 on a collision."""
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return 0, ()
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] passes the remaining elements of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


class RankError(ValueError):
    pass


class ExteriorElement:
    """Grade-homogeneous element; terms map increasing index tuples to coefficients.

    Coefficients may be exact rationals or Gram-ring polynomials; zero
    coefficients are never stored, so structural equality is equality.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank, terms):
        self.rank = rank
        self.terms = terms

    @classmethod
    def make(cls, rank, items):
        terms = {}
        for idx, c in items:
            s, key = sort_indices(idx)
            if s == 0 or not c:
                continue
            if any(i < 1 or i > rank for i in key):
                raise RankError(f"index out of range for rank {rank}")
            if s < 0:
                c = -c
            cur = terms.get(key)
            nc = c if cur is None else cur + c
            if nc:
                terms[key] = nc
            else:
                terms.pop(key, None)
        grades = {len(k) for k in terms}
        if len(grades) > 1:
            raise ValueError("element is not grade homogeneous")
        return cls(rank, terms)

    def is_zero(self):
        return not self.terms

    def grade(self):
        """Grade of a nonzero element; None for zero."""
        for k in self.terms:
            return len(k)
        return None

    def __eq__(self, other):
        return (
            isinstance(other, ExteriorElement)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __add__(self, other):
        if self.rank != other.rank:
            raise RankError("rank mismatch")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            cur = terms.get(k)
            nc = c if cur is None else cur + c
            if nc:
                terms[k] = nc
            else:
                terms.pop(k, None)
        out = ExteriorElement(self.rank, terms)
        grades = {len(k) for k in terms}
        if len(grades) > 1:
            raise ValueError("sum is not grade homogeneous")
        return out

    def __neg__(self):
        return ExteriorElement(self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return ExteriorElement(self.rank, {})
        return ExteriorElement(self.rank, {k: cc * c for k, cc in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "<0>"
        parts = []
        for k in sorted(self.terms):
            blade = "^".join(f"e{i}" for i in k) or "1"
            parts.append(f"({self.terms[k]})*{blade}")
        return "<" + " + ".join(parts) + ">"


def scalar_element(rank, coeff):
    if not coeff:
        return ExteriorElement(rank, {})
    return ExteriorElement(rank, {(): coeff})


def basis_blade(rank, indices, coeff=RAT_ONE):
    return ExteriorElement.make(rank, [(tuple(indices), coeff)])


def wedge_mul(u, v):
    """Exterior product; sign by permutation parity of the merged indices."""
    if u.rank != v.rank:
        raise RankError("rank mismatch")
    terms = {}
    for ka, ca in u.terms.items():
        for kb, cb in v.terms.items():
            s, key = merge_indices(ka, kb)
            if s == 0:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            cur = terms.get(key)
            nc = c if cur is None else cur + c
            if nc:
                terms[key] = nc
            else:
                del terms[key]
    return ExteriorElement(u.rank, terms)


def column_vector(gr, j, m=None):
    """Grade-1 element sum_i x(i,j) e_i: column j of the Gram matrix."""
    m = 2 * gr.k if m is None else m
    if not (1 <= j <= 2 * gr.k) or not (1 <= m <= 2 * gr.k):
        raise IndexError("column or rank out of range")
    return ExteriorElement(m, {(i,): gr.x(i, j) for i in range(1, m + 1)})


def column_blade(gr, cols, m=None):
    """Wedge of the chosen column vectors, in the given order."""
    m = 2 * gr.k if m is None else m
    out = scalar_element(m, gr.ring.one())
    for j in cols:
        out = wedge_mul(out, column_vector(gr, j, m))
    return out


def build_q_wedge(gr, m=None):
    """The 2-form sum_l col_{2l-1} ^ col_{2l}; components are the Q_{i,j}."""
    m = 2 * gr.k if m is None else m
    if m < 2:
        raise RankError("need rank at least 2")
    total = ExteriorElement(m, {})
    for ell in range(1, gr.k + 1):
        total = total + wedge_mul(
            column_vector(gr, 2 * ell - 1, m), column_vector(gr, 2 * ell, m)
        )
    return total


# -- the certificate recursion on free column symbols ------------------------

def _free_wedge(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            s, key = merge_indices(ka, kb)
            if s == 0:
                continue
            nc = out.get(key, 0) + s * ca * cb
            if nc:
                out[key] = nc
            else:
                del out[key]
    return out


def _omega_free(pairs, cols):
    """Scalar w on column symbols with (sum_p x_a ^ x_b) ^ w = x_cols.

    `pairs` is a list of (a, b) index pairs with a < b; `cols` is strictly
    increasing with one more element than there are pairs, every element
    belonging to some pair.  Case 1 strips the lowest pair meeting cols in
    exactly one symbol; Case 2 handles cols equal to a union of pairs by the
    explicit factorial-weighted sum.
    """
    cols = tuple(cols)
    colset = set(cols)
    for idx, (a, b) in enumerate(pairs):
        ina, inb = a in colset, b in colset
        if ina == inb:
            continue
        keep = b if inb else a
        rest = pairs[:idx] + pairs[idx + 1:]
        sub_cols = tuple(c for c in cols if c != keep)
        sigma = _omega_free(rest, sub_cols)
        # reordering x_{sub_cols} ^ x_keep back to sorted x_cols
        sign = -1 if sum(1 for c in sub_cols if c > keep) % 2 else 1
        out = {}
        for key, c in sigma.items():
            s, merged = merge_indices(key, (keep,))
            if s == 0:
                continue
            out[merged] = out.get(merged, 0) + s * sign * c
        return {k: c for k, c in out.items() if c}

    # cols is a union of pairs
    cpairs = [p for p in pairs if p[0] in colset]
    opairs = [p for p in pairs if p[0] not in colset]
    r = len(cpairs)
    if 2 * r != len(cols) or len(opairs) != r - 1:
        raise ValueError("columns are not covered by the pairs")
    out = {}
    for t in range(r):
        coeff = Rat(
            (-1) ** t * factorial(r - t - 1) * factorial(t), factorial(r)
        )
        for A in itertools.combinations(cpairs, r - t - 1):
            for B in itertools.combinations(opairs, t):
                key = tuple(sorted(x for p in A + B for x in p))
                out[key] = out.get(key, 0) + coeff
    return {k: c for k, c in out.items() if c}


def sigma_case2(gr, k):
    """The explicit Case-2 solution for pairs 1..k and columns 1..k+1.

    Returns the e-basis expansion over the Gram ring; k must be odd and at
    most the ring's k.
    """
    if k % 2 == 0:
        raise ValueError("the explicit form needs odd k")
    if k > gr.k:
        raise ValueError("k exceeds the ring's pair count")
    pairs = [(2 * ell - 1, 2 * ell) for ell in range(1, k + 1)]
    free = _omega_free(pairs, tuple(range(1, k + 2)))
    return _expand_free(free, gr, 2 * gr.k)


def _expand_free(free, gr, m):
    """Free column-symbol form to the e-basis over the Gram ring."""
    columns = {}
    total = ExteriorElement(m, {})
    for key, c in sorted(free.items()):
        elem = scalar_element(m, gr.ring.const(c))
        for j in key:
            col = columns.get(j)
            if col is None:
                col = columns[j] = column_vector(gr, j, m)
            elem = wedge_mul(elem, col)
        total = total + elem
    return total


@dataclass
class MinorCertificate:
    """minor(rows; cols) = sum over (i, j) of coefficient * Q_{i,j}."""

    rows: tuple
    cols: tuple
    coefficients: dict  # (i, j) with i < j -> Gram-ring polynomial

    def support(self):
        return sorted(self.coefficients)


def _check_index_set(gr, seq, what):
    seq = tuple(sorted(seq))
    if len(seq) != gr.k + 1 or len(set(seq)) != len(seq):
        raise ValueError(f"{what} must be {gr.k + 1} distinct indices")
    if not all(1 <= i <= 2 * gr.k for i in seq):
        raise ValueError(f"{what} out of range")
    return seq


def minor_certificate(gr, rows, cols):
    """Certificate expressing the (k+1) x (k+1) minor through the Q_{i,j}.

    The free solution w of Q ^ w = x_cols is checked formally, expanded over
    the Gram ring, and the e_rows component of Q ^ w collected per Q_{i,j}.
    """
    rows = _check_index_set(gr, rows, "rows")
    cols = _check_index_set(gr, cols, "cols")
    pairs = [(2 * ell - 1, 2 * ell) for ell in range(1, gr.k + 1)]
    free = _omega_free(pairs, cols)
    q_free = {tuple(p): RAT_ONE for p in pairs}
    if _free_wedge(q_free, free) != {cols: RAT_ONE}:
        raise AssertionError("free wedge identity failed")
    omega = _expand_free(free, gr, 2 * gr.k)
    coefficients = {}
    for i, j in itertools.combinations(rows, 2):
        rest = tuple(r for r in rows if r != i and r != j)
        c = omega.terms.get(rest)
        if c is None:
            continue
        sign, merged = merge_indices((i, j), rest)
        if merged != rows:
            raise AssertionError("row bookkeeping failed")
        coefficients[(i, j)] = c if sign > 0 else -c
    return MinorCertificate(rows, cols, coefficients)


def certificate_combination(cert, gr):
    """The polynomial sum coeff * Q_{i,j} the certificate asserts."""
    total = gr.ring.zero()
    for (i, j), c in cert.coefficients.items():
        total = total + c * q_generator(gr, i, j)
    return total


def verify_certificate(cert, gr):
    """Exact equality of the certified combination and the minor."""
    return certificate_combination(cert, gr) == minor(gr, cert.rows, cert.cols)


def format_certificate(cert):
    rows = ",".join(str(i) for i in cert.rows)
    cols = ",".join(str(i) for i in cert.cols)
    parts = []
    for (i, j) in sorted(cert.coefficients):
        parts.append(f"({format_poly(cert.coefficients[(i, j)])}) * Q[{i},{j}]")
    body = " + ".join(parts) if parts else "0"
    return f"minor({rows};{cols}) = {body}"


_CERT_HEAD = re.compile(r"minor\(([0-9,]+);([0-9,]+)\)\s*=\s*(.*)$")
_CERT_TERM = re.compile(r"\s*(\+)?\s*\(([^()]*)\)\s*\*\s*Q\[(\d+),(\d+)\]")


def parse_certificate(text, gr):
    """Inverse of format_certificate over the given Gram ring."""
    m = _CERT_HEAD.match(text.strip())
    if m is None:
        raise ParseError("expected a minor(...;...) = ... line", 0)
    rows = tuple(int(s) for s in m.group(1).split(","))
    cols = tuple(int(s) for s in m.group(2).split(","))
    body = m.group(3).strip()
    coefficients = {}
    if body != "0":
        pos = 0
        first = True
        while pos < len(body):
            tm = _CERT_TERM.match(body, pos)
            if tm is None or (not first and tm.group(1) is None):
                raise ParseError("malformed certificate term", pos)
            i, j = int(tm.group(3)), int(tm.group(4))
            coefficients[(i, j)] = parse_poly(tm.group(2), gr.ring)
            pos = tm.end()
            first = False
    return MinorCertificate(rows, cols, coefficients)


def all_minor_certificates(gr):
    """Certificates for every (k+1) x (k+1) minor, rows <= cols."""
    indices = range(1, 2 * gr.k + 1)
    out = []
    for rows in itertools.combinations(indices, gr.k + 1):
        for cols in itertools.combinations(indices, gr.k + 1):
            if cols < rows:
                continue
            out.append(minor_certificate(gr, rows, cols))
    return out
