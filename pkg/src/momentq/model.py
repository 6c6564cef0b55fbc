"""Phase-space and invariant-ring model for k particles in R^n.

Builds the angular-momentum components, the Gram invariants x[i,j], the
quadratic generators Q[i,j], minors and SO determinants, and verifies the
symbolic identities relating them (bracket tables, norm and difference
identities, localization identities).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import orders
from .groebner import IdealBasis, groebner_basis, normal_form
from .poly import Polynomial, Rat, Ring, make_ring


def qvar(ell, alpha):
    return f"q[{ell},{alpha}]"


def pvar(ell, alpha):
    return f"p[{ell},{alpha}]"


def xvar(i, j):
    i, j = min(i, j), max(i, j)
    return f"x[{i},{j}]"


def detvar(cols):
    return "det[" + ",".join(str(c) for c in cols) + "]"


class PhaseRing:
    """Ring of the 2kn phase coordinates, ordered q11, p11, q12, p12, ...

    The variable sequence is the priority that makes elimination fast, so it
    is the ring order as well.  Columns y_1..y_{2k} interleave positions and
    momenta: y_{2l-1} = q_l, y_{2l} = p_l.
    """

    def __init__(self, k, n):
        if k < 1 or n < 1:
            raise ValueError("k and n must be positive")
        self.k = k
        self.n = n
        names = []
        for ell in range(1, k + 1):
            for alpha in range(1, n + 1):
                names.append((qvar(ell, alpha), 1))
                names.append((pvar(ell, alpha), 1))
        self.ring = make_ring(names)

    def q(self, ell, alpha):
        return self.ring.var(qvar(ell, alpha))

    def p(self, ell, alpha):
        return self.ring.var(pvar(ell, alpha))

    def y(self, i, alpha):
        """Column accessor: y_{2l-1} = q_l, y_{2l} = p_l."""
        if i % 2:
            return self.q((i + 1) // 2, alpha)
        return self.p(i // 2, alpha)

    def variable_names(self):
        return list(self.ring.names)


class GramRing:
    """Ring of the Gram invariants x[i,j], 1 <= i <= j <= 2k, weight 2.

    With `so_weights` given (one per determinant variable), weight-n
    determinant variables are appended for the SO_n invariant ring.
    """

    def __init__(self, k, det_columns=None, det_weight=None, x_sequence=None):
        self.k = k
        pairs = [(i, j) for i in range(1, 2 * k + 1) for j in range(i, 2 * k + 1)]
        if x_sequence is not None:
            pairs = list(x_sequence)
        names = [(xvar(i, j), 2) for i, j in pairs]
        self.det_columns = tuple(tuple(c) for c in det_columns or ())
        if self.det_columns:
            if det_weight is None:
                raise ValueError("determinant variables need a weight")
            names += [(detvar(c), det_weight) for c in self.det_columns]
        self.ring = make_ring(names)

    def x(self, i, j):
        """Symmetric accessor; folds (j, i) onto (i, j)."""
        if not (1 <= i <= 2 * self.k and 1 <= j <= 2 * self.k):
            raise IndexError(f"Gram index ({i},{j}) out of range")
        return self.ring.var(xvar(i, j))


def moment_component(pr, alpha, beta):
    """J_{alpha,beta} = sum_l q_{l,alpha} p_{l,beta} - q_{l,beta} p_{l,alpha}."""
    if not (1 <= alpha < beta <= pr.n):
        raise IndexError(f"moment component ({alpha},{beta}) out of range")
    total = pr.ring.zero()
    for ell in range(1, pr.k + 1):
        total = total + pr.q(ell, alpha) * pr.p(ell, beta)
        total = total - pr.q(ell, beta) * pr.p(ell, alpha)
    return total


def moment_components(pr):
    return [
        moment_component(pr, a, b)
        for a in range(1, pr.n + 1)
        for b in range(a + 1, pr.n + 1)
    ]


def gram_polynomial(pr, i, j, dims=None):
    """<y_i, y_j> in the phase ring; `dims` truncates the coordinate sum."""
    if not (1 <= i <= 2 * pr.k and 1 <= j <= 2 * pr.k):
        raise IndexError(f"Gram index ({i},{j}) out of range")
    dims = pr.n if dims is None else dims
    total = pr.ring.zero()
    for alpha in range(1, dims + 1):
        total = total + pr.y(i, alpha) * pr.y(j, alpha)
    return total


def gram_substitution(gr, pr):
    """Mapping of Gram (and determinant) variables to phase-ring polynomials."""
    mapping = {}
    for i in range(1, 2 * gr.k + 1):
        for j in range(i, 2 * gr.k + 1):
            name = xvar(i, j)
            if name in gr.ring.index:
                mapping[name] = gram_polynomial(pr, i, j)
    for cols in gr.det_columns:
        mapping[detvar(cols)] = column_determinant(pr, cols)
    return mapping


def q_generator(gr, i, j, dims_pairs=None):
    """Q_{i,j} = sum_l det of the 2x2 block of X on rows i,j, columns 2l-1,2l."""
    if not (1 <= i < j <= 2 * gr.k):
        raise IndexError(f"Q index ({i},{j}) out of range")
    k = gr.k if dims_pairs is None else dims_pairs
    total = gr.ring.zero()
    for ell in range(1, k + 1):
        a, b = 2 * ell - 1, 2 * ell
        total = total + gr.x(i, a) * gr.x(j, b) - gr.x(i, b) * gr.x(j, a)
    return total


def q_generators(gr):
    return [
        q_generator(gr, i, j)
        for i in range(1, 2 * gr.k + 1)
        for j in range(i + 1, 2 * gr.k + 1)
    ]


def q_phase(pr, i, j, n=None):
    """Q_{k,n,i,j} pushed into the phase ring through the Gram substitution."""
    n = pr.n if n is None else n
    total = pr.ring.zero()
    for ell in range(1, pr.k + 1):
        a, b = 2 * ell - 1, 2 * ell
        total = total + (
            gram_polynomial(pr, i, a, n) * gram_polynomial(pr, j, b, n)
            - gram_polynomial(pr, i, b, n) * gram_polynomial(pr, j, a, n)
        )
    return total


def d_difference(k, n, i, j):
    """The difference Q_{k,n,i,j} - Q_{k,n-1,i,j} in the phase ring of (k, n)."""
    if n < 2:
        raise ValueError("the difference needs n >= 2")
    pr = PhaseRing(k, n)
    return q_phase(pr, i, j, n) - q_phase(pr, i, j, n - 1)


def minor(gr, rows, cols):
    """Determinant of the submatrix of X on the given rows and columns."""
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs equally many rows and columns")

    def det(rs, cs):
        if not rs:
            return gr.ring.one()
        r0 = rs[0]
        total = gr.ring.zero()
        for pos, c in enumerate(cs):
            sub = det(rs[1:], cs[:pos] + cs[pos + 1:])
            term = gr.x(r0, c) * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return det(rows, cols)


def minor_generators(gr, r):
    """All r x r minors of X, deduplicated across transposed row/column sets.

    Returned as (rows, cols, polynomial) with rows <= cols lexicographically.
    """
    if not (1 <= r <= 2 * gr.k):
        if r == 2 * gr.k + 1 or r > 2 * gr.k:
            return []
        raise ValueError(f"minor size {r} out of range")
    out = []
    indices = list(range(1, 2 * gr.k + 1))
    for rows in itertools.combinations(indices, r):
        for cols in itertools.combinations(indices, r):
            if cols < rows:
                continue  # transpose-equal minor already emitted
            out.append((rows, cols, minor(gr, rows, cols)))
    return out


def column_determinant(pr, cols):
    """det of the n x n matrix whose columns are the chosen y-vectors."""
    n = pr.n
    if len(cols) != n:
        raise ValueError("need exactly n columns")

    def det(alphas, cs):
        if not cs:
            return pr.ring.one()
        c0 = cs[0]
        total = pr.ring.zero()
        for pos, alpha in enumerate(alphas):
            sub = det(alphas[:pos] + alphas[pos + 1:], cs[1:])
            term = pr.y(c0, alpha) * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return det(list(range(1, n + 1)), list(cols))


def so_determinant_generators(pr):
    """(variable name, determinant polynomial) pairs for the SO_n invariants."""
    if pr.n > 2 * pr.k:
        return []
    out = []
    for cols in itertools.combinations(range(1, 2 * pr.k + 1), pr.n):
        out.append((detvar(cols), column_determinant(pr, cols)))
    return out


# -- Poisson structure -------------------------------------------------------

def poisson_bracket(f, g, pr):
    """{f, g} with {q_{l,a}, p_{l,a}} = 1 and all other coordinate brackets 0."""
    if f.ring != pr.ring or g.ring != pr.ring:
        raise ValueError("arguments must live in the phase ring")
    total = pr.ring.zero()
    for ell in range(1, pr.k + 1):
        for alpha in range(1, pr.n + 1):
            qn, pn = qvar(ell, alpha), pvar(ell, alpha)
            total = total + f.diff(qn) * g.diff(pn) - f.diff(pn) * g.diff(qn)
    return total


def _pair_sign(i, u):
    """Bracket of coordinate columns: {y_i, y_u} = sign, nonzero only on a pair."""
    if u == i + 1 and i % 2 == 1:
        return 1
    if i == u + 1 and u % 2 == 1:
        return -1
    return 0


@dataclass
class BracketReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def verify_bracket_table(k, n):
    """Check the invariant and moment-map commutation tables exactly.

    The Gram table is {x_{i,j}, x_{u,v}} = e(i,u) x_{j,v} + e(i,v) x_{j,u}
    + e(j,u) x_{i,v} + e(j,v) x_{i,u} with e the coordinate pairing sign;
    the moment table is {J_ab, J_ce} = d_ac J_be + d_be J_ac - d_bc J_ae
    - d_ae J_bc (indices extended antisymmetrically).
    """
    pr = PhaseRing(k, n)
    report = BracketReport()
    gram = {}
    for i in range(1, 2 * k + 1):
        for j in range(i, 2 * k + 1):
            gram[(i, j)] = gram_polynomial(pr, i, j)

    def X(i, j):
        return gram[(min(i, j), max(i, j))]

    pairs = [(i, j) for i in range(1, 2 * k + 1) for j in range(i, 2 * k + 1)]
    for (i, j) in pairs:
        for (u, v) in pairs:
            lhs = poisson_bracket(X(i, j), X(u, v), pr)
            rhs = (
                _pair_sign(i, u) * X(j, v)
                + _pair_sign(i, v) * X(j, u)
                + _pair_sign(j, u) * X(i, v)
                + _pair_sign(j, v) * X(i, u)
            )
            report.checked += 1
            if lhs != rhs:
                report.violations.append(("gram", (i, j), (u, v)))

    if n >= 2:
        J = {}
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                J[(a, b)] = moment_component(pr, a, b)

        def Jhat(a, b):
            if a == b:
                return pr.ring.zero()
            if a < b:
                return J[(a, b)]
            return -J[(b, a)]

        def delta(a, b):
            return 1 if a == b else 0

        idx = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
        for (a, b) in idx:
            for (c, e) in idx:
                lhs = poisson_bracket(J[(a, b)], J[(c, e)], pr)
                rhs = (
                    delta(a, c) * Jhat(b, e)
                    + delta(b, e) * Jhat(a, c)
                    - delta(b, c) * Jhat(a, e)
                    - delta(a, e) * Jhat(b, c)
                )
                report.checked += 1
                if lhs != rhs:
                    report.violations.append(("moment", (a, b), (c, e)))
    return report


def verify_moment_closure(k, n):
    """{J, J} lies in the moment ideal: each bracket has normal form zero."""
    pr = PhaseRing(k, n)
    comps = moment_components(pr)
    if not comps:
        return True
    order = orders.grevlex(pr.ring)
    ideal = groebner_basis(IdealBasis(pr.ring, comps), order)
    for f, g in itertools.combinations(comps, 2):
        br = poisson_bracket(f, g, pr)
        if not normal_form(br, ideal.groebner_basis, order).is_zero():
            return False
    return True


# -- symbolic identities -----------------------------------------------------

def verify_norm_identity(k, n):
    """sum_l Q_{2l-1,2l} (through Gram) equals the norm squared of the moment map."""
    pr = PhaseRing(k, n)
    lhs = pr.ring.zero()
    for ell in range(1, k + 1):
        lhs = lhs + q_phase(pr, 2 * ell - 1, 2 * ell)
    rhs = pr.ring.zero()
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            J = moment_component(pr, a, b)
            rhs = rhs + J * J
    return lhs == rhs


def verify_difference_identity(k, n):
    """Difference identity and its summed corollary for all index pairs."""
    if n < 2:
        raise ValueError("needs n >= 2")
    pr = PhaseRing(k, n)
    ok = True
    for i in range(1, 2 * k + 1):
        for j in range(i + 1, 2 * k + 1):
            lhs = q_phase(pr, i, j, n) - q_phase(pr, i, j, n - 1)
            rhs = pr.ring.zero()
            for alpha in range(1, n):
                factor = pr.y(i, alpha) * pr.y(j, n) - pr.y(i, n) * pr.y(j, alpha)
                rhs = rhs + factor * moment_component(pr, alpha, n)
            if lhs != rhs:
                ok = False
    # summed form: sum_l D_{2l-1,2l} = sum_alpha J_{alpha,n}^2
    lhs = pr.ring.zero()
    for ell in range(1, k + 1):
        lhs = lhs + q_phase(pr, 2 * ell - 1, 2 * ell, n) - q_phase(
            pr, 2 * ell - 1, 2 * ell, n - 1
        )
    rhs = pr.ring.zero()
    for alpha in range(1, n):
        J = moment_component(pr, alpha, n)
        rhs = rhs + J * J
    return ok and lhs == rhs


def _localized_moment(pr, alpha, beta):
    """q11 * J_{alpha,beta} after substituting the solved p_{1,gamma}.

    Solving J_{1,gamma} = 0 for p_{1,gamma} introduces a single q11
    denominator; the returned polynomial is the numerator over q11.
    """
    k, ring = pr.k, pr.ring
    q11 = pr.q(1, 1)

    def p1_substitute(gamma):
        # q11 * p_{1,gamma} image
        total = pr.q(1, gamma) * pr.p(1, 1)
        for ell in range(2, k + 1):
            total = total + pr.q(ell, gamma) * pr.p(ell, 1)
            total = total - pr.q(ell, 1) * pr.p(ell, gamma)
        return total

    total = ring.zero()
    # J_{alpha,beta} = sum_l q_{l,a} p_{l,b} - q_{l,b} p_{l,a}; the l = 1
    # terms pick up the substitution
    total = total + pr.q(1, alpha) * p1_substitute(beta)
    total = total - pr.q(1, beta) * p1_substitute(alpha)
    for ell in range(2, k + 1):
        total = total + q11 * (
            pr.q(ell, alpha) * pr.p(ell, beta) - pr.q(ell, beta) * pr.p(ell, alpha)
        )
    return total


def verify_localization_identity(k, n):
    """The localized moment components match the product form exactly.

    Clears all q_{1,.} denominators before comparing; vacuously true when no
    pair 2 <= alpha < beta <= n exists.
    """
    if k < 2:
        raise ValueError("needs k >= 2")
    pr = PhaseRing(k, n)
    q11 = pr.q(1, 1)
    ok = True
    for alpha in range(2, n + 1):
        for beta in range(alpha + 1, n + 1):
            qa, qb = pr.q(1, alpha), pr.q(1, beta)  # q_{1,alpha}, q_{1,beta}
            # the substitution puts a single q11 under J_ab, so q11^2 J_ab|sub
            # clears; both sides below carry that same factor
            lhs = q11 * _localized_moment(pr, alpha, beta)
            rhs = pr.ring.zero()
            for ell in range(2, k + 1):
                fa = pr.q(ell, alpha) * q11 - pr.q(ell, 1) * qa
                fb = pr.p(ell, beta) * q11 - pr.p(ell, 1) * qb
                ga = pr.q(ell, beta) * q11 - pr.q(ell, 1) * qb
                gb = pr.p(ell, alpha) * q11 - pr.p(ell, 1) * qa
                rhs = rhs + fa * fb - ga * gb
            if lhs != rhs:
                ok = False
    return ok


# -- shell points ------------------------------------------------------------

@dataclass
class ShellPoint:
    assignment: dict
    on_shell: bool
    witness_rank: int = 0


def _zero_assignment(pr):
    return {name: 0 for name in pr.ring.names}


def sample_shell_points(k, n, family, rank=None, count=5, seed=0):
    """Exact sample points with known shell membership.

    Families: "rank" (q_l = p_l = e_l up to `rank`), "proportional"
    (p_l = c_l q_l), "off-shell" (random small integers, rejected if the
    moment map happens to vanish; needs n >= 2).
    """
    pr = PhaseRing(k, n)
    points = []
    if family == "rank":
        r = min(k, n) if rank is None else rank
        if r > min(k, n):
            raise ValueError("rank exceeds min(k, n)")
        a = _zero_assignment(pr)
        for ell in range(1, r + 1):
            a[qvar(ell, ell)] = 1
            a[pvar(ell, ell)] = 1
        points.append(ShellPoint(a, True, r))
    elif family == "proportional":
        rng = random.Random(seed)
        for _ in range(count):
            a = _zero_assignment(pr)
            for ell in range(1, k + 1):
                c = Rat(rng.randint(-3, 3))
                coords = [rng.randint(-3, 3) for _ in range(n)]
                for alpha in range(1, n + 1):
                    a[qvar(ell, alpha)] = coords[alpha - 1]
                    a[pvar(ell, alpha)] = c * coords[alpha - 1]
            points.append(ShellPoint(a, True))
    elif family == "off-shell":
        if n < 2:
            raise ValueError("no off-shell points exist when n = 1")
        rng = random.Random(seed)
        comps = moment_components(pr)
        while len(points) < count:
            a = {name: rng.randint(-3, 3) for name in pr.ring.names}
            if all(c.evaluate(a) == 0 for c in comps):
                continue
            points.append(ShellPoint(a, False))
    else:
        raise ValueError(f"unknown family {family!r}")
    return points


def on_shell(pr, assignment):
    """Does the moment map vanish at the point."""
    return all(c.evaluate(assignment) == 0 for c in moment_components(pr))


# -- generator sets ----------------------------------------------------------

@dataclass
class GeneratorSet:
    kind: str
    k: int
    n: int
    polynomials: list
    labels: list = None


def build_ideals(k, n, group="O"):
    """(moment ideal in the phase ring, quadratic ideal in the Gram ring).

    The quadratic ideal carries the Q generators plus, when n < k, all
    (n+1) x (n+1) minors.  SO selection extends the Gram ring with
    determinant variables; the generators themselves are unchanged.
    """
    pr = PhaseRing(k, n)
    shell = GeneratorSet("moment", k, n, moment_components(pr))
    det_columns = None
    if group == "SO":
        if n > 2 * k:
            det_columns = []
        else:
            det_columns = list(itertools.combinations(range(1, 2 * k + 1), n))
    gr = GramRing(k, det_columns=det_columns, det_weight=n if det_columns else None)
    polys = q_generators(gr)
    labels = [
        ("Q", i, j)
        for i in range(1, 2 * k + 1)
        for j in range(i + 1, 2 * k + 1)
    ]
    if n < k:
        for rows, cols, m in minor_generators(gr, n + 1):
            polys.append(m)
            labels.append(("minor", rows, cols))
    quadratic = GeneratorSet("quadratic", k, n, polys, labels)
    return pr, gr, shell, quadratic
