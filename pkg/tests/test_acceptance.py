"""Acceptance gate: exact reproduction of the reference tables and identities.

Everything here is exact (zero tolerance): Hilbert series, basis sizes and
elements, Gorenstein pairs, Laurent coefficients, certificates, and the
property suites. The file is self-contained apart from the package.

Run order matters for wall clock only; expensive results are shared through
module-scoped fixtures. The full file is desk-scale (well under the
10-minute per-case caps) except the order benchmark, which is allowed up to
its 15-minute budget.
"""

import itertools
import random
from fractions import Fraction

import pytest

from momentq import orders
from momentq.groebner import IdealBasis, buchberger, groebner_basis, normal_form
from momentq.hilbert import (
    HilbertSeries,
    gorenstein_check,
    hilbert_series_quotient,
    laurent_at_one,
)
from momentq.model import (
    GramRing,
    PhaseRing,
    minor_generators,
    poisson_bracket,
    q_generator,
    q_generators,
)
from momentq.exterior import (
    build_q_wedge,
    column_blade,
    minor_certificate,
    sigma_case2,
    verify_certificate,
    wedge_mul,
)
from momentq.pipeline import (
    CaseSpec,
    benchmark_orders,
    compare_ideals,
    quadratic_ideal,
    run_elimination_workflow,
    verify_suite,
)
from momentq.poly import Polynomial, Rat, make_ring


def series_of(numerator, squares):
    """HilbertSeries N(t) / (1 - t^2)^squares from a {deg: coeff} dict."""
    return HilbertSeries.make(numerator, (2,) * squares, reduced=True)


# The reference table: case -> (numerator of the reduced series, number of
# (1 - t^2) denominator factors). Dimensions d and a-invariants follow.
SERIES_TABLE = {
    (1, 1, "O"): ({0: 1, 2: 1}, 2),
    (2, 1, "O"): ({0: 1, 2: 6, 4: 1}, 4),
    (2, 2, "O"): ({0: 1, 2: 4, 4: 4, 6: 1}, 6),
    (2, 2, "SO"): ({0: 1, 2: 9, 4: 9, 6: 1}, 6),
    (3, 1, "O"): ({0: 1, 2: 15, 4: 15, 6: 1}, 6),
    (3, 2, "O"): ({0: 1, 2: 11, 4: 51, 6: 51, 8: 11, 10: 1}, 10),
    (3, 2, "SO"): ({0: 1, 2: 25, 4: 100, 6: 100, 8: 25, 10: 1}, 10),
    (3, 3, "O"): ({0: 1, 2: 9, 4: 30, 6: 44, 8: 30, 10: 9, 12: 1}, 12),
    (4, 1, "O"): ({0: 1, 2: 28, 4: 70, 6: 28, 8: 1}, 8),
}

GORENSTEIN_PAIRS = {
    (1, 1, "O"): (2, 2),
    (2, 1, "O"): (4, 4),
    (2, 2, "O"): (6, 6),
    (2, 2, "SO"): (6, 6),
    (3, 1, "O"): (6, 6),
    (3, 2, "O"): (10, 10),
    (3, 2, "SO"): (10, 10),
    (3, 3, "O"): (12, 12),
    (4, 1, "O"): (8, 8),
}


@pytest.fixture(scope="module")
def quadratic_series():
    """Reduced Hilbert series of the quadratic ideal for the O cases."""
    out = {}
    for (k, n, group) in SERIES_TABLE:
        if group != "O":
            continue
        _, ideal = quadratic_ideal(CaseSpec(k, n))
        annotated = groebner_basis(ideal, orders.grevlex(ideal.ring))
        out[(k, n, group)] = {
            "series": hilbert_series_quotient(annotated),
            "groebner_size": len(annotated.groebner_basis),
        }
    return out


@pytest.fixture(scope="module")
def so_workflows():
    """Completed elimination workflows for the SO cases in the table."""
    out = {}
    for k, n in [(2, 2), (3, 2)]:
        wf = run_elimination_workflow(CaseSpec(k, n, group="SO"))
        assert wf.complete
        annotated = groebner_basis(
            wf.elimination, orders.grevlex(wf.elimination.ring)
        )
        out[(k, n, "SO")] = {
            "workflow": wf,
            "series": hilbert_series_quotient(annotated),
        }
    return out


@pytest.fixture(scope="module")
def equality_reports():
    """compare_ideals reports for the ideal-equality cases (criterion 7)."""
    out = {}
    for k, n in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)]:
        out[(k, n)] = compare_ideals(CaseSpec(k, n))
    return out


# -- criterion 1: the Hilbert series table, exactly --------------------------

@pytest.mark.parametrize("case", sorted(SERIES_TABLE))
def test_series_table(case, quadratic_series, so_workflows):
    numerator, squares = SERIES_TABLE[case]
    expected = series_of(numerator, squares)
    if case[2] == "O":
        got = quadratic_series[case]["series"]
    else:
        got = so_workflows[case]["series"]
    assert got.num_dict() == expected.num_dict()
    assert tuple(got.denominator_weights) == tuple(expected.denominator_weights)


def test_o_series_also_hold_for_elimination_side(equality_reports):
    # the R-side series recorded by compare_ideals match the table too
    for (k, n), report in equality_reports.items():
        numerator, squares = SERIES_TABLE[(k, n, "O")]
        expected = series_of(numerator, squares)
        assert report.hilbert_r["numerator"] == [
            [d, c] for d, c in sorted(numerator.items())
        ]
        assert report.hilbert_r["denominator_weights"] == [2] * squares


# -- criterion 2: basis sizes and the nine (2,2) elements --------------------

@pytest.mark.parametrize(
    "k,n,size", [(1, 1, 1), (2, 1, 20), (2, 2, 9), (3, 1, 105)]
)
def test_elimination_basis_sizes(k, n, size, equality_reports):
    assert equality_reports[(k, n)].elimination_size == size


def test_41_groebner_size(quadratic_series):
    assert quadratic_series[(4, 1, "O")]["groebner_size"] == 336


def test_32_so_lex_inner_generator_count():
    # the reference count of 267 generators comes from a lex-ordered
    # invariant block; grevlex inner reduces the same ideal to 226 elements
    spec = CaseSpec(3, 2, group="SO", order_name="block", time_budget=1800.0)
    wf = run_elimination_workflow(spec)
    assert wf.complete
    assert len(wf.elimination.generators) == 267


def test_22_elements_match_reference_list():
    # the displayed nine elements for (2,2), written as combinations of the
    # Q generators; the third is not tail-reduced (it differs from the
    # reduced basis element by 2*x34*Q34), so compare after inter-reduction
    gr = GramRing(2)
    x = gr.x

    def Q(i, j):
        return q_generator(gr, i, j)

    reference = [
        x(2, 4) * Q(2, 3) - x(2, 3) * Q(2, 4) + x(2, 2) * Q(3, 4),
        Q(3, 4),
        x(2, 4) * Q(1, 3) - x(2, 3) * Q(1, 4) + (x(1, 2) - x(3, 4)) * Q(3, 4),
        Q(2, 4),
        Q(2, 3),
        x(1, 4) * Q(1, 3) - x(1, 3) * Q(1, 4) + x(1, 1) * Q(3, 4),
        Q(1, 4),
        Q(1, 3),
        Q(1, 2) - Q(3, 4),
    ]
    wf = run_elimination_workflow(CaseSpec(2, 2))
    reduced = buchberger(reference, orders.grevlex(gr.ring))
    assert reduced.complete
    assert reduced.basis == wf.elimination.generators
    assert len(wf.elimination.generators) == 9


# -- criterion 3: Gorenstein functional equation with d = -a -----------------

@pytest.mark.parametrize("case", sorted(SERIES_TABLE))
def test_gorenstein_pairs(case, quadratic_series, so_workflows):
    if case[2] == "O":
        series = quadratic_series[case]["series"]
    else:
        series = so_workflows[case]["series"]
    sat, graded = gorenstein_check(series)
    assert sat and graded
    d, minus_a = GORENSTEIN_PAIRS[case]
    assert series.dimension == d
    assert -series.a_invariant == minus_a


# -- criterion 4: Laurent coefficients of the (2,2,O) series at t = 1 --------

def test_laurent_22(quadratic_series):
    series = quadratic_series[(2, 2, "O")]["series"]
    coeffs = laurent_at_one(series, 4)
    assert coeffs == [
        Fraction(5, 32),
        Fraction(0),
        Fraction(11, 128),
        Fraction(11, 128),
    ]


# -- criteria 5 and 6: the identity suite ------------------------------------

def test_identity_suite_full_grid():
    summary = verify_suite(k_range=(1, 2, 3), n_range=(1, 2, 3, 4))
    assert summary["failures"] == []
    assert summary["passed"] == summary["checked"]


def test_identity_suite_negative_control():
    summary = verify_suite(k_range=(2,), n_range=(2,), corrupt=True)
    assert summary["failures"]


def test_minor_certificates_sampled_k3():
    gr = GramRing(3)
    rng = random.Random(2024)
    indices = list(range(1, 7))
    seen = set()
    while len(seen) < 20:
        rows = tuple(sorted(rng.sample(indices, 4)))
        cols = tuple(sorted(rng.sample(indices, 4)))
        seen.add((rows, cols))
    for rows, cols in sorted(seen):
        cert = minor_certificate(gr, rows, cols)
        assert verify_certificate(cert, gr)


@pytest.mark.parametrize("k", [1, 3])
def test_q_wedge_sigma_identity(k):
    # Q^[(k+1)/2] ^ sigma recovers the full column blade on e_{1..k+1}
    gr = GramRing(k)
    sigma = sigma_case2(gr, k)
    lhs = wedge_mul(build_q_wedge(gr), sigma)
    target = tuple(range(1, k + 2))
    rhs = column_blade(gr, target)
    assert lhs.terms.get(target) == rhs.terms.get(target)


# -- criterion 7: ideal equality for the completed cases ---------------------

@pytest.mark.parametrize("k,n", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_ideal_equality(k, n, equality_reports):
    report = equality_reports[(k, n)]
    assert report.status == "complete"
    assert report.verdict == "equal"


# -- criterion 8: the order benchmark on (2,4) -------------------------------

def test_order_benchmark_24():
    spec = CaseSpec(2, 4)
    rows = benchmark_orders(spec, ["paper", "lex"], time_budget=900.0)
    by_order = {r["order"]: r for r in rows}
    paper, lex = by_order["paper"], by_order["lex"]
    assert paper["complete"]
    assert paper["consistent"]
    # the lex baseline either finishes at least 10x slower or hits the
    # 15-minute budget; capped runs are excluded from the same-result check
    assert lex["elapsed"] >= 10 * paper["elapsed"], (
        paper["elapsed"],
        lex["elapsed"],
    )
    if lex["complete"]:
        assert lex["consistent"]


# -- criterion 9: property suites --------------------------------------------

def _random_poly(ring, rng, max_terms=6, max_exp=3):
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        m = tuple(rng.randrange(max_exp + 1) for _ in range(ring.nvars))
        c = rng.randrange(-6, 7)
        if c:
            terms[m] = terms.get(m, Rat(0)) + Rat(c)
    return Polynomial(ring, {m: c for m, c in terms.items() if c})


def test_division_reconstruction_500():
    rng = random.Random(500)
    rings = [
        make_ring([("x", 1), ("y", 1)]),
        make_ring([("x", 1), ("y", 1), ("z", 1)]),
        make_ring([("x", 1), ("y", 2), ("z", 1)]),
    ]
    checked = 0
    while checked < 500:
        ring = rng.choice(rings)
        order = rng.choice(
            [orders.lex(ring), orders.grlex(ring), orders.grevlex(ring)]
        )
        f = _random_poly(ring, rng)
        basis = [
            g
            for g in (_random_poly(ring, rng) for _ in range(rng.randrange(1, 4)))
            if not g.is_zero()
        ]
        if not basis:
            continue
        r, quots = normal_form(f, basis, order, with_quotients=True)
        total = r
        for q, g in zip(quots, basis):
            total = total + q * g
        assert total == f
        # remainder is irreducible
        lms = [max(g.terms, key=order.key) for g in basis]
        for m in r.terms:
            for lm in lms:
                assert not all(a <= b for a, b in zip(lm, m))
        checked += 1


def test_permutation_invariance_50():
    rng = random.Random(50)
    ring = make_ring([("x", 1), ("y", 1), ("z", 1)])
    checked = 0
    while checked < 50:
        gens = [
            g
            for g in (_random_poly(ring, rng, max_terms=4, max_exp=2)
                      for _ in range(rng.randrange(2, 5)))
            if not g.is_zero()
        ]
        if len(gens) < 2:
            continue
        order = rng.choice([orders.grevlex(ring), orders.grlex(ring)])
        reference = buchberger(gens, order, max_pairs=20000)
        if not reference.complete:
            continue
        shuffled = list(gens)
        rng.shuffle(shuffled)
        scaled = [Rat(rng.choice([1, 2, -1, 3])) * g for g in shuffled]
        again = buchberger(scaled, order, max_pairs=20000)
        assert again.complete
        assert again.basis == reference.basis
        checked += 1


def _brute_counts(ideal, up_to):
    ring = ideal.ring
    counts = []
    for d in range(up_to + 1):
        monos = [
            m
            for m in itertools.product(
                *(range(d // w + 1) for w in ring.weights)
            )
            if sum(e * w for e, w in zip(m, ring.weights)) == d
        ]
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for g in ideal.generators:
            gdeg = g.degree()
            if gdeg > d:
                continue
            shifts = [
                m
                for m in itertools.product(
                    *(range((d - gdeg) // w + 1) for w in ring.weights)
                )
                if sum(e * w for e, w in zip(m, ring.weights)) == d - gdeg
            ]
            for s in shifts:
                row = [Fraction(0)] * len(monos)
                for m, c in g.terms.items():
                    row[index[tuple(a + b for a, b in zip(m, s))]] = Fraction(c)
                rows.append(row)
        counts.append(len(monos) - _rank(rows))
    return counts


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next(
            (i for i in range(rank, len(rows)) if rows[i][col]), None
        )
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = 1 / pr[col]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] * inv
            if f:
                ri = rows[i]
                for j in range(col, ncols):
                    ri[j] -= f * pr[j]
        rank += 1
    return rank


def _series_counts(series, up_to):
    inv = [Fraction(0)] * (up_to + 1)
    inv[0] = Fraction(1)
    for w in series.denominator_weights:
        for d in range(w, up_to + 1):
            inv[d] += inv[d - w]
    counts = [Fraction(0)] * (up_to + 1)
    for d0, c in series.numerator:
        for d in range(d0, up_to + 1):
            counts[d] += c * inv[d - d0]
    return [int(c) for c in counts]


def test_hilbert_brute_force_20_ideals():
    rng = random.Random(8)
    built = 0
    while built < 20:
        nv = rng.choice([2, 3])
        weights = [rng.choice([1, 1, 2]) for _ in range(nv)]
        ring = make_ring([(f"v{i}", w) for i, w in enumerate(weights)])

        def monomial(deg):
            while True:
                m = tuple(rng.randrange(deg + 1) for _ in range(nv))
                w = sum(e * wi for e, wi in zip(m, weights))
                if 0 < w <= deg:
                    return m

        gens = []
        binomial = built % 2 == 1  # alternate monomial and binomial ideals
        for _ in range(rng.randrange(1, 4)):
            m = monomial(4)
            if binomial:
                deg = sum(e * w for e, w in zip(m, weights))
                # a second monomial of the same weighted degree, if any
                others = [
                    mm
                    for mm in itertools.product(
                        *(range(deg // w + 1) for w in weights)
                    )
                    if sum(e * w for e, w in zip(mm, weights)) == deg
                    and mm != m
                ]
                if others:
                    other = rng.choice(others)
                    gens.append(
                        Polynomial(ring, {m: Rat(1), other: Rat(-rng.choice([1, 2]))})
                    )
                    continue
            gens.append(Polynomial(ring, {m: Rat(1)}))
        ideal = IdealBasis(ring, gens)
        series = hilbert_series_quotient(ideal)
        assert _series_counts(series, 8) == _brute_counts(ideal, 8)
        built += 1


def test_jacobi_identity_100():
    rng = random.Random(100)
    pr = PhaseRing(2, 2)
    ring = pr.ring
    for _ in range(100):
        f, g, h = (
            _random_poly(ring, rng, max_terms=3, max_exp=2) for _ in range(3)
        )
        total = (
            poisson_bracket(f, poisson_bracket(g, h, pr), pr)
            + poisson_bracket(g, poisson_bracket(h, f, pr), pr)
            + poisson_bracket(h, poisson_bracket(f, g, pr), pr)
        )
        assert total.is_zero()
