"""Phase-space model, invariants, brackets, and symbolic identities."""

import pytest

from momentq.model import (
    GramRing,
    PhaseRing,
    build_ideals,
    column_determinant,
    d_difference,
    gram_polynomial,
    gram_substitution,
    minor,
    minor_generators,
    moment_component,
    moment_components,
    on_shell,
    poisson_bracket,
    q_generator,
    q_generators,
    q_phase,
    sample_shell_points,
    so_determinant_generators,
    verify_bracket_table,
    verify_difference_identity,
    verify_localization_identity,
    verify_moment_closure,
    verify_norm_identity,
)


def test_phase_ring_layout():
    pr = PhaseRing(2, 3)
    names = pr.variable_names()
    assert len(names) == 12
    assert names[0] == "q[1,1]" and names[1] == "p[1,1]"
    assert pr.y(1, 2) == pr.q(1, 2)
    assert pr.y(2, 2) == pr.p(1, 2)
    assert pr.y(3, 1) == pr.q(2, 1)
    with pytest.raises(ValueError):
        PhaseRing(0, 1)


def test_moment_component_explicit():
    pr = PhaseRing(1, 2)
    J = moment_component(pr, 1, 2)
    expected = pr.q(1, 1) * pr.p(1, 2) - pr.q(1, 2) * pr.p(1, 1)
    assert J == expected
    assert moment_components(PhaseRing(2, 1)) == []
    with pytest.raises(IndexError):
        moment_component(pr, 2, 1)


def test_gram_polynomial_symmetry_and_truncation():
    pr = PhaseRing(2, 3)
    assert gram_polynomial(pr, 1, 3) == gram_polynomial(pr, 3, 1)
    full = gram_polynomial(pr, 1, 2)
    trunc = gram_polynomial(pr, 1, 2, dims=2)
    assert full - trunc == pr.y(1, 3) * pr.y(2, 3)


def test_gram_ring_symmetric_accessor():
    gr = GramRing(2)
    assert gr.x(3, 1) == gr.x(1, 3)
    assert gr.ring.nvars == 10  # upper triangle of a 4x4 symmetric matrix
    assert all(w == 2 for w in gr.ring.weights)


def test_q_generator_matches_substitution():
    # Q_{i,j} through the Gram substitution equals its phase-ring expansion
    for k, n in [(1, 2), (2, 2), (2, 3)]:
        pr = PhaseRing(k, n)
        gr = GramRing(k)
        sub = gram_substitution(gr, pr)
        for i in range(1, 2 * k + 1):
            for j in range(i + 1, 2 * k + 1):
                g = q_generator(gr, i, j)
                assert g.substitute(sub, pr.ring) == q_phase(pr, i, j)


def test_q_generator_count():
    gr = GramRing(3)
    assert len(q_generators(gr)) == 15  # C(6, 2)


def test_minor_transpose_dedup():
    gr = GramRing(2)
    minors = minor_generators(gr, 2)
    pairs = {(rows, cols) for rows, cols, _ in minors}
    for rows, cols in pairs:
        assert rows <= cols
    # C(4,2) = 6 row sets; 6*6 = 36 ordered pairs, 21 with rows <= cols
    assert len(minors) == 21
    # transposed minors agree since X is symmetric
    m1 = minor(gr, (1, 2), (3, 4))
    m2 = minor(gr, (3, 4), (1, 2))
    assert m1 == m2


def test_column_determinant_antisymmetry():
    pr = PhaseRing(2, 2)
    d12 = column_determinant(pr, (1, 2))
    J = moment_component(pr, 1, 2)
    # for k particles in R^2 the (q_1, p_1) determinant is the l=1 moment term
    assert d12 == pr.q(1, 1) * pr.p(1, 2) - pr.q(1, 2) * pr.p(1, 1)
    with pytest.raises(ValueError):
        column_determinant(pr, (1, 2, 3))


def test_so_determinant_generators_named():
    pr = PhaseRing(2, 2)
    gens = so_determinant_generators(pr)
    assert len(gens) == 6
    names = [name for name, _ in gens]
    assert names[0] == "det[1,2]"
    assert len(set(names)) == len(names)
    # n > 2k: no determinants
    assert so_determinant_generators(PhaseRing(1, 3)) == []


def test_poisson_bracket_canonical_relations():
    pr = PhaseRing(1, 2)
    q, p = pr.q(1, 1), pr.p(1, 1)
    assert poisson_bracket(q, p, pr) == pr.ring.one()
    assert poisson_bracket(p, q, pr) == -pr.ring.one()
    assert poisson_bracket(q, pr.q(1, 2), pr).is_zero()
    f, g = q * p, q + p
    anti = poisson_bracket(f, g, pr) + poisson_bracket(g, f, pr)
    assert anti.is_zero()


def test_poisson_bracket_jacobi_spot_check():
    pr = PhaseRing(1, 2)
    f = pr.q(1, 1) * pr.p(1, 2)
    g = pr.p(1, 1) * pr.p(1, 1)
    h = pr.q(1, 2) + pr.q(1, 1) * pr.q(1, 1)
    total = (
        poisson_bracket(f, poisson_bracket(g, h, pr), pr)
        + poisson_bracket(g, poisson_bracket(h, f, pr), pr)
        + poisson_bracket(h, poisson_bracket(f, g, pr), pr)
    )
    assert total.is_zero()


@pytest.mark.parametrize("k,n", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_bracket_tables(k, n):
    report = verify_bracket_table(k, n)
    assert report.ok, report.violations
    assert report.checked > 0


@pytest.mark.parametrize("k,n", [(1, 2), (2, 2), (1, 3), (2, 3)])
def test_moment_closure(k, n):
    assert verify_moment_closure(k, n)


@pytest.mark.parametrize("k,n", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2)])
def test_norm_identity(k, n):
    assert verify_norm_identity(k, n)


@pytest.mark.parametrize("k,n", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_difference_identity(k, n):
    assert verify_difference_identity(k, n)


def test_d_difference_consistency():
    d = d_difference(2, 2, 1, 3)
    pr = PhaseRing(2, 2)
    assert d == q_phase(pr, 1, 3, 2) - q_phase(pr, 1, 3, 1)
    with pytest.raises(ValueError):
        d_difference(2, 1, 1, 2)


@pytest.mark.parametrize("k,n", [(2, 3), (3, 3), (2, 4)])
def test_localization_identity(k, n):
    assert verify_localization_identity(k, n)


def test_shell_points_families():
    pr = PhaseRing(2, 2)
    for pt in sample_shell_points(2, 2, "rank", rank=1):
        assert on_shell(pr, pt.assignment) == pt.on_shell
    for pt in sample_shell_points(2, 2, "proportional", count=4, seed=3):
        assert pt.on_shell and on_shell(pr, pt.assignment)
    for pt in sample_shell_points(2, 2, "off-shell", count=4, seed=3):
        assert not pt.on_shell and not on_shell(pr, pt.assignment)
    with pytest.raises(ValueError):
        sample_shell_points(2, 1, "off-shell")
    with pytest.raises(ValueError):
        sample_shell_points(2, 2, "nonsense")


def test_q_vanishes_on_shell():
    # the Q generators vanish at every zero-momentum point
    k, n = 2, 2
    pr = PhaseRing(k, n)
    points = sample_shell_points(k, n, "proportional", count=5, seed=1)
    points += sample_shell_points(k, n, "rank")
    for pt in points:
        for i in range(1, 2 * k + 1):
            for j in range(i + 1, 2 * k + 1):
                assert q_phase(pr, i, j).evaluate(pt.assignment) == 0


def test_build_ideals_shapes():
    pr, gr, shell, quad = build_ideals(2, 2)
    assert shell.kind == "moment" and len(shell.polynomials) == 1
    assert quad.kind == "quadratic" and len(quad.polynomials) == 6
    assert gr.det_columns == ()

    pr, gr, shell, quad = build_ideals(2, 1)
    # n < k: the 2x2 minors join the Q generators
    assert len(quad.polynomials) == 6 + 21
    kinds = {lbl[0] for lbl in quad.labels}
    assert kinds == {"Q", "minor"}

    pr, gr, shell, quad = build_ideals(2, 2, group="SO")
    assert len(gr.det_columns) == 6
    assert "det[1,2]" in gr.ring.index
