"""Buchberger's algorithm, multivariate division, and elimination ideals.

All arithmetic is exact; outputs are deterministic for a fixed generator
sequence and order.  Reduced bases are auto-reduced, monic, and sorted by
leading monomial, so they are unique for the ideal and order.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from .poly import Polynomial, Ring, RingError, RAT_ZERO, RAT_ONE


class ZeroPolynomialError(ValueError):
    """An operation that needs a leading term was handed the zero polynomial."""


@dataclass
class IdealBasis:
    """A finite generating set, optionally annotated with a Groebner basis."""

    ring: Ring
    generators: list
    groebner_order: object = None
    groebner_basis: list = None
    reduced: bool = False

    def annotated(self):
        return self.groebner_basis is not None

    def with_groebner(self, order, basis, reduced=True):
        return IdealBasis(self.ring, self.generators, order, basis, reduced)


@dataclass
class GroebnerResult:
    basis: list
    complete: bool
    pairs_processed: int = 0
    zero_reductions: int = 0
    elapsed: float = 0.0


class ResourceCap(Exception):
    """Raised internally when a cap is hit; carries the partial basis."""

    def __init__(self, partial, pairs_processed):
        super().__init__("resource cap exceeded")
        self.partial = partial
        self.pairs_processed = pairs_processed


def _key_cache(order):
    cache = {}
    okey = order.key

    def key(m):
        k = cache.get(m)
        if k is None:
            k = okey(m)
            cache[m] = k
        return k

    return key


def _leading(terms, key):
    m = max(terms, key=key)
    return m, terms[m]


def _divides(a, b):
    # does monomial a divide monomial b
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _mask(m):
    """Support bitmask of an exponent tuple."""
    out = 0
    bit = 1
    for e in m:
        if e:
            out |= bit
        bit <<= 1
    return out


def _entry(terms, key, wdeg):
    """Reducer record (lm, lc, terms, support mask, weighted degree)."""
    lm, lc = _leading(terms, key)
    return (lm, lc, terms, _mask(lm), wdeg(lm))


class _DeadlineHit(Exception):
    """Internal: a single reduction overran the wall-clock budget."""


def _reduce_terms(fterms, G, key, wdeg, quotients=None, deadline=None):
    """Full normal form of a term dict modulo reducer records from _entry."""
    work = dict(fterms)
    remainder = {}
    steps = 0
    while work:
        steps += 1
        if deadline is not None and steps % 512 == 0:
            if time.monotonic() > deadline:
                raise _DeadlineHit
        m = max(work, key=key)
        c = work.pop(m)
        mmask = _mask(m)
        mdeg = wdeg(m)
        hit = None
        for gi, (lm, lc, gterms, gmask, gdeg) in enumerate(G):
            if gdeg > mdeg or gmask & ~mmask:
                continue
            ok = True
            for x, y in zip(lm, m):
                if x > y:
                    ok = False
                    break
            if ok:
                hit = gi
                break
        if hit is None:
            remainder[m] = c
            continue
        lm, lc, gterms = G[hit][:3]
        shift = tuple(x - y for x, y in zip(m, lm))
        factor = c / lc
        for mg, cg in gterms.items():
            if mg is lm or mg == lm:
                continue
            mm = tuple(x + y for x, y in zip(mg, shift))
            nc = work.get(mm, RAT_ZERO) - factor * cg
            if nc:
                work[mm] = nc
            else:
                work.pop(mm, None)
        if quotients is not None:
            qd = quotients[hit]
            qd[shift] = qd.get(shift, RAT_ZERO) + factor
    return remainder


def normal_form(f, basis, order, with_quotients=False):
    """Remainder of f on division by the basis sequence under `order`.

    With `with_quotients`, also returns the list of quotient polynomials q_i
    with f = sum(q_i * g_i) + r.
    """
    basis = list(basis)
    for g in basis:
        if g.is_zero():
            raise ZeroPolynomialError("zero polynomial in division basis")
        if g.ring != f.ring:
            raise RingError("division basis in a different ring")
    key = _key_cache(order)
    wdeg = f.ring.wdeg
    G = [_entry(g.terms, key, wdeg) for g in basis]
    quotients = [{} for _ in basis] if with_quotients else None
    r = Polynomial(f.ring, _reduce_terms(f.terms, G, key, wdeg, quotients))
    if with_quotients:
        return r, [Polynomial(f.ring, q) for q in quotients]
    return r


def s_polynomial(f, g, order):
    """S(f, g) = (lcm/LT(f)) f - (lcm/LT(g)) g."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomialError("s_polynomial of a zero polynomial")
    f._check_ring(g)
    key = _key_cache(order)
    mf, cf = _leading(f.terms, key)
    mg, cg = _leading(g.terms, key)
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    sf = tuple(a - b for a, b in zip(lcm, mf))
    sg = tuple(a - b for a, b in zip(lcm, mg))
    terms = {}
    for m, c in f.terms.items():
        mm = tuple(a + b for a, b in zip(m, sf))
        terms[mm] = c / cf
    for m, c in g.terms.items():
        mm = tuple(a + b for a, b in zip(m, sg))
        nc = terms.get(mm, RAT_ZERO) - c / cg
        if nc:
            terms[mm] = nc
        else:
            terms.pop(mm, None)
    return Polynomial(f.ring, terms)


def _monic(terms, key):
    lm, lc = _leading(terms, key)
    if lc == RAT_ONE:
        return terms
    return {m: c / lc for m, c in terms.items()}


def _update_pairs(pair_map, heap, lts, new_index, key, wdeg, heap_key):
    """Gebauer-Moeller pair update; `lts` includes the new leading term.

    `heap_key` maps an lcm monomial to its queue priority; see buchberger's
    `selection` argument for the two strategies.
    """
    t = new_index
    lt_t = lts[t]
    lcm_with = [
        tuple(max(a, b) for a, b in zip(lts[i], lt_t)) for i in range(t)
    ]

    # among the new pairs keep only minimal lcms, one representative each
    candidates = sorted(range(t), key=lambda i: (key(lcm_with[i]), i))
    kept = []
    kept_lcms = set()
    for i in candidates:
        li = lcm_with[i]
        if li in kept_lcms:
            continue
        if any(_divides(lcm_with[j], li) for j in kept):
            continue
        kept.append(i)
        kept_lcms.add(li)

    # criterion B on old pairs: drop (i, j) if lt_t divides lcm(i, j) strictly
    for (i, j), lij in list(pair_map.items()):
        if (
            _divides(lt_t, lij)
            and lcm_with[i] != lij
            and lcm_with[j] != lij
        ):
            del pair_map[(i, j)]

    # Buchberger's first criterion: coprime leading terms reduce to zero
    for i in kept:
        li = lcm_with[i]
        if li == tuple(a + b for a, b in zip(lts[i], lt_t)):
            continue
        pair_map[(i, t)] = li
        heapq.heappush(heap, (heap_key(li), i, t))


def buchberger(
    gens,
    order,
    max_pairs=None,
    max_basis=None,
    deadline=None,
    raise_on_cap=False,
    selection="degree",
):
    """Reduced Groebner basis of the given generators under `order`.

    Returns a GroebnerResult; `complete` is False when a resource cap was
    hit, in which case `basis` holds the (inter-reduced) partial basis.

    `selection` picks the S-pair strategy: "degree" (the default) processes
    pairs by weighted degree of the lcm, the standard strategy for the
    homogeneous ideals this package works with; "order" selects by the
    monomial order alone, the classical normal strategy of general-purpose
    systems, kept for benchmarking order sensitivity.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerResult([], True)
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingError("generators in different rings")
    key = _key_cache(order)
    wdeg = ring.wdeg
    if selection == "degree":
        heap_key = lambda m: (wdeg(m), key(m))
    elif selection == "order":
        heap_key = key
    else:
        raise ValueError(f"unknown selection strategy {selection!r}")
    t0 = time.monotonic()

    basis_terms = []  # list of term dicts, monic
    lts = []  # leading monomials
    reducers = []  # _entry records consumed by _reduce_terms
    pair_map = {}  # (i, j) -> lcm, the alive pairs
    heap = []  # ((wdeg, key) of lcm, i, j) with lazy deletion against pair_map
    pairs_processed = 0
    zero_reductions = 0

    def add_element(terms):
        terms = _monic(terms, key)
        lm, _ = _leading(terms, key)
        basis_terms.append(terms)
        lts.append(lm)
        reducers.append((lm, RAT_ONE, terms, _mask(lm), wdeg(lm)))
        _update_pairs(pair_map, heap, lts, len(lts) - 1, key, wdeg, heap_key)

    capped = False
    try:
        for g in sorted(gens, key=lambda g: key(max(g.terms, key=key))):
            r = _reduce_terms(g.terms, reducers, key, wdeg, deadline=deadline)
            if r:
                add_element(r)
    except _DeadlineHit:
        capped = True
        pair_map.clear()
    while pair_map:
        if max_basis is not None and len(basis_terms) > max_basis:
            capped = True
            break
        if max_pairs is not None and pairs_processed >= max_pairs:
            capped = True
            break
        if deadline is not None and time.monotonic() > deadline:
            capped = True
            break
        while heap:
            _, i, j = heapq.heappop(heap)
            lij = pair_map.pop((i, j), None)
            if lij is not None:
                break
        else:
            break
        pairs_processed += 1
        fi, fj = basis_terms[i], basis_terms[j]
        si = tuple(a - b for a, b in zip(lij, lts[i]))
        sj = tuple(a - b for a, b in zip(lij, lts[j]))
        sterms = {}
        for m, c in fi.items():
            sterms[tuple(a + b for a, b in zip(m, si))] = c
        for m, c in fj.items():
            mm = tuple(a + b for a, b in zip(m, sj))
            nc = sterms.get(mm, RAT_ZERO) - c
            if nc:
                sterms[mm] = nc
            else:
                sterms.pop(mm, None)
        try:
            r = _reduce_terms(sterms, reducers, key, wdeg, deadline=deadline)
        except _DeadlineHit:
            capped = True
            break
        if r:
            add_element(r)
        else:
            zero_reductions += 1

    # complete runs always inter-reduce fully so the basis is canonical;
    # capped runs give the tail reduction the same (expired) deadline
    reduced = _autoreduce(
        basis_terms, key, wdeg, deadline=deadline if capped else None
    )
    result = GroebnerResult(
        [Polynomial(ring, t) for t in reduced],
        not capped,
        pairs_processed,
        zero_reductions,
        time.monotonic() - t0,
    )
    if capped and raise_on_cap:
        raise ResourceCap(result.basis, pairs_processed)
    return result


def _autoreduce(basis_terms, key, wdeg, deadline=None):
    """Inter-reduce monic term dicts into the reduced basis, sorted by LT.

    Past the deadline, elements keep their unreduced tails; this only
    happens on runs already reported incomplete.
    """
    items = []
    for terms in basis_terms:
        lm, _ = _leading(terms, key)
        items.append((lm, terms))
    # drop elements whose leading term is divisible by another's
    items.sort(key=lambda it: key(it[0]))
    minimal = []
    for lm, terms in items:
        if any(_divides(lm2, lm) for lm2, _ in minimal):
            continue
        minimal.append((lm, terms))
    # tail-reduce each against the others
    entries = [_entry(terms, key, wdeg) for _, terms in minimal]
    out = []
    for idx, (lm, terms) in enumerate(minimal):
        others = entries[:idx] + entries[idx + 1:]
        try:
            r = _reduce_terms(terms, others, key, wdeg, deadline=deadline)
        except _DeadlineHit:
            r = terms
        if r:
            out.append(_monic(r, key))
    out.sort(key=lambda t: key(max(t, key=key)))
    return out


def groebner_basis(ideal, order, **caps):
    """Annotate an IdealBasis with its reduced Groebner basis."""
    if (
        ideal.annotated()
        and ideal.reduced
        and ideal.groebner_order.fingerprint() == order.fingerprint()
    ):
        return ideal
    result = buchberger(ideal.generators, order, **caps)
    if not result.complete:
        raise ResourceCap(result.basis, result.pairs_processed)
    return ideal.with_groebner(order, result.basis)


def elimination_ideal(ideal, eliminate, inner="grevlex", front="lex", **caps):
    """Eliminate the named variables; returns an IdealBasis in the subring.

    A Groebner basis under a block-elimination order with the given front
    block is computed (unless the ideal already carries one for that block);
    generators free of the eliminated variables form a Groebner basis of the
    elimination ideal by the elimination theorem.
    """
    from . import orders

    eliminate = [v for v in ideal.ring.names if v in set(eliminate)]
    if not eliminate:
        return ideal
    order = orders.block_elimination(ideal.ring, eliminate, front=front, inner=inner)
    result = buchberger(ideal.generators, order, **caps)
    if not result.complete:
        raise ResourceCap(result.basis, result.pairs_processed)
    return extract_elimination(
        ideal.ring, result.basis, eliminate, annotate_grevlex=(inner == "grevlex")
    )


def extract_elimination(ring, basis, eliminate, annotate_grevlex=False):
    """Project the front-free elements of an elimination GB into the subring.

    `basis` must be a Groebner basis under an order with the elimination
    property for the `eliminate` variables; the projected elements are then
    a Groebner basis of the elimination ideal.  They are a *grevlex* basis
    of the subring only when the inner block order was grevlex, which the
    caller asserts with `annotate_grevlex`.
    """
    from . import orders

    eliminate = [v for v in ring.names if v in set(eliminate)]
    elim_idx = [ring.index[v] for v in eliminate]
    keep_names = [n for n in ring.names if n not in set(eliminate)]
    subring = Ring([(n, ring.weights[ring.index[n]]) for n in keep_names])
    keep_idx = [ring.index[n] for n in keep_names]
    kept = []
    for g in basis:
        if any(any(m[i] for i in elim_idx) for m in g.terms):
            continue
        terms = {
            tuple(m[i] for i in keep_idx): c for m, c in g.terms.items()
        }
        kept.append(Polynomial(subring, terms))
    sub_order = orders.grevlex(subring)
    skey = _key_cache(sub_order)
    kept.sort(key=lambda g: skey(max(g.terms, key=skey)))
    if annotate_grevlex:
        return IdealBasis(subring, kept, sub_order, kept, True)
    return IdealBasis(subring, kept)


def ideal_contains(ideal, f, order, **caps):
    """Membership with certificate: (bool, remainder witness)."""
    annotated = groebner_basis(ideal, order, **caps)
    r = normal_form(f, annotated.groebner_basis, order)
    return r.is_zero(), r


def ideal_equal(a, b, order, **caps):
    """Mutual membership of generators, via reduced Groebner bases."""
    if a.ring != b.ring:
        raise RingError("ideals live in different rings")
    ga = groebner_basis(a, order, **caps)
    gb = groebner_basis(b, order, **caps)
    for f in a.generators:
        if not normal_form(f, gb.groebner_basis, order).is_zero():
            return False
    for f in b.generators:
        if not normal_form(f, ga.groebner_basis, order).is_zero():
            return False
    return True
