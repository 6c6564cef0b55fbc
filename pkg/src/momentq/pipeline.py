"""End-to-end elimination workflow, ideal comparison, benchmarks, caching.

A case is (k, n, group, order).  The workflow builds the ring over the phase
variables (weight 1), the Gram variables x[i,j] (weight 2), and for SO the
determinant variables (weight n), adjoins the moment components and the
defining relations x[i,j] - <y_i, y_j> (plus det[..] - det polynomial), and
eliminates the phase variables to obtain the relation ideal.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import shutil
import tempfile
import time
import warnings
from dataclasses import dataclass, field, replace

from . import model, orders
from .groebner import (
    IdealBasis,
    ResourceCap,
    buchberger,
    extract_elimination,
    groebner_basis,
    normal_form,
)
from .hilbert import gorenstein_check, hilbert_series_quotient, laurent_at_one
from .model import PhaseRing, build_ideals, detvar, gram_polynomial, xvar
from .poly import ParseError, format_poly, make_ring, parse_poly

DEFAULT_MAX_PAIRS = 50000
DEFAULT_MAX_BASIS = 5000
DEFAULT_TIME_BUDGET = 600.0

ORDER_NAMES = ("lex", "grevlex", "block", "paper")


class CaseError(ValueError):
    """Invalid case parameters; maps to the input-error exit code."""


@dataclass(frozen=True)
class CaseSpec:
    k: int
    n: int
    group: str = "O"
    order_name: str = "paper"
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS
    time_budget: float = DEFAULT_TIME_BUDGET
    allow_any_so_n: bool = False

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise CaseError("k and n must be positive")
        if self.group not in ("O", "SO"):
            raise CaseError(f"unknown group {self.group!r}")
        if self.order_name not in ORDER_NAMES:
            raise CaseError(f"unknown order {self.order_name!r}")
        if self.group == "SO":
            if self.n == 1:
                raise CaseError("SO with n=1 is trivial and not accepted")
            if self.n != 2 and not self.allow_any_so_n:
                raise CaseError(
                    "SO cases other than n=2 need the any-SO-n flag"
                )

    def uncapped(self):
        return replace(
            self, max_pairs=None, max_basis=None, time_budget=None
        )

    def caps(self):
        deadline = None
        if self.time_budget is not None:
            deadline = time.monotonic() + self.time_budget
        return {
            "max_pairs": self.max_pairs,
            "max_basis": self.max_basis,
            "deadline": deadline,
        }


def workflow_ring(spec):
    """(phase ring, combined ring, front variable names) for a case."""
    pr = PhaseRing(spec.k, spec.n)
    front = list(pr.ring.names)
    names = [(nm, 1) for nm in front]
    for i in range(1, 2 * spec.k + 1):
        for j in range(i, 2 * spec.k + 1):
            names.append((xvar(i, j), 2))
    if spec.group == "SO" and spec.n <= 2 * spec.k:
        for cols in itertools.combinations(range(1, 2 * spec.k + 1), spec.n):
            names.append((detvar(cols), spec.n))
    return pr, make_ring(names), front


def workflow_generators(spec, pr, ring):
    """Moment components plus the invariant defining relations."""
    lift = {nm: ring.var(nm) for nm in pr.ring.names}
    gens = [c.substitute(lift, ring) for c in model.moment_components(pr)]
    for i in range(1, 2 * spec.k + 1):
        for j in range(i, 2 * spec.k + 1):
            img = gram_polynomial(pr, i, j).substitute(lift, ring)
            gens.append(ring.var(xvar(i, j)) - img)
    if spec.group == "SO" and spec.n <= 2 * spec.k:
        for name, poly in model.so_determinant_generators(pr):
            gens.append(ring.var(name) - poly.substitute(lift, ring))
    return gens


def workflow_order(spec, ring, front):
    """The named monomial order, always an elimination order for `front`.

    "paper" interleaves q and p per particle coordinate in the front block;
    "lex" is plain lexicographic with the conventional sequence (all q, then
    all p, then the invariant variables), the slow baseline.
    """
    name = spec.order_name
    if name == "paper":
        return orders.block_elimination(ring, front, front="lex", inner="grevlex")
    if name == "lex":
        sequence = [
            model.qvar(ell, alpha)
            for ell in range(1, spec.k + 1)
            for alpha in range(1, spec.n + 1)
        ]
        sequence += [
            model.pvar(ell, alpha)
            for ell in range(1, spec.k + 1)
            for alpha in range(1, spec.n + 1)
        ]
        sequence += [nm for nm in ring.names if nm not in set(sequence)]
        return orders.lex(ring, sequence)
    if name == "grevlex":
        return orders.block_elimination(
            ring, front, front="grevlex", inner="grevlex"
        )
    if name == "block":
        return orders.block_elimination(ring, front, front="lex", inner="lex")
    raise CaseError(f"unknown order {name!r}")


def order_hash(order):
    return hashlib.sha256(order.fingerprint().encode()).hexdigest()[:12]


@dataclass
class WorkflowResult:
    spec: CaseSpec
    ring: object
    generators: list
    order: object
    basis: list
    complete: bool
    pairs_processed: int
    elapsed: float
    elimination: IdealBasis = None  # None when resource-capped


def run_elimination_workflow(spec, selection="degree"):
    """Eliminate the phase variables; capped runs carry a partial basis.

    `selection` is forwarded to buchberger; the pipeline always uses the
    degree strategy, the "order" strategy exists for benchmarking.
    """
    pr, ring, front = workflow_ring(spec)
    gens = workflow_generators(spec, pr, ring)
    order = workflow_order(spec, ring, front)
    result = buchberger(gens, order, selection=selection, **spec.caps())
    elim = None
    if result.complete:
        elim = extract_elimination(
            ring,
            result.basis,
            front,
            annotate_grevlex=spec.order_name in ("paper", "grevlex"),
        )
    return WorkflowResult(
        spec,
        ring,
        gens,
        order,
        result.basis,
        result.complete,
        result.pairs_processed,
        result.elapsed,
        elim,
    )


@dataclass
class CaseReport:
    spec: CaseSpec
    status: str  # complete | resource-capped
    verdict: str  # equal | Q-only | mismatch | R-only
    elimination_size: int = None
    groebner_size: int = None
    hilbert_r: dict = None
    hilbert_q: dict = None
    timings: dict = field(default_factory=dict)

    def record(self):
        out = {
            "k": self.spec.k,
            "n": self.spec.n,
            "group": self.spec.group,
            "order": self.spec.order_name,
            "status": self.status,
            "verdict": self.verdict,
            "elimination_size": self.elimination_size,
            "groebner_size": self.groebner_size,
            "hilbert_r": self.hilbert_r,
            "hilbert_q": self.hilbert_q,
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }
        return out


def _series_record(series):
    rec = series.record()
    rec["series"] = str(series)
    sat, graded = gorenstein_check(series)
    rec["gorenstein"] = sat
    rec["graded_gorenstein"] = graded
    return rec


def quadratic_ideal(spec):
    """The Q ideal (plus minors when n < k) in the Gram ring of the case."""
    _, gr, _, quad = build_ideals(spec.k, spec.n, spec.group)
    return gr, IdealBasis(gr.ring, quad.polynomials)


def compare_ideals(spec, workflow=None):
    """CaseReport with both Hilbert series and the equality verdict.

    For O the elimination result is compared against the Q ideal by series
    identity and mutual membership; a capped workflow degrades to Q-only.
    For SO there is no Q-side prediction and the verdict is R-only.
    A precomputed WorkflowResult may be passed to avoid rerunning it.
    """
    timings = {}
    hilbert_q = None
    q_ideal = None
    series_q = None
    if spec.group == "O":
        t0 = time.monotonic()
        _, q_ideal = quadratic_ideal(spec)
        series_q = hilbert_series_quotient(q_ideal, **spec.caps())
        q_ideal = groebner_basis(
            q_ideal, orders.grevlex(q_ideal.ring), **spec.caps()
        )
        hilbert_q = _series_record(series_q)
        hilbert_q["groebner_size"] = len(q_ideal.groebner_basis)
        timings["quadratic"] = time.monotonic() - t0

    wf = workflow if workflow is not None else run_elimination_workflow(spec)
    timings["workflow"] = wf.elapsed

    if not wf.complete:
        verdict = "Q-only" if spec.group == "O" else "R-only"
        return CaseReport(
            spec,
            "resource-capped",
            verdict,
            groebner_size=len(wf.basis),
            hilbert_q=hilbert_q,
            timings=timings,
        )

    elim = wf.elimination
    t0 = time.monotonic()
    r_annotated = groebner_basis(
        elim, orders.grevlex(elim.ring), **spec.caps()
    )
    series_r = hilbert_series_quotient(r_annotated, **spec.caps())
    hilbert_r = _series_record(series_r)
    hilbert_r["groebner_size"] = len(r_annotated.groebner_basis)
    timings["hilbert"] = time.monotonic() - t0

    if spec.group == "SO":
        verdict = "R-only"
    else:
        t0 = time.monotonic()
        same = series_r.same_series(series_q)
        order = orders.grevlex(q_ideal.ring)
        mutual = all(
            normal_form(f, q_ideal.groebner_basis, order).is_zero()
            for f in elim.generators
        ) and all(
            normal_form(f, r_annotated.groebner_basis, order).is_zero()
            for f in q_ideal.generators
        )
        timings["membership"] = time.monotonic() - t0
        verdict = "equal" if same and mutual else "mismatch"

    return CaseReport(
        spec,
        "complete",
        verdict,
        elimination_size=len(elim.generators),
        groebner_size=len(wf.basis),
        hilbert_r=hilbert_r,
        hilbert_q=hilbert_q,
        timings=timings,
    )


GRADED_INNER_ORDERS = ("paper", "grevlex")


def benchmark_orders(spec, order_names, time_budget=None, selection="auto"):
    """Wall-clock comparison of workflow orders on one case.

    Returns a list of rows {order, elapsed, complete, elimination_size};
    completed runs are cross-checked to give the identical reduced
    elimination ideal (stored under "consistent" on each completed row).

    With selection="auto" each order runs under the S-pair strategy a
    practitioner's system couples to it: orders with a graded invariant
    block use the degree strategy, while the pure-lex and lex-inner
    configurations use the classical order-driven strategy of
    general-purpose systems. Note that the degree strategy is valid for
    every order here (the ideals are homogeneous) and makes even pure lex
    fast; pass selection="degree" or "order" to run all orders under one
    strategy and see that for yourself.
    """
    rows = []
    reduced_bases = []
    for name in order_names:
        case = replace(
            spec,
            order_name=name,
            time_budget=spec.time_budget if time_budget is None else time_budget,
        )
        if selection == "auto":
            sel = "degree" if name in GRADED_INNER_ORDERS else "order"
        else:
            sel = selection
        wf = run_elimination_workflow(case, selection=sel)
        row = {
            "order": name,
            "elapsed": wf.elapsed,
            "complete": wf.complete,
            "elimination_size": (
                len(wf.elimination.generators) if wf.complete else None
            ),
        }
        if wf.complete:
            annotated = groebner_basis(
                wf.elimination, orders.grevlex(wf.elimination.ring)
            )
            reduced_bases.append((row, annotated.groebner_basis))
        rows.append(row)
    if reduced_bases:
        reference = reduced_bases[0][1]
        for row, basis in reduced_bases:
            row["consistent"] = basis == reference
    return rows


# -- caching -----------------------------------------------------------------

def case_key(spec, order=None):
    if order is None:
        _, ring, front = workflow_ring(spec)
        order = workflow_order(spec, ring, front)
    return f"{spec.k}_{spec.n}_{spec.group}_{order_hash(order)}"


def _checksum(payloads):
    h = hashlib.sha256()
    for text in payloads:
        h.update(text.encode())
        h.update(b"\0")
    return h.hexdigest()


def cache_store(cache_dir, spec, report, generators_text, groebner_text):
    """Atomically store a case entry; returns the entry directory."""
    key = case_key(spec)
    entry = os.path.join(cache_dir, key)
    os.makedirs(cache_dir, exist_ok=True)
    report_text = json.dumps(report.record(), indent=2, sort_keys=True) + "\n"
    tmp = tempfile.mkdtemp(dir=cache_dir, prefix=f".{key}.")
    try:
        with open(os.path.join(tmp, "generators.txt"), "w") as f:
            f.write(generators_text)
        with open(os.path.join(tmp, "groebner.txt"), "w") as f:
            f.write(groebner_text)
        with open(os.path.join(tmp, "report.json"), "w") as f:
            f.write(report_text)
        with open(os.path.join(tmp, "checksum"), "w") as f:
            f.write(
                _checksum([generators_text, groebner_text, report_text]) + "\n"
            )
        # concurrent writers race between removing the old entry and the
        # rename; retry until our tempdir lands or another writer's did
        for _ in range(50):
            if os.path.isdir(entry):
                shutil.rmtree(entry, ignore_errors=True)
            try:
                os.replace(tmp, entry)
                break
            except OSError:
                continue
        else:
            raise OSError(f"could not publish cache entry {entry}")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return entry


def cache_load(cache_dir, spec):
    """(report dict, generators text, groebner text) or None on miss/corruption."""
    entry = os.path.join(cache_dir, case_key(spec))
    paths = {
        name: os.path.join(entry, name)
        for name in ("generators.txt", "groebner.txt", "report.json", "checksum")
    }
    if not all(os.path.isfile(p) for p in paths.values()):
        return None
    with open(paths["generators.txt"]) as f:
        generators_text = f.read()
    with open(paths["groebner.txt"]) as f:
        groebner_text = f.read()
    with open(paths["report.json"]) as f:
        report_text = f.read()
    with open(paths["checksum"]) as f:
        stored = f.read().strip()
    if stored != _checksum([generators_text, groebner_text, report_text]):
        warnings.warn(f"cache entry {entry} failed its checksum; ignored")
        return None
    return json.loads(report_text), generators_text, groebner_text


def serialize_generators(spec, ring, polys, kind):
    lines = [f"# k={spec.k} n={spec.n} group={spec.group} kind={kind}"]
    lines.extend(format_poly(p) for p in polys)
    return "\n".join(lines) + "\n"


def parse_generator_file(text, ring):
    """Polynomials from a generator file body, skipping # headers."""
    polys = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        polys.append(parse_poly(line, ring))
    return polys


def run_case(spec, cache_dir=None):
    """compare_ideals with read-through caching of the report and bases."""
    if cache_dir is not None:
        hit = cache_load(cache_dir, spec)
        if hit is not None:
            return hit[0], True
    wf = run_elimination_workflow(spec)
    report = compare_ideals(spec, workflow=wf)
    if cache_dir is not None:
        generators_text = serialize_generators(
            spec, wf.ring, wf.generators, "workflow"
        )
        if wf.elimination is not None:
            groebner_text = serialize_generators(
                spec, wf.elimination.ring, wf.elimination.generators,
                "elimination",
            )
        else:
            groebner_text = serialize_generators(
                spec, wf.ring, [], "elimination"
            )
        cache_store(cache_dir, spec, report, generators_text, groebner_text)
    return report.record(), False


# -- the identity suite ------------------------------------------------------

def verify_suite(k_range=(1, 2, 3), n_range=(1, 2, 3, 4), corrupt=False):
    """Run the symbolic identity checks over a grid; summary of pass/fail.

    `corrupt` perturbs one Q generator before the membership check, as a
    negative control that must be reported as a failure.
    """
    from .exterior import all_minor_certificates, verify_certificate

    checks = []

    def add(name, fn):
        checks.append((name, fn))

    for k in k_range:
        for n in n_range:
            if k <= 2 and n <= 3:
                add(
                    f"brackets k={k} n={n}",
                    lambda k=k, n=n: model.verify_bracket_table(k, n).ok,
                )
            add(
                f"norm k={k} n={n}",
                lambda k=k, n=n: model.verify_norm_identity(k, n),
            )
            if n >= 2:
                add(
                    f"difference k={k} n={n}",
                    lambda k=k, n=n: model.verify_difference_identity(k, n),
                )
            if k >= 2 and n == 3:
                add(
                    f"localization k={k} n={n}",
                    lambda k=k, n=n: model.verify_localization_identity(k, n),
                )
            if k <= 2 and n <= 3 and n >= 2:
                add(
                    f"moment closure k={k} n={n}",
                    lambda k=k, n=n: model.verify_moment_closure(k, n),
                )

    for k in k_range:
        if k > 3:
            continue
        add(f"minor membership k={k}", lambda k=k: _minor_membership(k, corrupt))
        if k <= 2:
            add(
                f"certificates k={k}",
                lambda k=k: all(
                    verify_certificate(c, gr)
                    for gr in [model.GramRing(k)]
                    for c in all_minor_certificates(gr)
                ),
            )

    failures = []
    for name, fn in checks:
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failure, not an abort
            ok = False
            name = f"{name} ({exc!r})"
        if not ok:
            failures.append(name)
    return {
        "checked": len(checks),
        "passed": len(checks) - len(failures),
        "failures": failures,
    }


def _minor_membership(k, corrupt=False):
    """All (k+1) x (k+1) minors lie in the ideal of the Q generators."""
    gr = model.GramRing(k)
    gens = model.q_generators(gr)
    if corrupt:
        gens[0] = gens[0] + gr.ring.one()
    order = orders.grevlex(gr.ring)
    ideal = groebner_basis(IdealBasis(gr.ring, gens), order)
    for rows, cols, m in model.minor_generators(gr, k + 1):
        if not normal_form(m, ideal.groebner_basis, order).is_zero():
            return False
    return True
