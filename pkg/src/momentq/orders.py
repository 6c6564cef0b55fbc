"""Total monomial orders on exponent tuples.

Each order exposes `key(exps)` returning a tuple; monomial u exceeds v exactly
when key(u) > key(v).  All orders here are multiplicative with 1 minimal, and
block orders have the elimination property for their front block.
"""

from __future__ import annotations


class MonomialOrder:
    """Base class; subclasses implement key() and fingerprint()."""

    def key(self, exps):
        raise NotImplementedError

    def fingerprint(self):
        raise NotImplementedError

    def greater(self, u, v):
        return self.key(u) > self.key(v)

    def sort_terms(self, terms):
        """Monomials of a term map, leading first."""
        return sorted(terms, key=self.key, reverse=True)

    def __repr__(self):
        return f"<order {self.fingerprint()}>"


def _resolve_sequence(ring, variables):
    if variables is None:
        return tuple(range(ring.nvars))
    return tuple(ring.index[v] for v in variables)


class Lex(MonomialOrder):
    """Lexicographic order; optional explicit variable priority sequence."""

    def __init__(self, ring, variables=None):
        self.ring = ring
        self.sequence = _resolve_sequence(ring, variables)
        if sorted(self.sequence) != list(range(ring.nvars)):
            raise ValueError("variable sequence must be a permutation of the ring")

    def key(self, exps):
        return tuple(exps[i] for i in self.sequence)

    def fingerprint(self):
        names = ",".join(self.ring.names[i] for i in self.sequence)
        return f"lex({names})"


class GradedLex(MonomialOrder):
    """Weighted degree first, then lex on the variable sequence."""

    def __init__(self, ring, variables=None):
        self.ring = ring
        self.sequence = _resolve_sequence(ring, variables)
        self.weights = ring.weights

    def key(self, exps):
        deg = sum(e * w for e, w in zip(exps, self.weights))
        return (deg,) + tuple(exps[i] for i in self.sequence)

    def fingerprint(self):
        names = ",".join(self.ring.names[i] for i in self.sequence)
        return f"grlex({names})"


class GradedRevLex(MonomialOrder):
    """Weighted degree first, ties by reverse-lex on the variable sequence."""

    def __init__(self, ring, variables=None):
        self.ring = ring
        self.sequence = _resolve_sequence(ring, variables)
        self.weights = ring.weights

    def key(self, exps):
        deg = sum(e * w for e, w in zip(exps, self.weights))
        return (deg,) + tuple(-exps[i] for i in reversed(self.sequence))

    def fingerprint(self):
        names = ",".join(self.ring.names[i] for i in self.sequence)
        return f"grevlex({names})"


class BlockOrder(MonomialOrder):
    """Front block compared first under `front`, remainder under `inner`.

    Any monomial containing a front-block variable exceeds every monomial
    free of the block, because 1 is minimal for the front order.
    """

    def __init__(self, ring, front_variables, front, inner):
        self.ring = ring
        self.front_idx = tuple(ring.index[v] for v in front_variables)
        inner_vars = [n for n in ring.names if n not in set(front_variables)]
        self.inner_idx = tuple(ring.index[v] for v in inner_vars)
        self.front = front
        self.inner = inner

    def key(self, exps):
        front = tuple(exps[i] for i in self.front_idx)
        inner = tuple(exps[i] for i in self.inner_idx)
        return (self.front.project_key(front), self.inner.project_key(inner))

    def fingerprint(self):
        names = ",".join(self.ring.names[i] for i in self.front_idx)
        return (
            f"block(front=[{names}];{self.front.fingerprint()};"
            f"{self.inner.fingerprint()})"
        )


class SubLex(MonomialOrder):
    """Lex on an already-projected exponent tuple (for block components)."""

    def __init__(self, names):
        self.names = tuple(names)

    def project_key(self, exps):
        return exps

    def fingerprint(self):
        return "lex"


class SubGradedRevLex(MonomialOrder):
    """Graded reverse lex on an already-projected exponent tuple."""

    def __init__(self, names, weights):
        self.names = tuple(names)
        self.weights = tuple(weights)

    def project_key(self, exps):
        deg = sum(e * w for e, w in zip(exps, self.weights))
        return (deg,) + tuple(-e for e in reversed(exps))

    def fingerprint(self):
        return "grevlex"


class SubGradedLex(MonomialOrder):
    """Graded lex on an already-projected exponent tuple."""

    def __init__(self, names, weights):
        self.names = tuple(names)
        self.weights = tuple(weights)

    def project_key(self, exps):
        deg = sum(e * w for e, w in zip(exps, self.weights))
        return (deg,) + exps

    def fingerprint(self):
        return "grlex"


def lex(ring, variables=None):
    return Lex(ring, variables)


def grlex(ring, variables=None):
    return GradedLex(ring, variables)


def grevlex(ring, variables=None):
    return GradedRevLex(ring, variables)


def block_elimination(ring, front_variables, front="lex", inner="grevlex"):
    """Elimination order with the given front block.

    `front` and `inner` name the order used inside each block: one of
    "lex", "grlex", "grevlex".  The front block is compared in the sequence
    given by `front_variables`, so a lex front doubles as a priority order.
    """
    front_variables = list(front_variables)
    inner_names = [n for n in ring.names if n not in set(front_variables)]
    fw = tuple(ring.weights[ring.index[v]] for v in front_variables)
    iw = tuple(ring.weights[ring.index[v]] for v in inner_names)

    def build(kind, names, weights):
        if kind == "lex":
            return SubLex(names)
        if kind == "grlex":
            return SubGradedLex(names, weights)
        if kind == "grevlex":
            return SubGradedRevLex(names, weights)
        raise ValueError(f"unknown block order kind {kind!r}")

    return BlockOrder(
        ring,
        front_variables,
        build(front, front_variables, fw),
        build(inner, inner_names, iw),
    )


def priority(ring, variables, base="lex"):
    """Reorder the variables by the given priority sequence, then apply base."""
    if base == "lex":
        return Lex(ring, variables)
    if base == "grlex":
        return GradedLex(ring, variables)
    if base == "grevlex":
        return GradedRevLex(ring, variables)
    raise ValueError(f"unknown base order {base!r}")
