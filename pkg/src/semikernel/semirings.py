"""Semirings as executable values: builtins, axiom checks, structural predicates."""
from __future__ import annotations

import random
from functools import lru_cache
from math import gcd
from types import SimpleNamespace

from .errors import FormatError, UnsupportedError
from .util import Report, ordkey, sorted_elems

SAMPLE_BUDGET = 10_000

INF = "oo"  # top element of the capped tropical semiring


def candidate_semiring(name, elements, add_table, mul_table, zero, one):
    """Operation tables packaged for axiom checking, without validity assumptions.

    Non-closed tables raise FormatError here; actual axiom failures are left
    for check_semiring_axioms to report with witnesses.
    """
    els = set(elements)
    if zero not in els or one not in els:
        raise FormatError(f"{name}: zero/one not in carrier")
    for tab, tag in ((add_table, "add"), (mul_table, "mul")):
        for a in elements:
            for b in elements:
                if (a, b) not in tab:
                    raise FormatError(f"{name}: {tag} table missing entry ({a},{b})")
                if tab[(a, b)] not in els:
                    raise FormatError(f"{name}: {tag} table not closed at ({a},{b})")
    return SimpleNamespace(
        name=name,
        elements=tuple(sorted_elems(elements)),
        add=lambda a, b: add_table[(a, b)],
        mul=lambda a, b: mul_table[(a, b)],
        zero=zero,
        one=one,
    )


class Semiring:
    """A semiring with decidable equality.

    Finite semirings carry an explicit element list; the only infinite builtin
    is NAT, whose canonical form is the integer itself.  All values are
    immutable after construction and structural flags are computed eagerly.
    """

    def __init__(self, name, elements, add, mul, zero, one, sample=None):
        self.name = name
        self.elements = tuple(sorted_elems(elements)) if elements is not None else None
        self.add = add
        self.mul = mul
        self.zero = zero
        self.one = one
        self._sample = sample
        if self.one == self.zero:
            raise FormatError(f"{name}: 1 = 0 is not allowed")
        self.axiom_report = check_semiring_axioms(self)
        if not self.axiom_report.ok:
            raise FormatError(f"{name}: semiring axioms fail: {self.axiom_report.first_witness()}")
        self.flags = structural_predicates(self)

    @property
    def is_finite(self):
        return self.elements is not None

    def sum(self, xs):
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def times_int(self, x, k):
        """k-fold sum x + ... + x computed in the semiring (k a non-negative int)."""
        acc = self.zero
        for _ in range(k):
            acc = self.add(acc, x)
        return acc

    def sample_elements(self, rng, count):
        if self.is_finite:
            return [rng.choice(self.elements) for _ in range(count)]
        if self._sample is None:
            raise UnsupportedError(f"{self.name}: no sampler for effective carrier")
        return [self._sample(rng) for _ in range(count)]

    def __repr__(self):
        size = len(self.elements) if self.is_finite else "effective"
        return f"<Semiring {self.name} ({size})>"


def _triples(S, budget=SAMPLE_BUDGET):
    """All element triples (finite) or a deterministic sample of them."""
    if S.elements is not None:
        els = S.elements
        if len(els) ** 3 <= budget:
            return [(a, b, c) for a in els for b in els for c in els], False
        rng = random.Random(0)
        return [tuple(rng.choice(els) for _ in range(3)) for _ in range(budget)], True
    rng = random.Random(0)
    return [tuple(S.sample_elements(rng, 3)) for _ in range(budget)], True


def check_semiring_axioms(S) -> Report:
    """Verify the semiring axioms, reporting a witness triple on each failure.

    Non-closed tables are a format error, not an axiom failure; closure is
    checked by the table constructor before this runs.
    """
    rep = Report(f"semiring {S.name}")
    triples, sampled = _triples(S)
    rep.sampled = sampled
    pairs = {(a, b) for a, b, _ in triples} | {(b, c) for _, b, c in triples}

    w = next(((a, b) for a, b in pairs if S.add(a, b) != S.add(b, a)), None)
    rep.add("add-commutative", w is None, w)
    w = next(((a,) for a, _ in pairs if S.add(a, S.zero) != a), None)
    rep.add("add-identity", w is None, w)
    w = next((t for t in triples if S.add(S.add(t[0], t[1]), t[2]) != S.add(t[0], S.add(t[1], t[2]))), None)
    rep.add("add-associative", w is None, w)
    w = next((t for t in triples if S.mul(S.mul(t[0], t[1]), t[2]) != S.mul(t[0], S.mul(t[1], t[2]))), None)
    rep.add("mul-associative", w is None, w)
    w = next(((a,) for a, _ in pairs if S.mul(a, S.one) != a or S.mul(S.one, a) != a), None)
    rep.add("mul-identity", w is None, w)
    w = next((t for t in triples if S.mul(t[0], S.add(t[1], t[2])) != S.add(S.mul(t[0], t[1]), S.mul(t[0], t[2]))), None)
    rep.add("left-distributive", w is None, w)
    w = next((t for t in triples if S.mul(S.add(t[0], t[1]), t[2]) != S.add(S.mul(t[0], t[2]), S.mul(t[1], t[2]))), None)
    rep.add("right-distributive", w is None, w)
    w = next(
        ((a, S.zero) for a, _ in pairs if S.mul(a, S.zero) != S.zero or S.mul(S.zero, a) != S.zero),
        None,
    )
    rep.add("absorption", w is None, w)
    rep.add("one-neq-zero", S.one != S.zero, (S.one, S.zero))
    return rep


def structural_predicates(S) -> dict:
    """commutative / cancellative / additively_idempotent flags with witnesses."""
    triples, sampled = _triples(S)
    pairs = sorted({(a, b) for a, b, _ in triples}, key=ordkey)
    out = {"sampled": sampled}

    w = next((p for p in pairs if S.mul(p[0], p[1]) != S.mul(p[1], p[0])), None)
    out["commutative"] = w is None
    out["commutative_witness"] = w

    w = None
    for a, b, c in triples:
        if S.add(a, b) == S.add(a, c) and b != c:
            w = (a, b, c)
            break
    out["cancellative"] = w is None
    out["cancellative_witness"] = w

    w = next(((a,) for a, _ in pairs if S.add(a, a) != a), None)
    out["additively_idempotent"] = w is None
    out["additively_idempotent_witness"] = w
    return out


def semiring_from_tables(name, elements, add_table, mul_table, zero, one):
    """Build a finite semiring from explicit operation tables.

    Tables are dicts keyed by element pairs.  Non-closure is a format error.
    """
    cand = candidate_semiring(name, elements, add_table, mul_table, zero, one)
    return Semiring(name, cand.elements, cand.add, cand.mul, zero, one)


# ---------------------------------------------------------------- builtins

@lru_cache(maxsize=None)
def bool_semiring():
    """Two-element semiring with idempotent addition (1 + 1 = 1)."""
    return Semiring("BOOL", [0, 1], lambda a, b: max(a, b), lambda a, b: a * b, 0, 1)


@lru_cache(maxsize=None)
def zmod(n):
    if n < 2:
        raise FormatError("ZMOD(n) needs n >= 2")
    return Semiring(
        f"ZMOD({n})", range(n), lambda a, b: (a + b) % n, lambda a, b: (a * b) % n, 0, 1
    )


@lru_cache(maxsize=None)
def natcap(k):
    """{0..k} with saturating addition and multiplication."""
    if k < 1:
        raise FormatError("NATCAP(k) needs k >= 1")
    return Semiring(
        f"NATCAP({k})",
        range(k + 1),
        lambda a, b: min(a + b, k),
        lambda a, b: min(a * b, k),
        0,
        1,
    )


@lru_cache(maxsize=None)
def tropcap(k):
    """min-plus semiring on {0..k, oo}: addition is min, multiplication saturating +."""
    if k < 1:
        raise FormatError("TROPCAP(k) needs k >= 1")

    def tadd(a, b):
        if a == INF:
            return b
        if b == INF:
            return a
        return min(a, b)

    def tmul(a, b):
        if a == INF or b == INF:
            return INF
        return min(a + b, k)

    return Semiring(f"TROPCAP({k})", list(range(k + 1)) + [INF], tadd, tmul, INF, 0)


@lru_cache(maxsize=None)
def ideals(n):
    """Ideals of Z/n: elements are divisors d of n (the ideal generated by d).

    Addition is ideal sum (gcd), multiplication is intersection (lcm); the
    zero ideal is (n) and the whole ring is (1).
    """
    if n < 2:
        raise FormatError("IDEALS(n) needs n >= 2")
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return Semiring(
        f"IDEALS({n})",
        divs,
        lambda a, b: gcd(a, b),
        lambda a, b: (a * b) // gcd(a, b),
        n,
        1,
    )


@lru_cache(maxsize=None)
def nat():
    """The effective semiring of non-negative integers (canonical form: the int)."""
    return Semiring(
        "NAT",
        None,
        lambda a, b: a + b,
        lambda a, b: a * b,
        0,
        1,
        sample=lambda rng: rng.randrange(0, 64),
    )


_BUILTINS = {
    "BOOL": lambda **kw: bool_semiring(),
    "ZMOD": lambda n, **kw: zmod(n),
    "NATCAP": lambda k, **kw: natcap(k),
    "TROPCAP": lambda k, **kw: tropcap(k),
    "IDEALS": lambda n, **kw: ideals(n),
    "NAT": lambda **kw: nat(),
}


def builtin_semiring(tag, **params):
    if tag not in _BUILTINS:
        raise FormatError(f"unknown builtin semiring {tag!r}")
    return _BUILTINS[tag](**params)


class SemiringMorphism:
    """A map of semirings; preservation of +, ., 0, 1 is checked on construction."""

    def __init__(self, source, target, fn, check=True):
        self.source = source
        self.target = target
        self.fn = fn
        if check:
            rep = self.check()
            if not rep.ok:
                raise FormatError(f"not a semiring morphism: {rep.first_witness()}")

    def check(self) -> Report:
        S, T, f = self.source, self.target, self.fn
        rep = Report(f"morphism {S.name} -> {T.name}")
        if not S.is_finite:
            raise UnsupportedError("morphism check needs a finite source")
        rep.add("zero", f(S.zero) == T.zero)
        rep.add("one", f(S.one) == T.one)
        w = next(
            (
                (a, b)
                for a in S.elements
                for b in S.elements
                if f(S.add(a, b)) != T.add(f(a), f(b))
            ),
            None,
        )
        rep.add("additive", w is None, w)
        w = next(
            (
                (a, b)
                for a in S.elements
                for b in S.elements
                if f(S.mul(a, b)) != T.mul(f(a), f(b))
            ),
            None,
        )
        rep.add("multiplicative", w is None, w)
        return rep

    def __call__(self, x):
        return self.fn(x)
