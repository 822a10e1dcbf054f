"""Carrier atoms for structured semimodules.

A semimodule carrier is a direct sum of atoms.  Finite atoms (CYCLIC, BOOL,
TABLE, FREE) expose full element lists; NAT and QMODZ are effective, with
exact integers and reduced fractions in [0,1) as canonical forms.  Each atom
provides a generating set with a complete additive (Cayley-style)
presentation, which is what the tensor saturation consumes.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import FormatError, UnsupportedError
from .util import sorted_elems


class Atom:
    kind = "?"
    finite = True

    def elements(self):
        raise NotImplementedError

    def times_int(self, a, k):
        """k-fold sum by binary doubling."""
        acc = self.zero
        base = a
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            k >>= 1
        return acc

    # generating data: list of (key, element); None when not finitely generated
    def gens(self):
        return None

    def decompose(self, a):
        raise UnsupportedError(f"{self.kind}: no generator decomposition")

    def cayley(self):
        """Complete relation list among generators, as (multiset, multiset) pairs."""
        return []

    def act_left(self, s, a):
        return self.act(a, s)

    def solve_mult(self, hi, lo):
        """Elements t with hi*t == lo*t (hi > lo >= 0); None means infinitely many."""
        if self.finite:
            return [t for t in self.elements() if self.times_int(t, hi) == self.times_int(t, lo)]
        return None

    def describe(self):
        return {"kind": self.kind}


class NatAtom(Atom):
    kind = "NAT"
    finite = False
    zero = 0

    def __init__(self, base):
        if base.name != "NAT":
            raise FormatError("NAT atom requires base NAT")
        self.base = base

    def elements(self):
        return None

    def add(self, a, b):
        return a + b

    def act(self, a, s):
        return a * s

    def times_int(self, a, k):
        return a * k

    def gens(self):
        return [("g", 1)]

    def decompose(self, a):
        return {"g": a} if a else {}

    def solve_mult(self, hi, lo):
        return [0] if hi != lo else None

    def sample(self, rng):
        return rng.randrange(0, 16)


class CyclicAtom(Atom):
    kind = "CYCLIC"
    zero = 0

    def __init__(self, base, n):
        if n < 1:
            raise FormatError("CYCLIC(n) needs n >= 1")
        if base.name == "NAT":
            pass
        elif base.name.startswith("ZMOD("):
            m = len(base.elements)
            if m % n != 0:
                raise FormatError(f"CYCLIC({n}) needs n | {m} over {base.name}")
        else:
            raise FormatError(f"CYCLIC atom unsupported over {base.name}")
        self.base = base
        self.n = n

    def elements(self):
        return list(range(self.n))

    def add(self, a, b):
        return (a + b) % self.n

    def act(self, a, s):
        return (a * s) % self.n

    def gens(self):
        return [("g", 1 % self.n)]

    def decompose(self, a):
        return {"g": a} if a else {}

    def cayley(self):
        return [({"g": self.n}, {})]

    def describe(self):
        return {"kind": self.kind, "n": self.n}


class BoolAtom(Atom):
    kind = "BOOL"
    zero = 0

    def __init__(self, base):
        if base.name not in ("NAT", "BOOL"):
            raise FormatError(f"BOOL atom unsupported over {base.name}")
        self.base = base

    def elements(self):
        return [0, 1]

    def add(self, a, b):
        return max(a, b)

    def act(self, a, s):
        return a if s != 0 else 0

    def gens(self):
        return [("g", 1)]

    def decompose(self, a):
        return {"g": 1} if a else {}

    def cayley(self):
        return [({"g": 2}, {"g": 1})]


class QmodzAtom(Atom):
    """Q/Z with exact reduced fractions in [0,1); not finitely generated."""

    kind = "QMODZ"
    finite = False
    zero = Fraction(0)

    def __init__(self, base):
        if base.name != "NAT":
            raise FormatError("QMODZ atom requires base NAT")
        self.base = base

    def elements(self):
        return None

    def add(self, a, b):
        c = a + b
        return c - int(c)

    def act(self, a, s):
        c = a * s
        return c - int(c)

    def times_int(self, a, k):
        return self.act(a, k)

    def solve_mult(self, hi, lo):
        d = hi - lo
        if d == 0:
            return None
        return [Fraction(j, d) for j in range(d)]

    def sample(self, rng):
        den = rng.randrange(1, 13)
        return Fraction(rng.randrange(0, den), den)


class TableAtom(Atom):
    """Finite commutative monoid with an explicit scalar action.

    The action is a dict (element, base element) -> element for finite bases,
    or None over NAT (iterated addition).
    """

    kind = "TABLE"

    def __init__(self, base, elements, add_table, action=None):
        self.base = base
        self._elements = tuple(sorted_elems(elements))
        els = set(self._elements)
        for (a, b), c in add_table.items():
            if a not in els or b not in els or c not in els:
                raise FormatError("TABLE add not closed")
        for a in self._elements:
            for b in self._elements:
                if (a, b) not in add_table:
                    raise FormatError(f"TABLE add missing ({a},{b})")
        self._add = add_table
        zeros = [z for z in self._elements if all(add_table[(z, a)] == a for a in self._elements)]
        if not zeros:
            raise FormatError("TABLE has no additive identity")
        self.zero = zeros[0]
        if action is None:
            if base.name != "NAT":
                raise FormatError("TABLE without action table needs base NAT")
            self._action = None
        else:
            for a in self._elements:
                for s in base.elements:
                    if (a, s) not in action:
                        raise FormatError(f"TABLE action missing ({a},{s})")
                    if action[(a, s)] not in els:
                        raise FormatError("TABLE action not closed")
            self._action = action

    def elements(self):
        return list(self._elements)

    def add(self, a, b):
        return self._add[(a, b)]

    def act(self, a, s):
        if self._action is None:
            return self.times_int(a, s)
        return self._action[(a, s)]

    def gens(self):
        return [(a, a) for a in self._elements if a != self.zero]

    def decompose(self, a):
        return {a: 1} if a != self.zero else {}

    def cayley(self):
        rels = []
        nz = [a for a in self._elements if a != self.zero]
        for i, a in enumerate(nz):
            for b in nz[i:]:
                lhs = {a: 2} if a == b else {a: 1, b: 1}
                rels.append((lhs, self.decompose(self.add(a, b))))
        return rels

    def describe(self):
        return {"kind": self.kind, "size": len(self._elements)}


class PresentedTableAtom(TableAtom):
    """Finite table atom that remembers a small generating presentation.

    Elements are canonical multiplicity vectors over the generators; the
    stored relations generate the defining congruence, so downstream tensors
    can present this atom by its few generators instead of all elements.
    """

    kind = "TABLE"

    def __init__(self, base, elements, add_table, action, gen_nfs, relations):
        super().__init__(base, elements, add_table, action)
        self._gen_nfs = list(gen_nfs)  # canonical form of each generator
        self._relations = relations  # [(vec, vec)] over the generators

    def gens(self):
        return [(i, nf) for i, nf in enumerate(self._gen_nfs)]

    def decompose(self, a):
        return {i: k for i, k in enumerate(a) if k}

    def cayley(self):
        out = []
        for l, r in self._relations:
            out.append(
                (
                    {i: k for i, k in enumerate(l) if k},
                    {i: k for i, k in enumerate(r) if k},
                )
            )
        return out


class FreeAtom(Atom):
    """Free module on a finite basis over a finite semiring: coefficient tuples."""

    kind = "FREE"

    def __init__(self, base, basis):
        if not base.is_finite:
            raise FormatError("FREE atom needs a finite base semiring")
        self.base = base
        self.basis = tuple(basis)
        self.zero = (base.zero,) * len(self.basis)

    def elements(self):
        out = [()]
        for _ in self.basis:
            out = [t + (s,) for t in out for s in self.base.elements]
        return out

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def act(self, a, s):
        return tuple(self.base.mul(x, s) for x in a)

    def act_left(self, s, a):
        return tuple(self.base.mul(s, x) for x in a)

    def unit(self, i, s=None):
        s = self.base.one if s is None else s
        return tuple(s if j == i else self.base.zero for j in range(len(self.basis)))

    def gens(self):
        nz = [s for s in self.base.elements if s != self.base.zero]
        return [((i, s), self.unit(i, s)) for i in range(len(self.basis)) for s in nz]

    def decompose(self, a):
        return {(i, s): 1 for i, s in enumerate(a) if s != self.base.zero}

    def cayley(self):
        rels = []
        nz = [s for s in self.base.elements if s != self.base.zero]
        for i in range(len(self.basis)):
            for j, s in enumerate(nz):
                for t in nz[j:]:
                    lhs = {(i, s): 2} if s == t else {(i, s): 1, (i, t): 1}
                    u = self.base.add(s, t)
                    rhs = {(i, u): 1} if u != self.base.zero else {}
                    rels.append((lhs, rhs))
        return rels

    def describe(self):
        return {"kind": self.kind, "basis": list(self.basis)}
