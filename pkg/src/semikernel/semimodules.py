"""Semimodules over a semiring: structured carriers, maps, congruences,
quotients, subtractive closure, hom enumeration and the exactness taxonomy.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .atoms import BoolAtom, CyclicAtom, FreeAtom, NatAtom, QmodzAtom, TableAtom
from .errors import FormatError, UnsupportedError
from .util import Report, ordkey, sorted_elems


class Semimodule:
    """Direct sum of atoms over a base semiring; elements are tuples, one
    coordinate per atom.  Right action by default; bimodule actions may be
    overridden (tensor carriers need genuinely two-sided structure).
    """

    def __init__(self, base, atoms, name="M", act_right=None, act_left=None):
        self.base = base
        self.atoms = tuple(atoms)
        self.name = name
        self.zero = tuple(a.zero for a in self.atoms)
        self._act_right = act_right
        self._act_left = act_left
        self._elements = None

    @property
    def is_finite(self):
        return all(a.finite for a in self.atoms)

    def elements(self):
        if not self.is_finite:
            return None
        if self._elements is None:
            pools = [a.elements() for a in self.atoms]
            self._elements = [tuple(t) for t in itertools.product(*pools)] if pools else [()]
            self._elements.sort(key=ordkey)
        return self._elements

    def add(self, x, y):
        return tuple(a.add(u, v) for a, u, v in zip(self.atoms, x, y))

    def act(self, x, s):
        if self._act_right is not None:
            return self._act_right(x, s)
        return tuple(a.act(u, s) for a, u in zip(self.atoms, x))

    def act_left(self, s, x):
        if self._act_left is not None:
            return self._act_left(s, x)
        if self._act_right is not None:
            return self._act_right(x, s)
        return tuple(a.act_left(s, u) for a, u in zip(self.atoms, x))

    def times_int(self, x, k):
        return tuple(a.times_int(u, k) for a, u in zip(self.atoms, x))

    def sum(self, xs):
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def sample(self, rng):
        out = []
        for a in self.atoms:
            if a.finite:
                out.append(rng.choice(a.elements()))
            else:
                out.append(a.sample(rng))
        return tuple(out)

    # -- generators and presentations ---------------------------------------

    def inject(self, i, v):
        """Module element with v in atom i and zero elsewhere."""
        return tuple(v if j == i else a.zero for j, a in enumerate(self.atoms))

    def gens(self):
        """Tagged generating set [(tag, element)]; None if not finitely generated."""
        out = []
        for i, a in enumerate(self.atoms):
            g = a.gens()
            if g is None:
                return None
            out.extend(((i, key), self.inject(i, v)) for key, v in g)
        return out

    def decompose(self, x):
        out = {}
        for i, (a, v) in enumerate(zip(self.atoms, x)):
            for key, k in a.decompose(v).items():
                out[(i, key)] = k
        return out

    def cayley(self):
        rels = []
        for i, a in enumerate(self.atoms):
            for lhs, rhs in a.cayley():
                rels.append(
                    (
                        {(i, k): m for k, m in lhs.items()},
                        {(i, k): m for k, m in rhs.items()},
                    )
                )
        return rels

    def cyclic_constraint(self, x):
        """Minimal (i, p) with (i+p)x = ix, or None if the orbit is infinite."""
        seen = {}
        cur = self.zero
        k = 0
        while True:
            if cur in seen:
                i = seen[cur]
                return (i, k - i)
            seen[cur] = k
            cur = self.add(cur, x)
            k += 1
            if k > 10_000:
                return None

    def describe(self):
        return {"base": self.base.name, "atoms": [a.describe() for a in self.atoms]}

    def __repr__(self):
        size = len(self.elements()) if self.is_finite else "effective"
        return f"<Semimodule {self.name} over {self.base.name} ({size})>"


def same_carrier(M, N):
    if M.base is not N.base or len(M.atoms) != len(N.atoms):
        return False
    if M.is_finite != N.is_finite:
        return False
    if M.is_finite:
        return M.elements() == N.elements()
    return [a.describe() for a in M.atoms] == [a.describe() for a in N.atoms]


# ---------------------------------------------------------------- builders

def zero_module(S, name="0"):
    return Semimodule(S, [], name=name)


def free_semimodule(S, n, name=None):
    """S^n with coordinatewise operations; rank 0 gives the zero module."""
    if n < 0:
        raise FormatError("rank must be >= 0")
    if n == 0:
        return zero_module(S)
    if S.is_finite:
        M = Semimodule(S, [FreeAtom(S, range(n))], name=name or f"{S.name}^{n}")
        M.basis = [((tuple(S.one if j == i else S.zero for j in range(n))),) for i in range(n)]
        return M
    if S.name == "NAT":
        M = Semimodule(S, [NatAtom(S) for _ in range(n)], name=name or f"NAT^{n}")
        M.basis = [M.inject(i, 1) for i in range(n)]
        return M
    raise UnsupportedError(f"free module over {S.name}")


def semiring_module(S):
    """S as a (bi)module over itself."""
    return free_semimodule(S, 1, name=S.name)


def scalar_of(M, x):
    """Inverse of the rank-1 free embedding: module element -> base element."""
    if len(M.atoms) != 1:
        raise FormatError("not a rank-1 module")
    a = M.atoms[0]
    if isinstance(a, FreeAtom) and len(a.basis) == 1:
        return x[0][0]
    if isinstance(a, NatAtom):
        return x[0]
    raise FormatError("not the base-as-module carrier")


def scalar_to(M, s):
    a = M.atoms[0]
    if isinstance(a, FreeAtom) and len(a.basis) == 1:
        return ((s,),)
    if isinstance(a, NatAtom):
        return (s,)
    raise FormatError("not the base-as-module carrier")


def cyclic_module(S, n, name=None):
    return Semimodule(S, [CyclicAtom(S, n)], name=name or f"Z/{n}")


def bool_module(S, name="B"):
    return Semimodule(S, [BoolAtom(S)], name=name)


def qmodz_module(S, name="Q/Z"):
    return Semimodule(S, [QmodzAtom(S)], name=name)


def table_module(S, elements, add_table, action=None, name="T"):
    return Semimodule(S, [TableAtom(S, elements, add_table, action)], name=name)


def retable_module(M, new_base, action_raw, name=None):
    """Same single-table carrier as M, re-based with a new raw-level action.

    Element shapes are preserved, so inclusions between the two are identities.
    """
    if len(M.atoms) != 1 or not isinstance(M.atoms[0], TableAtom):
        raise FormatError("retable needs a single-table carrier")
    ta = M.atoms[0]
    raws = ta.elements()
    add = {(a, b): ta.add(a, b) for a in raws for b in raws}
    return table_module(new_base, raws, add, action_raw, name=name or M.name)


def subcarrier_module(M, raw_elements, base=None, name="sub"):
    """A table module on a subset of a single-table carrier, elements shared."""
    if len(M.atoms) != 1:
        raise FormatError("subcarrier needs a single-atom carrier")
    ta = M.atoms[0]
    base = base or M.base
    raws = sorted_elems(raw_elements)
    add = {(a, b): M.add((a,), (b,))[0] for a in raws for b in raws}
    if base.elements is not None:
        action = {(a, s): M.act((a,), s)[0] for a in raws for s in base.elements}
    else:
        action = None
    return table_module(base, raws, add, action, name=name)


def direct_sum(mods, name=None):
    """Componentwise structure with atoms concatenated; returns the sum plus
    injection and projection maps."""
    if not mods:
        raise FormatError("direct sum of nothing")
    base = mods[0].base
    if any(m.base is not base for m in mods):
        raise FormatError("direct sum needs a common base semiring")
    atoms = [a for m in mods for a in m.atoms]
    out = Semimodule(base, atoms, name=name or "(+)".join(m.name for m in mods))
    offs = []
    o = 0
    for m in mods:
        offs.append(o)
        o += len(m.atoms)
    injections, projections = [], []
    for idx, m in enumerate(mods):
        lo, hi = offs[idx], offs[idx] + len(m.atoms)

        def inj(x, lo=lo, hi=hi):
            return tuple(
                x[i - lo] if lo <= i < hi else a.zero for i, a in enumerate(out.atoms)
            )

        def proj(y, lo=lo, hi=hi):
            return tuple(y[lo:hi])

        injections.append(LinearMap(m, out, inj, name=f"inj{idx}"))
        projections.append(LinearMap(out, m, proj, name=f"proj{idx}"))
    return out, injections, projections


# ---------------------------------------------------------------- linear maps

class LinearMap:
    """Additive, action-preserving map; for finite sources the graph is stored."""

    def __init__(self, source, target, fn, name=None, check=False):
        self.source = source
        self.target = target
        self.name = name or "f"
        if source.is_finite:
            self.mapping = {x: fn(x) for x in source.elements()}
            self.fn = self.mapping.__getitem__
        else:
            self.mapping = None
            self.fn = fn
        if check:
            rep = self.check()
            if not rep.ok:
                raise FormatError(f"{self.name}: not linear: {rep.first_witness()}")

    def __call__(self, x):
        return self.fn(x)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        if self.mapping is None or other.mapping is None:
            return NotImplemented
        return self.mapping == other.mapping

    def __hash__(self):
        if self.mapping is None:
            return id(self)
        return hash(tuple(sorted(self.mapping.items(), key=lambda p: ordkey(p[0]))))

    def check(self, rng_seed=0, samples=64) -> Report:
        """Linearity: exhaustive on finite sources, sampled otherwise."""
        M, N, f = self.source, self.target, self.fn
        rep = Report(f"linear {self.name}")
        if M.is_finite:
            els = M.elements()
            rep.add("zero", f(M.zero) == N.zero, M.zero)
            w = next(
                ((x, y) for x in els for y in els if f(M.add(x, y)) != N.add(f(x), f(y))),
                None,
            )
            rep.add("additive", w is None, w)
            scalars = M.base.elements
            if scalars is None:
                scalars = range(0, 8)
                rep.sampled = True
            w = next(
                ((x, s) for x in els for s in scalars if f(M.act(x, s)) != N.act(f(x), s)),
                None,
            )
            rep.add("action", w is None, w)
        else:
            rng = random.Random(rng_seed)
            rep.sampled = True
            rep.add("zero", f(M.zero) == N.zero, M.zero)
            pairs = [(M.sample(rng), M.sample(rng)) for _ in range(samples)]
            w = next(((x, y) for x, y in pairs if f(M.add(x, y)) != N.add(f(x), f(y))), None)
            rep.add("additive", w is None, w)
            scal = M.base.sample_elements(rng, samples)
            w = next(
                ((x, s) for (x, _), s in zip(pairs, scal) if f(M.act(x, s)) != N.act(f(x), s)),
                None,
            )
            rep.add("action", w is None, w)
        return rep

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and not same_carrier(other.target, self.source):
            raise FormatError("maps not composable")
        return LinearMap(other.source, self.target, lambda x: self(other(x)), name=f"{self.name}.{other.name}")

    def __repr__(self):
        return f"<LinearMap {self.name}: {self.source.name} -> {self.target.name}>"


def identity_map(M):
    return LinearMap(M, M, lambda x: x, name="id")


def zero_map(M, N):
    return LinearMap(M, N, lambda x: N.zero, name="0")


# ---------------------------------------------------------------- subobjects

@dataclass
class Subsemimodule:
    ambient: Semimodule
    elements: frozenset
    generators: tuple = ()

    def contains(self, x):
        return x in self.elements

    def sorted_elements(self):
        return sorted_elems(self.elements)

    def __repr__(self):
        return f"<Sub {len(self.elements)} of {self.ambient.name}>"


def span(M, gens):
    """Smallest subsemimodule of a finite M containing gens."""
    if not M.is_finite:
        raise UnsupportedError("span needs a finite ambient")
    cur = {M.zero}
    frontier = [M.zero] + [g for g in gens]
    cur.update(frontier)
    scalars = M.base.elements
    changed = True
    while changed:
        changed = False
        new = set()
        for x in cur:
            for g in list(cur):
                y = M.add(x, g)
                if y not in cur:
                    new.add(y)
            if scalars is not None:
                for s in scalars:
                    y = M.act(x, s)
                    if y not in cur:
                        new.add(y)
        if new:
            cur.update(new)
            changed = True
    return Subsemimodule(M, frozenset(cur), tuple(gens))


def full_submodule(M):
    return Subsemimodule(M, frozenset(M.elements()), ())


def subtractive_closure(L: Subsemimodule) -> Subsemimodule:
    """{g : g + l' = l'' for some l', l'' in L}; one pass suffices."""
    M = L.ambient
    if not M.is_finite:
        raise UnsupportedError("closure needs a finite ambient")
    sums = {}
    for l2 in L.elements:
        sums[l2] = True
    closed = set(L.elements)
    for g in M.elements():
        if g in closed:
            continue
        if any(M.add(g, l1) in sums for l1 in L.elements):
            closed.add(g)
    return Subsemimodule(M, frozenset(closed), tuple(L.generators))


def is_subtractive(L: Subsemimodule) -> bool:
    return subtractive_closure(L).elements == L.elements


def enumerate_submodules(M, cap=4096):
    """All subsemimodules of a finite module, walking the submodule lattice.

    Each submodule is extended by one new element at a time, so the cost is
    proportional to the number of submodules rather than of subsets.
    """
    els = M.elements()
    zero_sub = span(M, [])
    seen = {zero_sub.elements: zero_sub}
    frontier = [zero_sub]
    while frontier:
        sub = frontier.pop()
        for e in els:
            if e in sub.elements:
                continue
            bigger = span(M, list(sub.elements) + [e])
            if bigger.elements not in seen:
                if len(seen) >= cap:
                    raise UnsupportedError("submodule lattice exceeds the cap")
                seen[bigger.elements] = bigger
                frontier.append(bigger)
    out = list(seen.values())
    out.sort(key=lambda s: (len(s.elements), tuple(ordkey(e) for e in s.sorted_elements())))
    return out


# ---------------------------------------------------------------- congruences

@dataclass
class Congruence:
    ambient: Semimodule
    kind: str  # modL | bracketL | custom
    witness: object  # the subsemimodule L when applicable
    classes: list  # list of frozensets
    class_of: dict

    def rep(self, x):
        return min(self.class_of[x], key=ordkey)


def _partition_from_relation(M, related):
    els = M.elements()
    class_of = {}
    classes = []
    for x in els:
        if x in class_of:
            continue
        cls = frozenset(y for y in els if related(x, y))
        fs = cls
        classes.append(fs)
        for y in fs:
            class_of[y] = fs
    classes.sort(key=lambda c: ordkey(min(c, key=ordkey)))
    return classes, class_of


def congruence_mod(L: Subsemimodule) -> Congruence:
    """m1 ~ m2 iff m1 + l1 = m2 + l2 for some l1, l2 in L (already transitive)."""
    M = L.ambient
    shifted = {m: frozenset(M.add(m, l) for l in L.elements) for m in M.elements()}

    def related(x, y):
        return bool(shifted[x] & shifted[y])

    classes, class_of = _partition_from_relation(M, related)
    return Congruence(M, "modL", L, classes, class_of)


def congruence_bracket(L: Subsemimodule) -> Congruence:
    """m1 ~ m2 iff m1 + l1 + m' = m2 + l2 + m' for some l1, l2 in L, m' in M.

    The slack m' is shared between the two sides.
    """
    M = L.ambient
    els = M.elements()
    plusL = {m: frozenset(M.add(m, l) for l in L.elements) for m in els}

    def related(x, y):
        return any(plusL[M.add(x, mp)] & plusL[M.add(y, mp)] for mp in els)

    classes, class_of = _partition_from_relation(M, related)
    return Congruence(M, "bracketL", L, classes, class_of)


def module_congruence_closure(M, pairs):
    """Smallest module congruence containing the given element pairs.

    Fixpoint of union-find closure under addition and scalar action.
    """
    els = M.elements()
    parent = {e: e for e in els}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if ordkey(ry) < ordkey(rx):
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    for a, b in pairs:
        union(a, b)
    scalars = M.base.elements
    changed = True
    while changed:
        changed = False
        reps = {}
        for e in els:
            reps.setdefault(find(e), []).append(e)
        for group in reps.values():
            a = group[0]
            for b in group[1:]:
                for c in els:
                    if union(M.add(a, c), M.add(b, c)):
                        changed = True
                if scalars is not None:
                    for s in scalars:
                        if union(M.act(a, s), M.act(b, s)):
                            changed = True
    groups = {}
    for e in els:
        groups.setdefault(find(e), []).append(e)
    classes = [frozenset(g) for g in groups.values()]
    classes.sort(key=lambda c: ordkey(min(c, key=ordkey)))
    class_of = {e: c for c in classes for e in c}
    return Congruence(M, "custom", None, classes, class_of)


def congruence_is_compatible(c: Congruence):
    """Check +/action compatibility; returns (ok, witness)."""
    M = c.ambient
    els = M.elements()
    scalars = M.base.elements if M.base.elements is not None else range(0, 6)
    for cls in c.classes:
        members = sorted_elems(cls)
        a = members[0]
        for b in members[1:]:
            for x in els:
                if c.class_of[M.add(a, x)] is not c.class_of[M.add(b, x)]:
                    return False, (a, b, x)
            for s in scalars:
                if c.class_of[M.act(a, s)] is not c.class_of[M.act(b, s)]:
                    return False, (a, b, s)
    return True, None


def quotient_by_congruence(M, c: Congruence):
    """Quotient module plus the (surjective) projection."""
    if c.kind == "custom":
        ok, w = congruence_is_compatible(c)
        if not ok:
            raise FormatError(f"congruence not compatible, witness {w}")
    reps = [min(cls, key=ordkey) for cls in c.classes]
    rep_of = {e: min(cls, key=ordkey) for cls in c.classes for e in cls}
    add_table = {(a, b): rep_of[M.add(a, b)] for a in reps for b in reps}
    if M.base.elements is not None:
        action = {(a, s): rep_of[M.act(a, s)] for a in reps for s in M.base.elements}
    else:
        action = None
    Q = table_module(M.base, reps, add_table, action, name=f"{M.name}/~")
    pi = LinearMap(M, Q, lambda x: (rep_of[x],), name="pi")
    return Q, pi


def quotient_by_sub(M, L: Subsemimodule):
    return quotient_by_congruence(M, congruence_mod(L))


def cancellative_reflection(M):
    """Universal cancellative quotient M -> M/[~]_{0}; projection returned too."""
    if not M.is_finite:
        if all(not isinstance(a, BoolAtom) for a in M.atoms) and all(
            not isinstance(a, TableAtom) for a in M.atoms
        ):
            # NAT, CYCLIC, QMODZ atoms are already cancellative
            return M, identity_map(M)
        raise UnsupportedError("cancellative reflection of this effective carrier")
    L = span(M, [])
    c = congruence_bracket(L)
    Q, pi = quotient_by_congruence(M, c)
    Q.name = f"c({M.name})"
    return Q, pi


def is_cancellative(M):
    els = M.elements()
    for a in els:
        for b in els:
            for c in els:
                if M.add(a, b) == M.add(a, c) and b != c:
                    return False, (a, b, c)
    return True, None


# ---------------------------------------------------------------- axiom check

def check_semimodule_axioms(M, samples=64, rng_seed=0) -> Report:
    rep = Report(f"semimodule {M.name}")
    rng = random.Random(rng_seed)
    if M.is_finite:
        els = M.elements()
        pairs = [(x, y) for x in els for y in els]
    else:
        rep.sampled = True
        els = [M.sample(rng) for _ in range(samples)] + [M.zero]
        pairs = [(M.sample(rng), M.sample(rng)) for _ in range(samples)]
    if M.base.elements is not None:
        scalars = list(M.base.elements)
        spairs = [(s, t) for s in scalars for t in scalars]
    else:
        rep.sampled = True
        scalars = list(range(0, 6)) + [rng.randrange(0, 32) for _ in range(8)]
        spairs = [(rng.choice(scalars), rng.choice(scalars)) for _ in range(samples)]

    w = next(((x, y) for x, y in pairs if M.add(x, y) != M.add(y, x)), None)
    rep.add("add-commutative", w is None, w)
    w = next(((x,) for x in els if M.add(x, M.zero) != x), None)
    rep.add("add-identity", w is None, w)
    triples = [(x, y, z) for (x, y) in pairs[: 64 * 64] for z in els[:8]] if not M.is_finite else [
        (x, y, z) for x in els for y in els for z in els
    ] if len(els) ** 3 <= 64_000 else [(x, y, rng.choice(els)) for x, y in pairs]
    w = next(
        ((x, y, z) for x, y, z in triples if M.add(M.add(x, y), z) != M.add(x, M.add(y, z))),
        None,
    )
    rep.add("add-associative", w is None, w)

    w = next(((x,) for x in els if M.act(x, M.base.one) != x), None)
    rep.add("act-one", w is None, w)
    w = next(((x,) for x in els if M.act(x, M.base.zero) != M.zero), None)
    rep.add("act-zero-scalar", w is None, w)
    w = next(((s,) for s in scalars if M.act(M.zero, s) != M.zero), None)
    rep.add("act-zero-element", w is None, w)
    w = next(
        (
            (x, s, t)
            for x in els
            for s, t in spairs
            if M.act(x, M.base.add(s, t)) != M.add(M.act(x, s), M.act(x, t))
        ),
        None,
    )
    rep.add("act-distributes-scalar", w is None, w)
    w = next(
        (
            (x, y, s)
            for x, y in pairs
            for s in scalars
            if M.act(M.add(x, y), s) != M.add(M.act(x, s), M.act(y, s))
        ),
        None,
    )
    rep.add("act-distributes-element", w is None, w)
    w = next(
        (
            (x, s, t)
            for x in els
            for s, t in spairs
            if M.act(x, M.base.mul(s, t)) != M.act(M.act(x, s), t)
        ),
        None,
    )
    rep.add("act-associative", w is None, w)
    return rep


# ---------------------------------------------------------------- predicates

def image(f: LinearMap) -> Subsemimodule:
    els = f.source.elements()
    return Subsemimodule(f.target, frozenset(f(x) for x in els))


def kernel(f: LinearMap) -> Subsemimodule:
    els = f.source.elements()
    return Subsemimodule(f.source, frozenset(x for x in els if f(x) == f.target.zero))


def cokernel(f: LinearMap):
    """Coker(f) = target / congruence mod the image."""
    return quotient_by_sub(f.target, image(f))


def k_uniform(f: LinearMap):
    """f(m) = f(m') implies m + k = m' + k' for kernel elements k, k'."""
    M = f.source
    ker = sorted_elems(kernel(f).elements)
    els = M.elements()
    by_val = {}
    for x in els:
        by_val.setdefault(f(x), []).append(x)
    for xs in by_val.values():
        for m, mp in itertools.combinations(xs, 2):
            shifted_m = {M.add(m, k) for k in ker}
            if not any(M.add(mp, k2) in shifted_m for k2 in ker):
                return False, (m, mp)
    return True, None


def map_predicates(f: LinearMap) -> dict:
    M, N = f.source, f.target
    if not (M.is_finite and N.is_finite):
        raise UnsupportedError("map predicates need finite source and target")
    els = M.elements()
    out = {}
    seen = {}
    w = None
    for x in els:
        y = f(x)
        if y in seen:
            w = (seen[y], x)
            break
        seen[y] = x
    out["injective"], out["injective_witness"] = w is None, w
    img = image(f)
    missing = next((y for y in N.elements() if y not in img.elements), None)
    out["surjective"], out["surjective_witness"] = missing is None, missing
    closed = subtractive_closure(img)
    extra = next(iter(sorted_elems(closed.elements - img.elements)), None)
    out["i_uniform"], out["i_uniform_witness"] = extra is None, extra
    ku, kw = k_uniform(f)
    out["k_uniform"], out["k_uniform_witness"] = ku, kw
    out["uniform"] = out["i_uniform"] and out["k_uniform"]
    return out


def induced_first_iso(f: LinearMap):
    """The induced map source/Ker(f) -> image; bijective iff f is k-uniform."""
    Q, pi = quotient_by_sub(f.source, kernel(f))
    mapping = {}
    ok = True
    for x in f.source.elements():
        q = pi(x)
        if q in mapping and mapping[q] != f(x):
            ok = False
        mapping.setdefault(q, f(x))
    if not ok:
        raise FormatError("first-iso map not well defined")  # cannot happen
    img = image(f)
    injective = len(set(mapping.values())) == len(mapping)
    surjective = set(mapping.values()) == set(img.elements)
    return Q, mapping, injective and surjective


# ---------------------------------------------------------------- exactness

MODES = ("exact", "semi", "proper", "quasi")


def joint_verdict(f: LinearMap, g: LinearMap, mode="exact"):
    """Verdict at one joint X -f-> Y -g-> Z."""
    if mode not in MODES:
        raise FormatError(f"unknown exactness mode {mode}")
    img = image(f)
    ker = kernel(g)
    closure = subtractive_closure(img)
    ku, kw = k_uniform(g)
    detail = {
        "image_eq_kernel": img.elements == ker.elements,
        "closure_eq_kernel": closure.elements == ker.elements,
        "g_k_uniform": ku,
    }
    if mode == "exact":
        ok = detail["image_eq_kernel"] and ku
    elif mode == "semi":
        ok = detail["closure_eq_kernel"]
    elif mode == "proper":
        ok = detail["image_eq_kernel"]
    else:
        ok = detail["closure_eq_kernel"] and ku
    return ok, detail


def exactness_check(seq, mode="exact"):
    """Per-joint diagnosis of a composable sequence of maps."""
    for a, b in zip(seq, seq[1:]):
        if a.target is not b.source and not same_carrier(a.target, b.source):
            raise FormatError("sequence not composable")
    joints = []
    ok = True
    for i, (f, g) in enumerate(zip(seq, seq[1:])):
        jok, detail = joint_verdict(f, g, mode)
        joints.append({"at": f.target.name, "ok": jok, **detail})
        ok = ok and jok
    return ok, joints


def short_exact_sequence(L: Subsemimodule):
    """0 -> closure(L) -> M -> M/L -> 0 as a map list."""
    M = L.ambient
    Lbar = subtractive_closure(L)
    Lmod = table_module(
        M.base,
        Lbar.sorted_elements(),
        {(a, b): M.add(a, b) for a in Lbar.elements for b in Lbar.elements},
        None
        if M.base.elements is None
        else {(a, s): M.act(a, s) for a in Lbar.elements for s in M.base.elements},
        name="Lbar",
    )
    # Lmod elements are the ambient elements wrapped in a 1-tuple
    iota = LinearMap(Lmod, M, lambda x: x[0], name="iota")
    Q, pi = quotient_by_sub(M, L)
    Z0 = zero_module(M.base)
    return [zero_map(Z0, Lmod), iota, pi, zero_map(Q, Z0)]


# ---------------------------------------------------------------- hom sets

def _constrained_images(N, constraints):
    """Target elements t with hi*t = lo*t for every (hi, lo) constraint."""
    per_atom = []
    for a in N.atoms:
        cands = None
        if a.finite:
            cands = a.elements()
            for hi, lo in constraints:
                cands = [t for t in cands if a.times_int(t, hi) == a.times_int(t, lo)]
        else:
            for hi, lo in constraints:
                sol = a.solve_mult(hi, lo)
                if sol is not None:
                    cands = sol if cands is None else [t for t in cands if t in set(sol)]
            if cands is None:
                raise UnsupportedError(
                    f"hom target atom {a.kind} admits infinitely many images"
                )
        per_atom.append(cands)
    return [tuple(t) for t in itertools.product(*per_atom)] if per_atom else [()]


def _additive_span(M, gens):
    cur = {M.zero}
    changed = True
    while changed:
        changed = False
        for x in list(cur):
            for g in gens:
                y = M.add(x, g)
                if y not in cur:
                    cur.add(y)
                    changed = True
    return cur


def _greedy_gens(M):
    """Additive generating set: hom extension walks sums of generators only,
    so the span here must not use the scalar action."""
    els = M.elements()
    cur = {M.zero}
    gens = []
    for e in els:
        if e not in cur:
            gens.append(e)
            cur = _additive_span(M, gens)
    return gens


def hom_enumerate(M, N, as_maps=True):
    """All linear maps M -> N for finite M; N finite or with solvable atoms.

    Candidates are generator-image tuples pruned by each generator's cyclic
    constraint, then verified exhaustively for additivity and action.  For a
    free source every basis-image assignment extends uniquely, so no
    verification is needed at all.
    """
    if not M.is_finite:
        raise UnsupportedError("hom enumeration needs a finite source")
    if (
        len(M.atoms) == 1
        and isinstance(M.atoms[0], FreeAtom)
        and M._act_right is None
        and N.is_finite
    ):
        return _hom_from_free(M, N, as_maps)
    gens = _greedy_gens(M)
    cand_sets = []
    for g in gens:
        ip = M.cyclic_constraint(g)
        constraints = [] if ip is None else [(ip[0] + ip[1], ip[0])]
        cand_sets.append(_constrained_images(N, constraints))
    els = M.elements()
    # expressions of each element as sums of generators, found by BFS
    expr = {M.zero: ()}
    frontier = [M.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = M.add(x, g)
                if y not in expr:
                    expr[y] = expr[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    scalars = M.base.elements  # None over NAT: additivity implies NAT-linearity
    out = []
    for images in itertools.product(*cand_sets):
        f = {M.zero: N.zero}
        for x in els:
            val = N.zero
            for i in expr[x]:
                val = N.add(val, images[i])
            f[x] = val
        if any(f[M.add(x, y)] != N.add(f[x], f[y]) for x in els for y in els):
            continue
        if scalars is not None and any(
            f[M.act(x, s)] != N.act(f[x], s) for x in els for s in scalars
        ):
            continue
        out.append(dict(f))
    out.sort(key=lambda m: tuple(ordkey(m[x]) for x in els))
    if not as_maps:
        return out
    return [LinearMap(M, N, m.__getitem__, name=f"h{i}") for i, m in enumerate(out)]


def _hom_from_free(M, N, as_maps):
    rank = len(M.atoms[0].basis)
    S = M.base
    tels = N.elements()
    els = M.elements()
    out = []
    for images in itertools.product(tels, repeat=rank):
        f = {}
        for x in els:
            acc = N.zero
            for i, c in enumerate(x[0]):
                if c != S.zero:
                    acc = N.add(acc, N.act(images[i], c))
            f[x] = acc
        out.append(f)
    out.sort(key=lambda m: tuple(ordkey(m[x]) for x in els))
    if not as_maps:
        return out
    return [LinearMap(M, N, m.__getitem__, name=f"h{i}") for i, m in enumerate(out)]


def hom_module(M, N):
    """The hom set as a module under pointwise addition and action."""
    maps = hom_enumerate(M, N, as_maps=False)
    els = M.elements()
    keys = [tuple(m[x] for x in els) for m in maps]
    key_of = {k: k for k in keys}

    def addk(a, b):
        k = tuple(N.add(x, y) for x, y in zip(a, b))
        if k not in key_of:
            raise FormatError("hom set not closed under addition")
        return k

    add_table = {(a, b): addk(a, b) for a in keys for b in keys}
    if N.base.elements is not None:
        def actk(a, s):
            k = tuple(N.act(x, s) for x in a)
            if k not in key_of:
                raise FormatError("hom set not closed under action")
            return k

        action = {(a, s): actk(a, s) for a in keys for s in N.base.elements}
    else:
        action = None
    H = table_module(N.base, keys, add_table, action, name=f"Hom({M.name},{N.name})")
    H.hom_keys = {k: LinearMap(M, N, dict(zip(els, k)).__getitem__) for k in keys}
    return H


# ---------------------------------------------------------------- dual basis

def dual_basis_projectivity(P, pairs):
    """Verify p = sum p_i * f_i(p) for all p; pairs are (element, functional)."""
    S = P.base
    SM = pairs[0][1].target if pairs else semiring_module(S)
    for p in P.elements():
        acc = P.zero
        for (pl, fl) in pairs:
            acc = P.add(acc, P.act(pl, scalar_of(SM, fl(p))))
        if acc != p:
            return False, p
    return True, None


def search_dual_basis(P, bound=3):
    """Enumerate candidate dual bases up to the size bound; None if absent."""
    SM = semiring_module(P.base)
    functionals = hom_enumerate(P, SM)
    zero_f = [f for f in functionals if all(f(p) == SM.zero for p in P.elements())]
    cands = [
        (p, f)
        for p in P.elements()
        if p != P.zero
        for f in functionals
        if f not in zero_f
    ]
    for r in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(cands, r):
            ok, _ = dual_basis_projectivity(P, list(combo))
            if ok:
                return list(combo)
    return None


# ---------------------------------------------------------------- isomorphism

def find_isomorphism(M, N):
    """Explicit witness map or None; cardinality alone never decides."""
    if not (M.is_finite and N.is_finite):
        raise UnsupportedError("witness search needs finite modules")
    if len(M.elements()) != len(N.elements()):
        return None
    for f in hom_enumerate(M, N):
        preds_inj = len({f(x) for x in M.elements()}) == len(M.elements())
        if preds_inj:
            return f
    return None


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _commutative_monoids(size):
    """Canonical add tables (dicts) of commutative monoids on {0..size-1}, 0 = identity."""
    if size == 1:
        return [((0,),)]  # packed: table[i][j] row-major for i,j >= 0
    idx = list(range(size))
    cells = [(i, j) for i in range(1, size) for j in range(i, size)]
    results = set()

    def canonical(tab):
        best = None
        for perm in itertools.permutations(range(1, size)):
            p = [0] + list(perm)
            inv = [0] * size
            for a, b in enumerate(p):
                inv[b] = a
            key = tuple(
                tuple(inv[tab[(p[i], p[j])] if (p[i], p[j]) in tab else tab[(p[j], p[i])] ] for j in idx)
                for i in idx
            )
            if best is None or key < best:
                best = key
        return best

    def fill(pos, tab):
        if pos == len(cells):
            full = {}
            for i in idx:
                for j in idx:
                    if i == 0:
                        full[(i, j)] = j
                    elif j == 0:
                        full[(i, j)] = i
                    else:
                        full[(i, j)] = tab[(i, j)] if (i, j) in tab else tab[(j, i)]
            for a in idx:
                for b in idx:
                    for c in idx:
                        if full[(full[(a, b)], c)] != full[(a, full[(b, c)])]:
                            return
            results.add(canonical(full))
            return
        i, j = cells[pos]
        for v in idx:
            tab[(i, j)] = v
            # partial associativity prune on filled triples
            fill(pos + 1, tab)
        del tab[(i, j)]

    fill(0, {})
    return sorted(results)


def _additive_endos(size, table):
    els = list(range(size))
    out = []
    for images in itertools.product(els, repeat=size - 1):
        f = (0,) + images
        if all(f[table[a][b]] == table[f[a]][f[b]] for a in els for b in els):
            out.append(f)
    return out


def enumerate_modules(S, max_size, dedupe=True):
    """All semimodule structures over finite S on carriers of size <= max_size.

    Scalar actions are maps S -> End(M) respecting unit, addition and
    multiplication; monoids are taken up to isomorphism.
    """
    if not S.is_finite:
        raise UnsupportedError("module enumeration needs a finite base")
    sels = list(S.elements)
    out = []
    for size in range(1, max_size + 1):
        for packed in _commutative_monoids(size):
            table = [list(row) for row in packed]
            endos = _additive_endos(size, table)
            endo_add = {
                (f, g): tuple(table[f[i]][g[i]] for i in range(size)) for f in endos for g in endos
            }
            idf = tuple(range(size))
            zf = (0,) * size
            free = [s for s in sels if s != S.zero and s != S.one]
            for assign in itertools.product(endos, repeat=len(free)):
                phi = {S.zero: zf, S.one: idf}
                phi.update(dict(zip(free, assign)))
                ok = True
                for s in sels:
                    for t in sels:
                        su = phi[S.add(s, t)]
                        if endo_add[(phi[s], phi[t])] != su:
                            ok = False
                            break
                        comp = tuple(phi[t][phi[s][i]] for i in range(size))
                        if comp != phi[S.mul(s, t)]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                add_table = {(i, j): table[i][j] for i in range(size) for j in range(size)}
                action = {(i, s): phi[s][i] for i in range(size) for s in sels}
                out.append(
                    table_module(S, range(size), add_table, action, name=f"M{size}#{len(out)}")
                )
    if dedupe:
        seen = set()
        uniq = []
        for M in out:
            key = _module_iso_key(M)
            if key not in seen:
                seen.add(key)
                uniq.append(M)
        return uniq
    return out


def _module_iso_key(M):
    els = M.elements()
    n = len(els)
    idx = {e: i for i, e in enumerate(els)}
    zero_i = idx[M.zero]
    others = [i for i in range(n) if i != zero_i]
    best = None
    for perm in itertools.permutations(others):
        p = {zero_i: 0}
        p.update({o: k + 1 for k, o in enumerate(perm)})
        add = tuple(
            tuple(p[idx[M.add(els[a], els[b])]] for b in sorted(p, key=p.get))
            for a in sorted(p, key=p.get)
        )
        act = tuple(
            tuple(p[idx[M.act(els[a], s)]] for s in M.base.elements)
            for a in sorted(p, key=p.get)
        )
        key = (add, act)
        if best is None or key < best:
            best = key
    return best
