"""Semicomodules: coactions, colinear maps, (co)equalizers and probes.

Coactions are stored as formal sums of (carrier element, coring element)
pairs, normalized through the computed tensor before equality tests.  The
structured lane mirrors every check symbolically for infinite carriers.
"""
from __future__ import annotations

from fractions import Fraction

from .atoms import CyclicAtom, QmodzAtom
from .errors import CertificateError, FormatError, UnsupportedError
from .semimodules import (
    LinearMap,
    Semimodule,
    hom_enumerate,
    identity_map,
    module_congruence_closure,
    quotient_by_congruence,
    span,
    table_module,
)
from .structured import (
    StructuredMap,
    rule_tensor,
    structured_identity,
    structured_map_tensor,
    structured_mono_flat_probe,
)
from .tensors import tensor, tensor_multi
from .util import Report, fs_make, ordkey


class Semicomodule:
    """Finite right semicomodule: carrier M over A with coaction into M (x) C."""

    structured = False

    def __init__(self, coring, carrier, coaction, name="M"):
        self.coring = coring
        self.carrier = carrier
        self.coaction = dict(coaction)  # element -> formal sum (((m, c), mult), ...)
        self.name = name
        self._mc = None

    def mc(self):
        if self._mc is None:
            self._mc = tensor(self.carrier, self.coring.carrier, over=self.coring.base)
        return self._mc

    def rho_norm(self, m):
        T = self.mc()
        acc = T.result.zero
        for (m1, c1), mult in self.coaction[m]:
            acc = T.result.add(acc, T.result.times_int(T.pure(m1, c1), mult))
        return acc

    def __repr__(self):
        return f"<Semicomodule {self.name} over {self.coring.name}>"


class StructuredSemicomodule:
    structured = True

    def __init__(self, coring, carrier, rho: StructuredMap, name="M"):
        self.coring = coring
        self.carrier = carrier
        self.rho = rho  # StructuredMap carrier -> rule_tensor(carrier, C).result
        self.mc_tensor = rho.target_tensor
        self.name = name

    def __repr__(self):
        return f"<StructuredSemicomodule {self.name} over {self.coring.name}>"


# ---------------------------------------------------------------- checking

def check_comodule(M) -> Report:
    if M.structured:
        return _check_comodule_structured(M)
    rep = Report(f"comodule {M.name}")
    C = M.coring
    car = M.carrier
    els = car.elements()
    T = M.mc()
    rho = {m: M.rho_norm(m) for m in els}

    w = next(
        (
            (x, y)
            for x in els
            for y in els
            if rho[car.add(x, y)] != T.result.add(rho[x], rho[y])
        ),
        None,
    )
    rep.add("coaction-additive", w is None, w)
    w = next(
        (
            (x, s)
            for x in els
            for s in C.base.elements
            if rho[car.act(x, s)] != T.result.act(rho[x], s)
        ),
        None,
    )
    rep.add("coaction-linear", w is None, w)

    # counit triangle doubles as the splitting retraction for the coaction
    w = None
    for m in els:
        acc = car.zero
        for (m1, c1), mult in M.coaction[m]:
            acc = car.add(acc, car.times_int(car.act(m1, C.eps[c1]), mult))
        if acc != m:
            w = (m, acc)
            break
    rep.add("counit-law", w is None, w)
    rep.add("coaction-splits", w is None, w)

    from .semicorings import _lazy_ops

    T3 = tensor_multi([car, C.carrier, C.carrier], over=C.base, lazy=True)
    zero, vadd, vtimes, pure3, nf = _lazy_ops(T3)
    w = None
    for m in els:
        lhs = zero
        rhs = zero
        for (m1, c1), mult in M.coaction[m]:
            for (m11, c11), mult2 in M.coaction[m1]:
                lhs = vadd(lhs, vtimes(pure3(m11, c11, c1), mult * mult2))
            for (c11, c12), mult2 in C.delta[c1]:
                rhs = vadd(rhs, vtimes(pure3(m1, c11, c12), mult * mult2))
        if nf(lhs) != nf(rhs):
            w = m
            break
    rep.add("coassociative", w is None, w)
    return rep


def _check_comodule_structured(M) -> Report:
    rep = Report(f"comodule {M.name}")
    C = M.coring
    car = M.carrier
    TM = M.mc_tensor
    rho, delta = M.rho, C._delta
    idC = structured_identity(C.carrier)
    idM = structured_identity(car)
    Ta = rule_tensor(TM.result, C.carrier, over=C.base)
    Tb = rule_tensor(car, C.cc_tensor.result, over=C.base)
    if [a.describe() for a in Ta.result.atoms] != [a.describe() for a in Tb.result.atoms]:
        raise UnsupportedError("triple tensor atom layouts differ")
    lhs = structured_map_tensor(rho, idC, TM, Ta).compose(rho)
    rhs = structured_map_tensor(idM, delta, TM, Tb).compose(rho)
    rep.add("coassociative", lhs.descrs == rhs.descrs, (lhs.descrs, rhs.descrs))

    eps = C._eps
    Tr = rule_tensor(car, eps.target, over=C.base)
    if [a.describe() for a in Tr.result.atoms] != [a.describe() for a in car.atoms]:
        raise UnsupportedError("unit tensor layout differs from the carrier")
    counit = structured_map_tensor(idM, eps, TM, Tr).compose(rho)
    ident = structured_identity(car)
    rep.add("counit-law", counit.descrs == ident.descrs, counit.descrs)
    rep.add("coaction-splits", counit.descrs == ident.descrs)
    return rep


def comodule_hom_check(f: LinearMap, M: Semicomodule, N: Semicomodule) -> bool:
    """Colinearity square: (f (x) C) . rho_M = rho_N . f."""
    C = M.coring
    TN = N.mc()
    for m in M.carrier.elements():
        lhs = TN.result.zero
        for (m1, c1), mult in M.coaction[m]:
            lhs = TN.result.add(lhs, TN.result.times_int(TN.pure(f(m1), c1), mult))
        if lhs != N.rho_norm(f(m)):
            return False
    return True


def colinear_maps(M: Semicomodule, N: Semicomodule):
    return [f for f in hom_enumerate(M.carrier, N.carrier) if comodule_hom_check(f, M, N)]


# ---------------------------------------------------------------- cofree

def cofree_comodule(X, C, name=None):
    """(X (x) C, X (x) Delta): the right adjoint to the forgetful functor."""
    T = tensor(X, C.carrier, over=C.base)
    car = T.result
    coaction = {}
    for x in car.elements():
        terms = []
        for (xm, c), mult in T.rep(x):
            for (c1, c2), mult2 in C.delta[c]:
                terms.append(((T.pure(xm, c1), c2), mult * mult2))
        coaction[x] = fs_make(terms)
    M = Semicomodule(C, car, coaction, name=name or f"{X.name}(x){C.name}")
    M.base_tensor = T
    return M


def coring_as_comodule(C):
    """(C, Delta) as a right semicomodule over itself."""
    return Semicomodule(C, C.carrier, dict(C.delta), name=f"({C.name},Delta)")


def cofree_adjunction_check(Y: Semicomodule, X) -> Report:
    """|Hom^C(Y, X (x) C)| = |Hom_A(Y, X)| with the unit/counit formulas."""
    rep = Report(f"cofree adjunction {Y.name} vs {X.name}")
    C = Y.coring
    XC = cofree_comodule(X, C)
    colin = colinear_maps(Y, XC)
    homs = hom_enumerate(Y.carrier, X)
    rep.add("hom-count", len(colin) == len(homs), (len(colin), len(homs)))
    T = XC.base_tensor
    # forward: f -> theta . (X (x) eps) . f, then back; must round-trip
    w = None
    for f in colin:
        def phi(y, f=f):
            acc = X.zero
            for (xm, c), mult in T.rep(f(y)):
                acc = X.add(acc, X.times_int(X.act(xm, C.eps[c]), mult))
            return acc

        def back(y, phi=phi):
            acc = T.result.zero
            for (y1, c1), mult in Y.coaction[y]:
                acc = T.result.add(acc, T.result.times_int(T.pure(phi(y1), c1), mult))
            return acc

        if any(back(y) != f(y) for y in Y.carrier.elements()):
            w = f.name
            break
    rep.add("round-trip", w is None, w)
    return rep


# ---------------------------------------------------------------- colimits

def comodule_coequalizer(f: LinearMap, g: LinearMap, M: Semicomodule, N: Semicomodule):
    """Coequalizer computed in the module category, with the induced coaction
    verified (diagram chase re-done concretely)."""
    C = N.coring
    pairs = [(f(m), g(m)) for m in M.carrier.elements()]
    cong = module_congruence_closure(N.carrier, pairs)
    Q, pi = quotient_by_congruence(N.carrier, cong)
    TQ = tensor(Q, C.carrier, over=C.base)
    coaction = {}
    for cls in cong.classes:
        members = sorted(cls, key=ordkey)
        q = pi(members[0])
        pushes = set()
        formal = None
        for n in members:
            terms = [((pi(n1), c1), mult) for (n1, c1), mult in N.coaction[n]]
            acc = TQ.result.zero
            for (q1, c1), mult in terms:
                acc = TQ.result.add(acc, TQ.result.times_int(TQ.pure(q1, c1), mult))
            pushes.add(acc)
            if formal is None:
                formal = fs_make(terms)
        if len(pushes) != 1:
            raise FormatError(f"induced coaction not well defined at {q}")
        coaction[q] = formal
    out = Semicomodule(C, Q, coaction, name=f"Coeq({f.name},{g.name})")
    rep = check_comodule(out)
    if not rep.ok:
        raise FormatError(f"coequalizer fails comodule axioms: {rep.first_witness()}")
    return out, pi


def verify_coequalizer_universal(f, g, M, N, coeq, pi, candidates):
    """Universal property against every enumerated colinear competitor."""
    for T in candidates:
        for h in colinear_maps(N, T):
            if any(h(f(m)) != h(g(m)) for m in M.carrier.elements()):
                continue
            # factorization: unique hbar with hbar . pi = h
            hbar = {}
            ok = True
            for n in N.carrier.elements():
                q = pi(n)
                if q in hbar and hbar[q] != h(n):
                    ok = False
                    break
                hbar[q] = h(n)
            if not ok:
                return False, (h.name, T.name)
            hb = LinearMap(coeq.carrier, T.carrier, hbar.__getitem__, name="hbar")
            if not comodule_hom_check(hb, coeq, T):
                return False, (h.name, T.name, "factor not colinear")
    return True, None


def comodule_equalizer(f: LinearMap, g: LinearMap, M: Semicomodule, N: Semicomodule, certificate=None):
    """Equalizer formed in modules, legitimate only under a flatness certificate.

    The needed certificate is that - (x) C preserves the inclusion of the
    equalizer; without it the construction is unsound and is refused.
    """
    C = M.coring
    eq_els = [m for m in M.carrier.elements() if f(m) == g(m)]
    sub = span(M.carrier, eq_els)
    if sub.elements != frozenset(eq_els):
        raise FormatError("equalizer subset is not a submodule")  # cannot happen
    E = table_module(
        C.base,
        sorted(eq_els, key=ordkey),
        {(a, b): M.carrier.add(a, b) for a in eq_els for b in eq_els},
        None
        if C.base.elements is None
        else {(a, s): M.carrier.act(a, s) for a in eq_els for s in C.base.elements},
        name=f"Eq({f.name},{g.name})",
    )
    iota = LinearMap(E, M.carrier, lambda x: x[0], name="eq-incl")
    if certificate is not None and not certificate.get("mono_flat_on_family", False):
        raise CertificateError(
            "flatness certificate failed; equalizer cannot be formed in modules"
        )
    TE = tensor(E, C.carrier, over=C.base)
    TM = M.mc()
    FI = TE.map_of([iota, identity_map(C.carrier)], TM)
    images = {}
    for x in TE.result.elements():
        y = FI(x)
        if y in images:
            raise CertificateError(
                f"tensoring does not preserve the equalizer inclusion (collapse at {x})"
            )
        images[y] = x
    coaction = {}
    for e in E.elements():
        target = M.rho_norm(e[0])
        if target not in images:
            raise CertificateError(
                f"coaction of {e} does not restrict to the equalizer"
            )
        x = images[target]
        coaction[e] = fs_make(
            [(((em,), c), mult) for ((em,), c), mult in _rep_pairs(TE, x)]
        )
    out = Semicomodule(C, E, coaction, name=f"Eq({f.name},{g.name})")
    rep = check_comodule(out)
    if not rep.ok:
        raise FormatError(f"equalizer fails comodule axioms: {rep.first_witness()}")
    return out, iota


def _rep_pairs(T, x):
    return [((m, c), mult) for (m, c), mult in T.rep(x)]


def verify_equalizer_universal(f, g, M, N, eq, iota, candidates):
    for T in candidates:
        for h in colinear_maps(T, M):
            if any(f(h(t)) != g(h(t)) for t in T.carrier.elements()):
                continue
            lift = {}
            ok = True
            eq_index = {iota(e): e for e in eq.carrier.elements()}
            for t in T.carrier.elements():
                v = h(t)
                if v not in eq_index:
                    ok = False
                    break
                lift[t] = eq_index[v]
            if not ok:
                return False, (h.name, T.name)
            lf = LinearMap(T.carrier, eq.carrier, lift.__getitem__, name="lift")
            if not comodule_hom_check(lf, T, eq):
                return False, (h.name, T.name, "lift not colinear")
    return True, None


# ---------------------------------------------------------------- probes

def cogenerator_probe(Q, C, family):
    """Does Q (x) C separate each given pair of distinct colinear maps?"""
    QC = cofree_comodule(Q, C)
    T = QC.base_tensor
    results = []
    ok = True
    for (f, g, M, N) in family:
        if all(f(m) == g(m) for m in M.carrier.elements()):
            results.append({"pair": (f.name, g.name), "separated": True, "vacuous": True})
            continue
        sep = None
        for phi in hom_enumerate(N.carrier, Q):
            def h(n, phi=phi):
                acc = T.result.zero
                for (n1, c1), mult in N.coaction[n]:
                    acc = T.result.add(acc, T.result.times_int(T.pure(phi(n1), c1), mult))
                return acc

            if any(h(f(m)) != h(g(m)) for m in M.carrier.elements()):
                sep = phi
                break
        results.append({"pair": (f.name, g.name), "separated": sep is not None})
        ok = ok and sep is not None
    return {"all_separated": ok, "family": results}


# ---------------------------------------------------------------- counterexample

def two_coactions_counterexample(n):
    """Two distinct subcomodule structures on Z/n inside Q/Z over the
    NAT + CYCLIC(n) coalgebra, plus the failing mono-flat probe."""
    from .semicorings import counterexample_semicoalgebra

    C = counterexample_semicoalgebra(n)
    N = C.base
    car = C.carrier

    Qz = Semimodule(N, [QmodzAtom(N)], name="Q/Z")
    TQ = rule_tensor(Qz, car)
    rho_m = StructuredMap(Qz, TQ.result, [("qmz", {0: 1})], name="rho_M")
    rho_m.target_tensor = TQ
    Mcom = StructuredSemicomodule(C, Qz, rho_m, name="Q/Z")

    Zn = Semimodule(N, [CyclicAtom(N, n)], name=f"Z/{n}")
    TZ = rule_tensor(Zn, car)
    # components: CYC (x) NAT and CYC (x) CYC, both CYCLIC(n)
    rho1 = StructuredMap(Zn, TZ.result, [("gen", (1, 0))], name="rho1")
    rho1.target_tensor = TZ
    rho2 = StructuredMap(Zn, TZ.result, [("gen", (1, 1))], name="rho2")
    rho2.target_tensor = TZ
    N1 = StructuredSemicomodule(C, Zn, rho1, name=f"(Z/{n},rho1)")
    N2 = StructuredSemicomodule(C, Zn, rho2, name=f"(Z/{n},rho2)")

    iota = StructuredMap(Zn, Qz, [("gen", (Fraction(1, n),))], name="iota")

    report = {
        "rho1_passes": check_comodule(N1).ok,
        "rho2_passes": check_comodule(N2).ok,
        "ambient_passes": check_comodule(Mcom).ok,
        "distinct": rho1.descrs != rho2.descrs,
    }
    idC = structured_identity(car)
    pushed1 = structured_map_tensor(iota, idC, TZ, TQ).compose(rho1)
    pushed2 = structured_map_tensor(iota, idC, TZ, TQ).compose(rho2)
    target = rho_m.compose(iota)
    report["iota_colinear_rho1"] = pushed1.descrs == target.descrs
    report["iota_colinear_rho2"] = pushed2.descrs == target.descrs
    probe = structured_mono_flat_probe(car, [iota])
    report["mono_flat"] = probe["mono_flat_on_family"]
    report["collapsing_witness"] = probe["family"][0]["collapsing_witness"]
    return report, (Mcom, N1, N2, iota, probe)


def counterexample_equalizer_refusal(n):
    """mult-by-n against zero on Q/Z: the equalizer is Z/n, whose inclusion
    collapses under - (x) C; the construction must refuse."""
    from .semicorings import counterexample_semicoalgebra

    C = counterexample_semicoalgebra(n)
    base = C.base
    Qz = Semimodule(base, [QmodzAtom(base)], name="Q/Z")
    # equalizer of (mult n, 0) is the n-torsion Z/n
    Zn = Semimodule(base, [CyclicAtom(base, n)], name=f"Z/{n}")
    iota = StructuredMap(Zn, Qz, [("gen", (Fraction(1, n),))], name="eq-incl")
    probe = structured_mono_flat_probe(C.carrier, [iota])
    if probe["mono_flat_on_family"]:
        raise FormatError("expected the certificate to fail")
    raise CertificateError(
        "flatness certificate failed; equalizer cannot be formed in modules "
        f"(witness {probe['family'][0]['collapsing_witness']})"
    )
