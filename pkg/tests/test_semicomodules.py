
import pytest

from semikernel.errors import CertificateError, FormatError
from semikernel.gallery import gallery_coring
from semikernel.semimodules import (
    LinearMap,
    free_semimodule,
    semiring_module,
    zero_module,
)
from semikernel.semirings import bool_semiring
from semikernel.semicomodules import (
    Semicomodule,
    check_comodule,
    cofree_adjunction_check,
    cofree_comodule,
    cogenerator_probe,
    colinear_maps,
    comodule_coequalizer,
    comodule_equalizer,
    comodule_hom_check,
    coring_as_comodule,
    counterexample_equalizer_refusal,
    two_coactions_counterexample,
    verify_coequalizer_universal,
    verify_equalizer_universal,
)

B = bool_semiring()
GL = gallery_coring("grouplike_bool_2")


def test_coring_over_itself():
    assert check_comodule(coring_as_comodule(GL)).ok


def test_planted_violation_detected():
    CC = coring_as_comodule(GL)
    bad = dict(CC.coaction)
    # drop a summand from one coaction value
    key = next(k for k, v in bad.items() if len(v) == 2)
    bad[key] = bad[key][:1]
    M = Semicomodule(GL, CC.carrier, bad, name="planted")
    rep = check_comodule(M)
    assert not rep.ok


def test_cofree_and_adjunction():
    SM = semiring_module(B)
    XC = cofree_comodule(SM, GL)
    assert check_comodule(XC).ok
    # X = A recovers the coring as a comodule over itself
    CC = coring_as_comodule(GL)
    assert len(XC.carrier.elements()) == len(CC.carrier.elements())
    assert cofree_adjunction_check(CC, SM).ok
    assert cofree_adjunction_check(CC, free_semimodule(B, 2)).ok


def test_coaction_is_colinear():
    """The coaction itself is a comodule morphism into the cofree object."""
    CC = coring_as_comodule(GL)
    XC = cofree_comodule(CC.carrier, GL)
    T = XC.base_tensor
    rho = LinearMap(CC.carrier, XC.carrier, CC.rho_norm, name="rho")
    assert comodule_hom_check(rho, CC, XC)


def test_colinear_maps_and_coequalizer():
    CC = coring_as_comodule(GL)
    ends = colinear_maps(CC, CC)
    assert len(ends) == 4
    f, g = ends[1], ends[2]
    coeq, pi = comodule_coequalizer(f, g, CC, CC)
    assert check_comodule(coeq).ok
    ok, w = verify_coequalizer_universal(f, g, CC, CC, coeq, pi, [CC, coeq])
    assert ok, w
    same, _ = comodule_coequalizer(f, f, CC, CC)
    assert len(same.carrier.elements()) == len(CC.carrier.elements())


def test_cokernel_as_coequalizer_with_zero():
    CC = coring_as_comodule(GL)
    ends = colinear_maps(CC, CC)
    zero = next(
        h for h in ends if all(h(m) == CC.carrier.zero for m in CC.carrier.elements())
    )
    f = next(h for h in ends if h is not zero and not _is_identity(h, CC))
    coker, pi = comodule_coequalizer(f, zero, CC, CC)
    # N / f(M): classes collapse the image of f to zero
    img = {f(m) for m in CC.carrier.elements()}
    assert all(pi(x) == pi(CC.carrier.zero) for x in img)


def _is_identity(h, M):
    return all(h(x) == x for x in M.carrier.elements())


def test_equalizer_with_flat_coring():
    CC = coring_as_comodule(GL)
    ends = colinear_maps(CC, CC)
    f, g = ends[1], ends[2]
    eq, iota = comodule_equalizer(f, g, CC, CC)
    assert check_comodule(eq).ok
    ok, w = verify_equalizer_universal(f, g, CC, CC, eq, iota, [CC, eq])
    assert ok, w
    full, _ = comodule_equalizer(f, f, CC, CC)
    assert len(full.carrier.elements()) == len(CC.carrier.elements())


def test_equalizer_refuses_failed_certificate():
    CC = coring_as_comodule(GL)
    ends = colinear_maps(CC, CC)
    with pytest.raises(CertificateError):
        comodule_equalizer(
            ends[1], ends[2], CC, CC, certificate={"mono_flat_on_family": False}
        )


def test_counterexample_reproduction():
    rep, objs = two_coactions_counterexample(4)
    assert rep["rho1_passes"] and rep["rho2_passes"] and rep["ambient_passes"]
    assert rep["distinct"]
    assert rep["iota_colinear_rho1"] and rep["iota_colinear_rho2"]
    assert not rep["mono_flat"]
    assert rep["collapsing_witness"] == (0, 1)


def test_counterexample_equalizer_refusal():
    with pytest.raises(CertificateError):
        counterexample_equalizer_refusal(4)


def test_cogenerator_probe():
    CC = coring_as_comodule(GL)
    ends = colinear_maps(CC, CC)
    f, g = ends[1], ends[2]
    SM = semiring_module(B)
    rep = cogenerator_probe(SM, GL, [(f, g, CC, CC)])
    assert rep["all_separated"]
    rep2 = cogenerator_probe(SM, GL, [(f, f, CC, CC)])
    assert rep2["all_separated"] and rep2["family"][0].get("vacuous")
    Z0 = zero_module(B)
    rep3 = cogenerator_probe(Z0, GL, [(f, g, CC, CC)])
    assert not rep3["all_separated"]
