"""Certification rules, skein triples, collapse and Floer readouts."""

import random

import pytest

from bosco.analysis import (AnalysisError, certify, certify_e_family,
                            collapse_check, goeritz_det, height_census,
                            infer_hf, les_consistency, lspace_test,
                            skein_resolve, skein_triple)
from bosco.diagram import black_graph
from bosco.fixtures import basic_knots, e_family, wheel_graph
from bosco.planar import PlanarGraph, canonical_code
from bosco.treecomplex import TreeComplex


def single_edge(height):
    return PlanarGraph(
        {"e": (1, 2)},
        {1: [("e", 0)], 2: [("e", 1)]},
        outer_dart=("e", 0),
        heights={"e": height},
        base=1,
    )


# -- resolutions -----------------------------------------------------------

def test_resolution_kinds_follow_the_height():
    g = wheel_graph(3, 3)
    rim0, rim1 = skein_resolve(g, "a11")
    assert (rim0.kind, rim0.shift) == ("contract", 0)
    assert (rim1.kind, rim1.shift) == ("delete", 1)
    spoke0, spoke1 = skein_resolve(g, "e0")
    assert (spoke0.kind, spoke0.shift) == ("delete", 0)
    assert (spoke1.kind, spoke1.shift) == ("contract", 1)


def test_resolving_a_single_edge():
    zero, one = skein_resolve(single_edge(0), "e")
    assert TreeComplex(zero.graph).dims() == {0: 1}
    # deleting the only edge splits the graph, so no spanning trees
    assert TreeComplex(one.graph).dims() == {}


def test_resolution_rejects_missing_and_loop_edges():
    g = wheel_graph(3, 3)
    with pytest.raises(AnalysisError):
        skein_resolve(g, "nope")
    loop = PlanarGraph(
        {"a": (1, 1)}, {1: [("a", 0), ("a", 1)]},
        outer_dart=("a", 0), heights={"a": 0}, base=1)
    with pytest.raises(AnalysisError):
        skein_resolve(loop, "a")


def test_height_census_matches_complex_dimensions():
    rng = random.Random(7)
    for gaps in [(3, 3), (3, 3, 1), (2, 3, 2)]:
        g = wheel_graph(*gaps)
        assert height_census(g) == TreeComplex(g).dims()


# -- certification rules ---------------------------------------------------

def test_trace_pin_certifies_the_smallest_wheel():
    cert = certify(wheel_graph(3, 3))
    assert cert.all_certified
    assert cert.ranks == {2: 3, 4: 0}
    assert cert.determinant == 3
    assert any("determinant" in line for line in cert.basis)


def test_witness_certifies_the_parallel_pair_wheel():
    cert = certify(wheel_graph(3, 3, 0))
    assert cert.all_certified
    assert cert.ranks == {2: 1, 4: 1}
    assert cert.determinant == 0
    assert any("row space" in line for line in cert.basis)


def test_zero_branch_chain_certifies_the_wheel_family():
    memo = {}
    for k in (1, 2, 3):
        cert = certify(wheel_graph(3, 3, k), _memo=memo)
        assert cert.all_certified
        assert cert.ranks == {2: 1, 4: 1, 6: 0}


def test_companion_route_certifies_the_two_spoke_wheel():
    cert = certify(wheel_graph(3, 6))
    assert cert.all_certified
    assert cert.ranks == {2: 1, 4: 1}
    assert any("companion" in line for line in cert.basis)


def test_split_graph_certifies_as_the_zero_complex():
    g = PlanarGraph({}, {1: [], 2: []}, heights={}, base=1)
    cert = certify(g)
    assert cert.all_certified
    assert cert.total == 0
    assert cert.dims == {}


def test_certified_ranks_do_not_depend_on_the_base():
    rng = random.Random(19)
    for _ in range(3):
        base = rng.choice([0, 2, 5])
        cert = certify(wheel_graph(3, 3, 1, base=base))
        assert cert.all_certified
        assert cert.ranks == {2: 1, 4: 1, 6: 0}


def test_chain_family_certification():
    for k, tail in ((2, 0), (3, 1)):
        cert = certify_e_family(k)
        assert cert.all_certified
        assert cert.ranks == {1: 0, 3: 1, 5: 1, 7: tail, 9: 0}
        assert cert.determinant == k - 2
    with pytest.raises(AnalysisError):
        certify_e_family(1)


def test_chain_family_induction_step():
    cert = certify_e_family(4)
    assert cert.all_certified
    assert cert.ranks == {1: 0, 3: 1, 5: 1, 7: 2, 9: 0}
    assert any("two shorter chains" in line for line in cert.basis)


# -- triples and the exact sequence ----------------------------------------

def test_triple_with_a_vanishing_branch():
    t = skein_triple(wheel_graph(3, 3, 1), "a31")
    assert t.cert.all_certified and t.cert0.all_certified
    assert "vanishes" in t.conclusion
    report = les_consistency(t)
    assert report["ok"]
    assert report["deltas"] == {}


def test_triple_relating_the_two_wheel_shapes():
    t = skein_triple(wheel_graph(3, 3, 3), "e0")
    assert t.cert0.ranks == {2: 1, 4: 1}
    assert canonical_code(t.zero.graph) == canonical_code(wheel_graph(3, 6))
    assert les_consistency(t)["ok"]


def test_les_rejects_a_corrupted_triple():
    t = skein_triple(wheel_graph(3, 3, 1), "a31")
    t.cert.ranks[2] += 1
    report = les_consistency(t)
    assert not report["ok"]
    assert "height" in report["reason"]


def test_les_rejects_an_uncertified_triple():
    t = skein_triple(wheel_graph(3, 3, 1), "a31")
    t.cert1.certified[next(iter(t.cert1.certified))] = False
    report = les_consistency(t)
    assert not report["ok"]
    assert "uncertified" in report["reason"]


# -- collapse and Floer readouts -------------------------------------------

def test_collapse_examples():
    assert collapse_check({3: 1, 5: 1, 7: 2})
    assert collapse_check({0: 5})
    assert collapse_check({})
    verdict = collapse_check({2: 1, 8: 1})
    assert not verdict
    assert verdict.pairs == [(2, 8)]
    # a gap of four never blocks, a gap of ten does
    assert collapse_check({1: 1, 5: 1})
    assert not collapse_check({1: 1, 11: 1})


def test_collapse_is_monotone_under_dropping_heights():
    rng = random.Random(23)
    for _ in range(50):
        ranks = {2 * rng.randrange(12): rng.randrange(3) for _ in range(6)}
        if collapse_check(ranks):
            for h in list(ranks):
                thinner = dict(ranks)
                del thinner[h]
                assert collapse_check(thinner)


def test_floer_readouts_on_certified_wheels():
    c33 = certify(wheel_graph(3, 3))
    assert infer_hf(c33) == (3, None)
    assert lspace_test(c33) == (True, None)
    c330 = certify(wheel_graph(3, 3, 0))
    rank, reason = infer_hf(c330)
    assert rank is None and "determinant" in reason
    verdict, reason = lspace_test(c330)
    assert verdict is False and "determinant" in reason


def test_floer_readouts_on_the_chain_family():
    cert = certify_e_family(3)
    assert infer_hf(cert) == (3, None)
    verdict, reason = lspace_test(cert)
    assert verdict is False
    assert "exceeds the determinant" in reason


def test_lspace_forces_the_inferred_rank_to_match():
    for cert in (certify(wheel_graph(3, 3)), certify_e_family(2)):
        verdict, _ = lspace_test(cert)
        if verdict:
            assert infer_hf(cert) == (cert.determinant, None)


def test_uncertified_readouts_refuse():
    cert = certify(wheel_graph(3, 3))
    cert.certified[2] = False
    assert infer_hf(cert)[0] is None
    assert lspace_test(cert)[0] is None


def test_goeritz_oracle_matches_the_complex_determinant():
    for name, d in sorted(basic_knots().items()):
        assert goeritz_det(d) == TreeComplex(black_graph(d)).determinant()
