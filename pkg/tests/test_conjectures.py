import itertools
from fractions import Fraction as F

import networkx as nx
import pytest

from urnlab.conjectures import (IdealSpec, WelshInstance, check_nmp_question, farr_check,
                                farr_search, ideal_probability, ideal_probability_bruteforce,
                                nmp_search, preimage_law, qcna_search, qq_check,
                                rayleigh_search, welsh_asymptotics, welsh_bruteforce,
                                welsh_probabilities, welsh_scan, welsh_verdict)
from urnlab.correlation import check_na, check_nc
from urnlab.errors import DimensionError, ZeroProbabilityError
from urnlab.measures import external_field
from urnlab.urns import ConditioningEvent, UrnModel, threshold_urn_measure


# -- three-block example ------------------------------------------------------------

def test_welsh_instance_shape():
    inst = WelshInstance(5)
    assert (inst.t, inst.m) == (8, 29)
    assert [len(b) for b in inst.blocks.values()] == [5, 8, 8, 8]
    assert inst.contains([])
    assert inst.contains(list(inst.blocks["A"]) + list(inst.blocks["B"]))
    assert inst.contains([0, 5, 13])
    assert not inst.contains([0, 5, 13, 21])
    assert not inst.contains([0, 1, 2])
    with pytest.raises(ValueError):
        WelshInstance(0)


def test_welsh_closed_form_matches_enumeration():
    inst = WelshInstance(1)
    assert welsh_probabilities(inst) == welsh_bruteforce(inst)


def test_welsh_probabilities_basic_structure():
    P = welsh_probabilities(WelshInstance(4))
    assert P[()] == 1
    # the three urns are exchangeable
    assert P[(0,)] == P[(1,)] == P[(2,)]
    assert P[(0, 1)] == P[(0, 2)] == P[(1, 2)]
    assert P[(0, 1, 2)] <= P[(0, 1)] <= P[(0,)] <= 1
    assert welsh_probabilities(4, L=[2, 0]) == P[(0, 2)]
    with pytest.raises(DimensionError):
        welsh_probabilities(4, L=[3])


def test_welsh_small_s_not_satisfied():
    v = welsh_verdict(1)
    assert v.holds and v.info["satisfied"] is False
    assert "not yet satisfied" in v.info["note"]
    P = v.info
    assert P["P_2"] * P["P_012"] <= P["P_02"] * P["P_12"]


def test_welsh_first_s():
    assert welsh_verdict(119).holds
    v = welsh_verdict(120)
    assert v.violated
    w = v.witness
    assert w["P_2"] * w["P_012"] > w["P_02"] * w["P_12"]
    # the strict inequality does not persist at the next value
    assert not welsh_verdict(121).violated


def test_welsh_scan_stops_at_first():
    rep = welsh_scan(118, 125)
    assert rep.summary["first_s"] == 120
    assert len(rep.instances) == 3
    assert welsh_scan(1, 20).summary["first_s"] is None


def test_welsh_asymptotics_are_informational():
    out = welsh_asymptotics(200)
    assert all(out[r]["within"] for r in (1, 2, 3))
    assert {r for r in (1, 2, 3) if welsh_asymptotics(10)[r]["within"]} == {1, 2}


def test_welsh_band_for_small_sets_from_t_ten():
    for s in range(7, 60):
        out = welsh_asymptotics(s)
        assert out[1]["within"] and out[2]["within"]
    for s in range(56, 80):
        assert welsh_asymptotics(s)[3]["within"]


# -- decreasing families ---------------------------------------------------------------

def test_ideal_spec():
    tri = IdealSpec.from_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert () in tri and (1,) in tri and (0, 1) not in tri
    with pytest.raises(ValueError):
        IdealSpec(2, [(0, 1)])
    with pytest.raises(ValueError):
        IdealSpec(2, [(0,)])
    fam = IdealSpec.from_maximal(3, [(0, 1), (2,)])
    assert fam.to_dict() == {"m": 3, "maximal": [[0, 1], [2]]}


@pytest.mark.parametrize("edges", [[], [(0, 1)], [(0, 1), (1, 2)], [(0, 1), (1, 2), (0, 2)]])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_ideal_probability_matches_enumeration(edges, r):
    ideal = IdealSpec.from_graph(3, edges)
    p = F(1, 5)
    assert ideal_probability(ideal, r, p) == ideal_probability_bruteforce(ideal, range(r), 3, p)


def test_farr_edgeless_graph_is_product():
    # with no edges every set is independent, so A_L is certain
    v = farr_check((3, []), F(1, 3), [0], [1], [], 3)
    assert v.holds
    assert v.info["P_IJ_given_K"] == v.info["P_I_given_K"] * v.info["P_J_given_K"] == 1


def test_farr_triangle_by_hand():
    G = nx.complete_graph(3)
    p = F(1, 3)
    v = farr_check(G, p, [0], [1], [], 2)
    assert v.holds
    ideal = IdealSpec.from_graph(3, G.edges())
    assert v.info["P_IJ_given_K"] == ideal_probability_bruteforce(ideal, [0, 1], 2, p)
    assert v.info["P_I_given_K"] == ideal_probability_bruteforce(ideal, [0], 2, p)


def test_farr_validation():
    with pytest.raises(ValueError):
        farr_check((2, []), F(1, 2), [0], [0], [], 2)
    with pytest.raises(ValueError):
        farr_check((2, []), F(2, 3), [0], [1], [], 2)
    with pytest.raises(DimensionError):
        farr_check((2, []), F(1, 4), [0], [4], [], 2)


def test_farr_search_deterministic():
    a = farr_search(5, budget=15)
    b = farr_search(5, budget=15)
    assert [v.to_dict() for v in a.verdicts] == [v.to_dict() for v in b.verdicts]
    assert a.summary["violations"] == 0


# -- xi-array and preimage questions -------------------------------------------------

def test_qq_unconstrained_is_na():
    assert qq_check(UrnModel([[1, 2], [3, 1]])).holds


def test_qq_box_constraint_can_break_na():
    # exactly one of two balls in urn 0 forces xi_00 = xi_11
    v = qq_check(UrnModel.uniform(2, 2), parts=[[(0, 0), (1, 0)]], bounds=[(1, 1)])
    assert v.violated
    assert v.witness["parts"] == [[(0, 0), (1, 0)]]


def test_qq_validation():
    with pytest.raises(ValueError):
        qq_check(UrnModel.uniform(2, 2), parts=[[(0, 0)], [(0, 0)]], bounds=[(0, 1), (0, 1)])
    with pytest.raises(ZeroProbabilityError):
        qq_check(UrnModel.uniform(2, 2), parts=[[(0, 0)]], bounds=[(2, 2)])


def test_nmp_question_examples():
    assert check_nmp_question(UrnModel.uniform(3, 2), ConditioningEvent({}), [0]).holds
    model = UrnModel([[1, 2, 1], [2, 1, 1], [1, 1, 3]])
    mu = preimage_law(model, ConditioningEvent({}), [0, 1, 2])
    assert mu.prob(lambda x: all(x)) == 1
    assert check_nmp_question(model, ConditioningEvent({2: (1, 2)}), [0]).holds


def test_searches_are_deterministic():
    for fn in (qcna_search, nmp_search):
        a, b = fn(3, budget=10), fn(3, budget=10)
        assert [v.to_dict() for v in a.verdicts] == [v.to_dict() for v in b.verdicts]


def test_qcna_iid_models_never_violate():
    rep = qcna_search(1, budget=30, iid_fraction=1.0)
    assert not any(x.get("contradicts_iid_theorem") for x in rep.instances)
    assert all(not v.violated for v in rep.verdicts)


# -- Rayleigh witness ---------------------------------------------------------------

RAYLEIGH_WEIGHTS = [F(2, 3), F(7, 6), F(8), F(8)]


def _occupancy_pair(weights, field, i, j):
    """Pr(X_i X_j = 1) and Pr(X_i) Pr(X_j) under the tilted law, from scratch (two balls)."""
    total = sum(weights)
    p = [w / total for w in weights]
    law = {}
    for a, b in itertools.product(range(len(p)), repeat=2):
        x = tuple(int(k in (a, b)) for k in range(len(p)))
        law[x] = law.get(x, 0) + p[a] * p[b]
    tilted = {}
    for x, q in law.items():
        for k, v in enumerate(x):
            if v:
                q *= field[k]
        tilted[x] = q
    Z = sum(tilted.values())
    pi = sum(q for x, q in tilted.items() if x[i]) / Z
    pj = sum(q for x, q in tilted.items() if x[j]) / Z
    pij = sum(q for x, q in tilted.items() if x[i] and x[j]) / Z
    return pij, pi * pj


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_rayleigh_witness(k):
    mu = threshold_urn_measure(UrnModel.iid(2, RAYLEIGH_WEIGHTS), [1] * 4)
    assert check_nc(mu).holds
    field = [F(1, 4), F(1, 4), F(1, 10 ** k), F(1, 4)]
    assert check_nc(external_field(mu, field)).violated
    joint, product = _occupancy_pair(RAYLEIGH_WEIGHTS, field, 0, 1)
    assert joint > product


def test_rayleigh_search_reports_witness():
    rep = rayleigh_search(0, budget=40)
    found = [v for v in rep.verdicts if v.violated]
    for v in found:
        model = UrnModel.from_dict(v.witness["model"])
        mu = threshold_urn_measure(model, [1] * model.n)
        assert check_nc(external_field(mu, v.witness["field"])).violated
    assert [v.status for v in rayleigh_search(0, budget=40).verdicts] == [v.status for v in rep.verdicts]


def test_unconditioned_occupancy_is_na():
    mu = threshold_urn_measure(UrnModel.iid(2, RAYLEIGH_WEIGHTS), [1] * 4)
    assert check_na(mu).holds
