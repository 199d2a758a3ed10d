from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from urnlab._rational import fmt, to_fraction
from urnlab.errors import CapExceededError, DimensionError, ZeroProbabilityError
from urnlab.measures import ChainProductSpace
from urnlab.urns import (ConditioningEvent, IncreasingFamily, IntervalSpec, UrnModel,
                         assignment_law_oracle, block_weights, conditional_xy_law,
                         event_prob, interval_urn_measure, occupancy, occupancy_law,
                         p_window, tail_event_prob, threshold_urn_measure, weight, window_law)

from conftest import models

F = Fraction


# -- rationals -------------------------------------------------------------------

def test_to_fraction_parses_strings_and_rejects_floats():
    assert to_fraction("6/8") == F(3, 4)
    assert to_fraction(3) == 3
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_fmt_is_reduced():
    assert fmt(F(6, 8)) == "3/4"
    assert fmt(F(4, 2)) == "2"
    assert fmt(F(-1, 3)) == "-1/3"


# -- weights and the oracle --------------------------------------------------

def test_weight_examples(g1234):
    assert weight(g1234, (1, 1)) == 2 * 4
    assert weight(g1234, (0, 1)) == 4
    assert weight(UrnModel([[0, 1], [1, 1]]), (0, 1)) == 0
    assert weight(UrnModel.uniform(3, 4), (3, 0, 2)) == 1
    with pytest.raises(DimensionError):
        weight(g1234, (0,))


def test_oracle_examples(g1234, m2n2):
    law = assignment_law_oracle(g1234)
    assert law[(0, 1)] == F(4, 21)
    assert sum(law.mass.values()) == 1
    assert all(p == F(1, 4) for p in assignment_law_oracle(m2n2).mass.values())


def test_zero_row_rejected():
    with pytest.raises(ZeroProbabilityError, match="total weight zero"):
        UrnModel([[1, 1], [0, 0]])


def test_model_validation():
    with pytest.raises(DimensionError):
        UrnModel([[1, 1], [1]])
    with pytest.raises(ValueError):
        UrnModel([[1, -1]])
    with pytest.raises(DimensionError):
        UrnModel.from_dict({"m": 3, "gamma": [[1, 1]]})


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        assignment_law_oracle(UrnModel.uniform(8, 8), cap=1000)


def test_model_roundtrip():
    model = UrnModel([["1/2", 3], [0, "7/4"]])
    assert UrnModel.from_dict(model.to_dict()) == model
    assert model.to_dict()["gamma"] == [["1/2", "3"], ["0", "7/4"]]


# -- occupancy --------------------------------------------------------------------

def test_occupancy_examples(g1234, m2n2):
    assert occupancy_law(m2n2)[(1, 1)] == F(1, 2)
    assert occupancy_law(g1234)[(2, 0)] == F(1, 7)


def _pushforward_occupancy(model):
    return assignment_law_oracle(model).pushforward(
        lambda s: occupancy(s, model.n), ChainProductSpace((model.m + 1,) * model.n))


def test_occupancy_random_3x3_matches_oracle():
    model = UrnModel([[F(1, 3), 2, F(5, 7)], [0, 1, F(8, 3)], [F(2, 5), F(1, 8), 6]])
    assert occupancy_law(model) == _pushforward_occupancy(model)


@given(models(m_max=5, n_max=3))
def test_occupancy_matches_oracle(model):
    assert occupancy_law(model) == _pushforward_occupancy(model)


@given(models(m_max=4, n_max=4), st.data())
def test_block_laws_match_oracle(model, data):
    n = model.n
    blocks = data.draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=3))
    caps = data.draw(st.lists(st.integers(0, model.m), min_size=len(blocks), max_size=len(blocks)))
    law = occupancy_law(model, blocks, caps)
    expect = assignment_law_oracle(model).pushforward(
        lambda s: tuple(min(sum(1 for j in s if j in b), c) for b, c in zip(blocks, caps)),
        ChainProductSpace(tuple(c + 1 for c in caps)))
    assert law == expect


@given(models(m_max=4, n_max=3), st.data())
def test_cap_independence(model, data):
    # raising caps beyond every distinguished value changes nothing once counts are re-capped
    caps = data.draw(st.lists(st.integers(0, model.m), min_size=model.n, max_size=model.n))
    low = block_weights(model.int_rows(), [(j,) for j in range(model.n)], caps)
    high = block_weights(model.int_rows(), [(j,) for j in range(model.n)], [model.m] * model.n)
    recapped = {}
    for stt, w in high.items():
        key = tuple(min(x, c) for x, c in zip(stt, caps))
        recapped[key] = recapped.get(key, 0) + w
    assert recapped == low


def test_normalized_model_same_law():
    model = UrnModel([[2, 6], [F(1, 3), 1]])
    assert occupancy_law(model) == occupancy_law(model.normalized())


# -- windows ------------------------------------------------------------------------

def test_p_window_examples():
    model = UrnModel.uniform(3, 2)
    assert window_law(model, [0], [3]) == [F(comb(3, k), 8) for k in range(4)]
    assert p_window(model, 1, [1], [3]) == F(3, 7)
    with pytest.raises(ZeroProbabilityError):
        p_window(model, 0, [4], [4])


@given(models(m_max=4, n_max=3), st.data())
def test_window_law_matches_oracle(model, data):
    a = [data.draw(st.integers(0, model.m)) for _ in range(model.n - 1)]
    b = [x + data.draw(st.integers(0, model.m)) for x in a]
    law = assignment_law_oracle(model)
    seq = [F(0)] * (model.m + 1)
    for sigma, p in law.mass.items():
        B = occupancy(sigma, model.n)
        if all(a[j] <= B[j] <= b[j] for j in range(model.n - 1)):
            seq[B[-1]] += p
    if sum(seq) == 0:
        with pytest.raises(ZeroProbabilityError):
            window_law(model, a, b)
    else:
        assert window_law(model, a, b) == [p / sum(seq) for p in seq]


# -- conditional (X, Y) law ----------------------------------------------------------

def test_conditional_xy_example():
    model = UrnModel.uniform(2, 3)
    Q = ConditioningEvent({2: (1, 1)})
    law = conditional_xy_law(model, Q, [0], [1])
    assert law.table == {(1, 0): F(1, 2), (0, 1): F(1, 2)}
    assert law.mu(0) == {1: 1}
    assert law.mu(1) == {0: 1}


def test_conditional_xy_no_conditioning_is_antidiagonal():
    model = UrnModel([[1, 2], [3, F(1, 2)], [2, 2]])
    law = conditional_xy_law(model, ConditioningEvent({}), [0], [1])
    for k in law.x_law():
        assert law.mu(k) == {model.m - k: 1}


def test_conditional_xy_errors(m2n2):
    with pytest.raises(ValueError):
        conditional_xy_law(m2n2, ConditioningEvent({}), [0], [0])
    with pytest.raises(ValueError):
        conditional_xy_law(UrnModel.uniform(2, 3), ConditioningEvent({}), [0], [1])
    with pytest.raises(ZeroProbabilityError):
        conditional_xy_law(UrnModel.uniform(2, 3), ConditioningEvent({2: (3, 3)}), [0], [1])
    with pytest.raises(ValueError):
        ConditioningEvent({0: (2, 1)})


@st.composite
def xy_instances(draw):
    model = draw(models(m_max=4, n_max=4, n_min=2))
    n, m = model.n, model.m
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    I = [j for j in range(n) if labels[j] == 0]
    J = [j for j in range(n) if labels[j] == 1]
    K = [j for j in range(n) if labels[j] == 2]
    windows = {}
    for j in K:
        s = draw(st.integers(0, m))
        windows[j] = (s, draw(st.integers(s, m)))
    return model, ConditioningEvent(windows), I, J


@given(xy_instances())
def test_conditional_xy_matches_oracle(inst):
    model, Q, I, J = inst
    law = assignment_law_oracle(model)
    table = {}
    for sigma, p in law.mass.items():
        B = occupancy(sigma, model.n)
        if Q.admits(B):
            key = (sum(B[j] for j in I), sum(B[j] for j in J))
            table[key] = table.get(key, F(0)) + p
    if not table:
        with pytest.raises(ZeroProbabilityError):
            conditional_xy_law(model, Q, I, J)
        return
    total = sum(table.values())
    got = conditional_xy_law(model, Q, I, J)
    assert got.table == {k: v / total for k, v in table.items()}
    assert sum(got.table.values()) == 1
    assert event_prob(model, Q) == total


# -- interval measures -----------------------------------------------------------

def test_threshold_measure_example(m2n2):
    mu = threshold_urn_measure(m2n2, [1, 1])
    assert mu[(1, 1)] == F(1, 2)
    assert mu[(1, 0)] == mu[(0, 1)] == F(1, 4)
    assert mu[(0, 0)] == 0
    assert threshold_urn_measure(m2n2, [0, 0]).mass == {(1, 1): 1}


def test_identity_cuts_recover_occupancy():
    model = UrnModel([[1, 2, 3], [F(1, 2), 0, 1], [1, 1, 1]])
    mu = interval_urn_measure(model, IntervalSpec.identity(model.m, model.n))
    assert mu == occupancy_law(model)


def test_interval_spec_validation():
    with pytest.raises(ValueError):
        IntervalSpec(2, [[0, 3], [0, 2]])
    with pytest.raises(ValueError):
        IntervalSpec(2, [[0, 2, 2, 3]])
    with pytest.raises(DimensionError):
        interval_urn_measure(UrnModel.uniform(2, 3), IntervalSpec.from_thresholds(2, [1, 1]))


@st.composite
def interval_instances(draw):
    model = draw(models(m_max=4, n_max=3))
    cuts = []
    for _ in range(model.n):
        inner = draw(st.sets(st.integers(1, model.m), max_size=2))
        cuts.append([0] + sorted(inner) + [model.m + 1])
    return model, IntervalSpec(model.m, cuts)


@given(interval_instances())
def test_interval_measure_matches_oracle(inst):
    model, spec = inst
    mu = interval_urn_measure(model, spec)
    expect = assignment_law_oracle(model).pushforward(
        lambda s: tuple(spec.level(j, c) for j, c in enumerate(occupancy(s, model.n))), mu.space)
    assert mu == expect


# -- tail events ---------------------------------------------------------------------

def test_tail_event_examples(m2n2):
    assert tail_event_prob(m2n2, IncreasingFamily.everything(2), [0], [2]) == 1
    assert tail_event_prob(m2n2, IncreasingFamily.nothing(2), [0], [2]) == 0
    A = IncreasingFamily.at_least(2, 1)
    assert tail_event_prob(m2n2, A, [0], [2]) == F(3, 4)
    assert tail_event_prob(m2n2, A, [1], [2]) == F(2, 3)


def test_increasing_family_keeps_minimal_sets():
    A = IncreasingFamily(4, [[0], [0, 1], [2, 3]])
    assert [sorted(s) for s in A.minimal] == [[0], [2, 3]]
    assert {0, 3} in A and {3} not in A


@given(models(m_max=4, n_max=3), st.data())
def test_tail_event_matches_oracle(model, data):
    m, n = model.m, model.n
    gens = data.draw(st.lists(st.sets(st.integers(0, m - 1)), max_size=3))
    A = IncreasingFamily(m, gens)
    a = [data.draw(st.integers(0, m)) for _ in range(n - 1)]
    b = [x + data.draw(st.integers(0, 1)) for x in a]
    num = den = F(0)
    for sigma, p in assignment_law_oracle(model).mass.items():
        B = occupancy(sigma, n)
        if all(a[j] <= B[j] <= b[j] for j in range(n - 1)):
            den += p
            if {i for i in range(m) if sigma[i] == n - 1} in A:
                num += p
    if den == 0:
        with pytest.raises(ZeroProbabilityError):
            tail_event_prob(model, A, a, b)
    else:
        assert tail_event_prob(model, A, a, b) == num / den


# -- the ball-removal identity -------------------------------------------------------

def _joint(model, i, k, Q):
    """Pr(B_i = k and Q) by DP."""
    urns = sorted(Q.urns)
    blocks = [(i,)] + [(j,) for j in urns]
    law = occupancy_law(model, blocks)
    return sum((p for st_, p in law.mass.items()
                if st_[0] == k and all(Q.windows[j][0] <= c <= Q.windows[j][1]
                                       for j, c in zip(urns, st_[1:]))), F(0))


@given(models(m_max=5, n_max=3, m_min=2), st.data())
def test_ball_removal_identity(model, data):
    model = model.normalized()
    m, n = model.m, model.n
    i = data.draw(st.integers(0, n - 1))
    others = [j for j in range(n) if j != i]
    K = data.draw(st.sets(st.sampled_from(others))) if others else set()
    windows = {}
    for j in K:
        s = data.draw(st.integers(0, m))
        windows[j] = (s, data.draw(st.integers(s, m)))
    Q = ConditioningEvent(windows)
    for k in range(m):
        lhs = (k + 1) * _joint(model, i, k + 1, Q)
        rhs = sum((model.gamma[l][i] * _joint(model.restrict(set(range(m)) - {l}), i, k, Q)
                   for l in range(m)), F(0))
        assert lhs == rhs


def test_restrict_and_merge():
    model = UrnModel([[1, 2, 3], [4, 5, 6]])
    assert model.restrict([1]).gamma == ((4, 5, 6),)
    merged = model.merge_urns([[0, 1], [2]])
    assert merged.gamma == ((3, 3), (9, 6))
    assert occupancy_law(merged) == occupancy_law(model, [(0, 1), (2,)])


def test_iid_flag():
    assert UrnModel.iid(3, [1, 2]).iid_flag
    assert not UrnModel([[1, 2], [2, 1]]).iid_flag
