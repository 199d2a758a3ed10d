import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from urnlab.urns import UrnModel

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


small_weight = st.builds(Fraction, st.integers(0, 8), st.integers(1, 8))
positive_weight = st.builds(Fraction, st.integers(1, 8), st.integers(1, 8))


@st.composite
def models(draw, m_max=4, n_max=3, m_min=1, n_min=2, iid=None, positive=False):
    m = draw(st.integers(m_min, m_max))
    n = draw(st.integers(n_min, n_max))
    w = positive_weight if positive else small_weight
    row = st.lists(w, min_size=n, max_size=n).filter(any)
    if iid is None:
        iid = draw(st.booleans())
    if iid:
        return UrnModel.iid(m, draw(row))
    return UrnModel(draw(st.lists(row, min_size=m, max_size=m)))


@pytest.fixture
def m2n2():
    return UrnModel.uniform(2, 2)


@pytest.fixture
def g1234():
    return UrnModel([[1, 2], [3, 4]])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
