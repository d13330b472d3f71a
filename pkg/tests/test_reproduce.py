import json

import pytest

from scaled_flp import reproduce
from scaled_flp.reproduce import CASES


@pytest.mark.parametrize("case_id", list(CASES))
def test_case_passes(case_id):
    rep = reproduce(case_id)
    assert rep.passed, [c.to_dict() for c in rep.checks if not c.passed]
    json.dumps(rep.to_dict())


def test_thirteen_cases():
    assert len(CASES) == 13
    assert len(reproduce("all")) == 13


def test_fig1_numbers():
    rep = reproduce("fig1")
    got = {c.name: c.actual for c in rep.checks}
    assert len(rep.checks) == 4
    assert got["median TC"] == pytest.approx(1.2, abs=1e-9)
    assert got["midpoint MC"] == pytest.approx(0.33, abs=1e-9)
    assert got["optimal TC [position, value]"] == pytest.approx([0.5, 0.55], abs=1e-9)
    assert got["optimal MC [position, value]"] == pytest.approx([0.5, 0.25], abs=1e-9)
    assert rep.details == {"median_facility": 0.0, "midpoint_facility": pytest.approx(0.3)}


def test_median_not_sp_costs():
    rep = reproduce("median_not_sp")
    vals = [c.actual for c in rep.checks]
    assert pytest.approx(0.6) in vals and pytest.approx(0.4) in vals


def test_seeded_cases_are_deterministic():
    a = reproduce("phantom_not_sp_case1", seed=3).to_dict()
    b = reproduce("phantom_not_sp_case1", seed=3).to_dict()
    assert a == b


def test_unknown_case():
    with pytest.raises(KeyError):
        reproduce("fig2")
