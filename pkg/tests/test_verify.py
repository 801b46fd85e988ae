import json

import pytest

from superprop.verify import SUITES, VerificationReport, run_suite

FAST = [("theta-translations", {}), ("kontsevich", {}), ("boundary", {"n": 3}),
        ("reflections", {"n": 4}), ("swap", {"n": 6}), ("diagonal", {"n": 2}),
        ("zero-set", {"n": 4}), ("cohomology", {"n": 7})]


@pytest.mark.parametrize("name, kwargs", FAST)
def test_fast_suites_pass(name, kwargs):
    rep = run_suite(name, **kwargs)
    assert rep.passed, rep.summary_lines()
    assert json.loads(json.dumps(rep.to_dict()))["suite"] == name


def test_report_bookkeeping():
    rep = VerificationReport("demo", {"n": 2})
    rep.add("small", 1e-12, 1e-9)
    rep.add_greater("big", 10.0, 1.0)
    assert rep.passed
    rep.add("bad", 1.0, 1e-9)
    assert not rep.passed
    lines = list(rep.summary_lines())
    assert lines[0].startswith("pass") and lines[-1].startswith("FAIL")
    assert [c["passed"] for c in rep.to_dict()["checks"]] == [True, True, False]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
    assert "splitting" in SUITES


def test_frame_suite_on_given_frame(frame4):
    rep = run_suite("frame", frame=frame4)
    assert rep.passed
