"""Equivalence checks: symbolic branch, sampling branch, determinism."""

import pytest

from toolrig.expr import equivalent, parse


def test_expansion_identity():
    assert equivalent(parse("(t - 2)*(t - 3)"), parse("t^2 - 5*t + 6"), 1e-9)


def test_reordered_paper_answer():
    assert equivalent(parse("3*A*t^2 - 2*B*t + C"), parse("C - 2*B*t + 3*A*t^2"), 1e-9)


def test_pythagorean_identity_via_sampling():
    assert equivalent(parse("sin(x)^2 + cos(x)^2"), parse("1"), 1e-9)


def test_inequivalent_pair():
    assert not equivalent(parse("x^2"), parse("x^3"), 1e-9)
    assert not equivalent(parse("sin(x)"), parse("cos(x)"), 1e-9)


def test_close_but_not_equal_beyond_tolerance():
    assert not equivalent(parse("x"), parse("x + 1/1000"), 1e-6)
    assert equivalent(parse("x"), parse("x + 1/1000000000"), 1e-6)


def test_determinism_across_calls():
    verdicts = {equivalent(parse("ln(x) + ln(y)"), parse("ln(x*y)"), 1e-9) for _ in range(5)}
    assert verdicts == {True}


def test_domain_starved_comparison_returns_false():
    # probes live in [-3,3], so both sides always hit ln of a negative number;
    # fewer than 8 valid probes must mean False, not a crash
    a = parse("ln(x - 100)")
    b = parse("cos(0.0)*ln(x - 100)")
    assert equivalent(a, b, 1e-9) is False


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        equivalent(parse("x"), parse("x"), 0.0)


def test_constants():
    assert equivalent(parse("2/4"), parse("0.5"), 1e-12)
    assert not equivalent(parse("1/3"), parse("0.3333"), 1e-9)
