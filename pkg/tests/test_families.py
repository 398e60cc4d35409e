from fractions import Fraction

import numpy as np
import pytest

from finite_ramanujan.errors import IngestionError, InvalidArgument
from finite_ramanujan.expansion import expansion_coeffs
from finite_ramanujan.families import FamilySpec, build_fprime, load_custom, parse_family


@pytest.mark.parametrize("text,spec", [
    ("unit", FamilySpec("unit")),
    ("divisor", FamilySpec("divisor")),
    ("power:0.5", FamilySpec("power", 0.5)),
    ("log:3", FamilySpec("log", 3.0)),
    ("custom:coeffs.csv", FamilySpec("custom", path="coeffs.csv")),
])
def test_parse_family(text, spec):
    assert parse_family(text) == spec


@pytest.mark.parametrize("text", ["sigma", "power", "power:x", "log:-1", "unit:2", "custom:"])
def test_parse_family_rejects(text):
    with pytest.raises(InvalidArgument):
        parse_family(text)


def test_family_values():
    d = np.arange(1, 11, dtype=float)
    assert build_fprime(FamilySpec("unit"), 10).tolist() == [1.0] + [0.0] * 9
    assert build_fprime(FamilySpec("divisor"), 10).tolist() == [1.0] * 10
    np.testing.assert_allclose(build_fprime(FamilySpec("power", 0.5), 10).tolist(), d ** -0.5)
    np.testing.assert_allclose(build_fprime(FamilySpec("log", 3.0), 10).tolist(), 1 / (1 + np.log(d) ** 3))


def test_integer_power_is_exact_rational():
    t = build_fprime(FamilySpec("power", 1.0), 6, "exact")
    assert t.tolist() == [Fraction(1, d) for d in range(1, 7)]


def test_power_one_coefficients_tend_to_zeta2():
    exp = expansion_coeffs(build_fprime(FamilySpec("power", 1.0), 20000), 20000)
    assert exp[1] == pytest.approx(np.pi ** 2 / 6, rel=1e-4)
    assert exp[7] * 49 == pytest.approx(np.pi ** 2 / 6, rel=1e-3)


def write(tmp_path, text, name="c.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_custom_unit_equivalent(tmp_path):
    cc = load_custom(write(tmp_path, "fprime\n1,1\n"), 10)
    assert cc.kind == "fprime"
    t = cc.to_fprime(10, "exact")
    assert t.tolist() == build_fprime(FamilySpec("unit"), 10, "exact").tolist()


def test_custom_power_prefix(tmp_path):
    cc = load_custom(write(tmp_path, "fprime\n1,1\n2,0.5\n4,0.25\n"), 8)
    t = cc.to_fprime(8, "exact")
    assert t.tolist() == [1, Fraction(1, 2), 0, Fraction(1, 4), 0, 0, 0, 0]


def test_custom_fhat_is_dual_inverted(tmp_path):
    # fhat of the divisor family at support 4
    cc = load_custom(write(tmp_path, "fhat\n1,25/12\n2,3/4\n3,1/3\n4,1/4\n"), 4)
    assert cc.to_fprime(4, "exact").tolist() == [1, 1, 1, 1]


def test_custom_via_family_grammar(tmp_path):
    p = write(tmp_path, "fprime\n# comment\n\n1,1\n3,2\n")
    t = build_fprime(parse_family(f"custom:{p}"), 5, "exact")
    assert t.tolist() == [1, 0, 2, 0, 0]


@pytest.mark.parametrize("body,line", [
    ("fprime\n1,1\n1,2\n", 3),
    ("fprime\n1,1\n9,2\n", 3),
    ("fprime\n1,abc\n", 2),
    ("weights\n1,1\n", 1),
    ("fprime\n1,2,3\n", 2),
    ("fprime\nx,1\n", 2),
])
def test_custom_errors_name_the_line(tmp_path, body, line):
    with pytest.raises(IngestionError) as exc:
        load_custom(write(tmp_path, body), 5)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_custom_missing_file(tmp_path):
    with pytest.raises(IngestionError):
        load_custom(tmp_path / "nope.csv", 5)


@pytest.mark.parametrize("text", ["unit", "divisor", "power:0.5", "log:3"])
def test_families_build_at_a_million(text):
    import time
    t0 = time.perf_counter()
    t = build_fprime(parse_family(text), 10**6)
    assert t.n_max == 10**6 and np.isfinite(t.values).all()
    assert time.perf_counter() - t0 < 60
