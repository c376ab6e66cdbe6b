import pytest

from entrolp import parse_expression, parse_inequality
from entrolp.errors import PdSyntaxError

RV = {nm: k for k, nm in enumerate(["X", "YQ123", "Z", "S12", "S21", "S31", "S32", "S13"])}
AL = {nm: k for k, nm in enumerate(["A", "B"])}


def m(*names):
    mask = 0
    for nm in names:
        mask |= 1 << RV[nm]
    return mask


def test_objective_example():
    e = parse_expression("A + 5B + H(X) - 2H(X,YQ123|Z)", RV, AL)
    assert e.expr.al == {0: 1.0, 1: 5.0}
    assert e.expr.entropy == {
        m("X"): 1.0,
        m("X", "YQ123", "Z"): -2.0,
        m("Z"): 2.0,
    }
    assert e.pretty == "A + 5B + H(X) - 2H(X,YQ123|Z)"


def test_sensitivity_expression_example():
    e = parse_expression("2I(S12;S21|S32)+H(S21|S31)+A", RV, AL)
    ent = e.expr.entropy
    assert ent[m("S12", "S32")] == 2.0
    assert ent[m("S21", "S32")] == 2.0
    assert ent[m("S12", "S21", "S32")] == -2.0
    assert ent[m("S32")] == -2.0
    assert ent[m("S21", "S31")] == 1.0
    assert ent[m("S31")] == -1.0
    assert e.expr.al == {0: 1.0}
    assert e.pretty == "2I(S12;S21|S32) + H(S21|S31) + A"


def test_negated_leading_term():
    e = parse_expression("-2I(S12;S21|S32)", RV, AL)
    assert e.expr.entropy[m("S12", "S32")] == -2.0
    assert e.pretty == "-2I(S12;S21|S32)"


def test_spacing_is_ignored():
    a = parse_expression("A+5B+H(X)-2H(X,YQ123|Z)", RV, AL)
    b = parse_expression("  A +  5B + H( X , YQ123 ) - H(X,YQ123) + H(X) - 2H(X,YQ123|Z)", RV, AL)
    assert a.expr == b.expr


def test_decimal_coefficients():
    e = parse_expression("3.2A + 2B", RV, AL)
    assert e.expr.al == {0: 3.2, 1: 2.0}
    assert e.pretty == "3.2A + 2B"


def test_unknown_identifier_rejected():
    with pytest.raises(PdSyntaxError):
        parse_expression("A + C", RV, AL)


def test_rv_used_bare_rejected():
    with pytest.raises(PdSyntaxError, match="random variable"):
        parse_expression("X + A", RV, AL)


def test_al_inside_entropy_rejected():
    with pytest.raises(PdSyntaxError, match="LP variable"):
        parse_expression("H(A)", RV, AL)


def test_three_way_information_rejected():
    with pytest.raises(PdSyntaxError):
        parse_expression("I(X;Z;S12)", RV, AL)


def test_explicit_star_rejected():
    with pytest.raises(PdSyntaxError):
        parse_expression("2*H(X)", RV, AL)


def test_empty_expression_rejected():
    with pytest.raises(PdSyntaxError):
        parse_expression("   ", RV, AL)


def test_bar_inside_i_given_part():
    e = parse_expression("I(X;Z|S12,S21)", RV, AL)
    assert e.expr.entropy[m("X", "S12", "S21")] == 1.0


def test_inequality_example():
    lhs, sense, rhs = parse_inequality("H(S12,S13,S31) - A <= 0", RV, AL)
    assert sense == "<="
    assert rhs == 0.0
    assert lhs.expr.entropy == {m("S12", "S13", "S31"): 1.0}
    assert lhs.expr.al == {0: -1.0}


def test_inequality_ge():
    lhs, sense, rhs = parse_inequality("4A + 6B >= 3", RV, AL)
    assert (sense, rhs) == (">=", 3.0)
    assert lhs.expr.al == {0: 4.0, 1: 6.0}


def test_inequality_eq():
    _lhs, sense, rhs = parse_inequality("H(X) = 0", RV, AL)
    assert (sense, rhs) == ("=", 0.0)


def test_non_numeric_rhs_rejected():
    with pytest.raises(PdSyntaxError, match="number"):
        parse_inequality("H(X) >= YQ123", RV, AL)


def test_missing_relation_rejected():
    with pytest.raises(PdSyntaxError):
        parse_inequality("H(X) + 1.5", RV, AL)


def test_double_relation_rejected():
    with pytest.raises(PdSyntaxError):
        parse_inequality("H(X) = 0 = 1", RV, AL)
