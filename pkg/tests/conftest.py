import pytest

from mhdsheet import ModelParams

# the case studied in detail: M = m = 2, s = 1.8
PAPER_ALPHA = 4.20411340


@pytest.fixture
def paper_params():
    return ModelParams(M=2.0, m=2.0, s=1.8)


def taylor_coeffs_by_differentiation(M2, m, s, alpha, order):
    """Independent oracle for the Taylor coefficients of f about eta=0.

    Repeatedly differentiates the ODE solved for f''' with sympy and
    evaluates at eta=0, entirely in exact rationals. Shares nothing with
    the Cauchy-product recurrence under test.
    """
    import sympy as sp

    x = sp.Symbol("x")
    f = sp.Function("f")
    M2, m, s, alpha = sp.Rational(M2), sp.Rational(m), sp.Rational(s), sp.Rational(alpha)
    # f''' expressed through lower derivatives
    expr = M2 * f(x).diff(x) + f(x).diff(x) ** 2 - m * f(x) * f(x).diff(x, 2)

    derivs = {0: s, 1: sp.Integer(-1), 2: alpha}
    cur = expr
    for k in range(3, order + 1):
        subs = [(sp.Derivative(f(x), (x, i)), derivs[i])
                for i in range(k - 1, 0, -1)]
        subs.append((f(x), derivs[0]))
        derivs[k] = sp.simplify(cur.subs(subs))
        cur = sp.diff(cur, x)
    return [sp.nsimplify(derivs[j] / sp.factorial(j)) for j in range(order + 1)]
