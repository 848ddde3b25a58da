"""Hand-differentiated closed forms for the corpus functions (orders 0..4).

Written directly against mpmath without any use of the package's jets: the
building blocks are differentiated by hand and combined with the Leibniz
rule and the chain rule for integer powers.
"""

from math import comb


def leibniz(g, h):
    """Derivatives 0..4 of g*h from derivative lists of g and h."""
    return [sum(comb(k, j) * g[j] * h[k - j] for j in range(k + 1)) for k in range(5)]


def power(g, n):
    """Derivatives 0..4 of g**n from derivatives of g (chain rule, written out)."""
    g0, g1, g2, g3, g4 = g

    def gp(k):
        return g0 ** (n - k) if n - k >= 0 else 0

    return [
        g0 ** n,
        n * gp(1) * g1,
        n * (n - 1) * gp(2) * g1 ** 2 + n * gp(1) * g2,
        n * (n - 1) * (n - 2) * gp(3) * g1 ** 3 + 3 * n * (n - 1) * gp(2) * g1 * g2 + n * gp(1) * g3,
        n * (n - 1) * (n - 2) * (n - 3) * gp(4) * g1 ** 4
        + 6 * n * (n - 1) * (n - 2) * gp(3) * g1 ** 2 * g2
        + n * (n - 1) * gp(2) * (3 * g2 ** 2 + 4 * g1 * g3)
        + n * gp(1) * g4,
    ]


def f1_derivs(mp, x):
    # x sin x - 2 sin^2(x/sqrt 2) = x sin x - 1 + cos(sqrt(2) x)
    s, c = mp.sin(x), mp.cos(x)
    r = mp.sqrt(2)
    sr, cr = mp.sin(r * x), mp.cos(r * x)
    g = [
        x * s - 1 + cr,
        s + x * c - r * sr,
        2 * c - x * s - 2 * cr,
        -3 * s - x * c + 2 * r * sr,
        -4 * c + x * s + 4 * cr,
    ]
    h = [x ** 5 + x ** 2 + 100, 5 * x ** 4 + 2 * x, 20 * x ** 3 + 2, 60 * x ** 2, 120 * x]
    return leibniz(g, h)


def g2_derivs(mp, x):
    e = mp.exp(x * x)
    s2, c2 = mp.sin(2 * x), mp.cos(2 * x)
    s, c = mp.sin(x), mp.cos(x)
    xe = [x * e, e * (1 + 2 * x ** 2), e * (4 * x ** 3 + 6 * x), e * (8 * x ** 4 + 24 * x ** 2 + 6),
          e * (16 * x ** 5 + 80 * x ** 3 + 60 * x)]
    sin_sq = [s * s, s2, 2 * c2, -4 * s2, -8 * c2]
    three_cos = [3 * c, -3 * s, -3 * c, 3 * s, 3 * c]
    q = [xe[k] - sin_sq[k] + three_cos[k] for k in range(5)]
    q[0] += 5
    return q


def f2_derivs(mp, x):
    return power(g2_derivs(mp, x), 2)


def f3_derivs(mp, x):
    s1 = 2 * x + 4
    e = mp.exp(x * x + 4 * x + 5)
    a = [e - 1, e * s1, e * (s1 ** 2 + 2), e * (s1 ** 3 + 6 * s1), e * (s1 ** 4 + 12 * s1 ** 2 + 12)]
    t = x + 2 - mp.mpc(0, 1)
    sn, cs = mp.sin(t), mp.cos(t)
    b = [sn, cs, -sn, -cs, sn]
    return leibniz(power(a, 3), power(b, 2))


def f4_derivs(mp, x):
    s, c = mp.sin(x), mp.cos(x)
    w = [x - s, 1 - c, s, c, -s]
    return power(w, 4)


ORACLES = {"f1": f1_derivs, "f2": f2_derivs, "f3": f3_derivs, "f4": f4_derivs}
