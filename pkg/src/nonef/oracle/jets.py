"""Linear functionals on plane curves of fixed degree.

A degree-D curve is a coefficient vector over ``monomials(D)``; entry ``(i, j)``
is the coefficient of ``x^i y^j z^(D-i-j)``. Every condition is a list of rows,
each row a functional on that vector.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence

Poly = Sequence[int]  # coefficients, lowest degree first


class TruncationError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def monomials(degree: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(degree + 1) for j in range(degree + 1 - i))


def monomial_count(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2 if degree >= 0 else 0


def fat_point_rows(degree: int, x0: int, y0: int, h: int, p: int) -> list[list[int]]:
    """Taylor coefficients of order < h at the affine point (x0, y0)."""
    if h <= 0:
        return []
    xp = [pow(x0, e, p) for e in range(degree + 1)]
    yp = [pow(y0, e, p) for e in range(degree + 1)]
    ax = [[comb(i, a) * xp[i - a] % p if i >= a else 0 for i in range(degree + 1)] for a in range(h)]
    ay = [[comb(j, b) * yp[j - b] % p if j >= b else 0 for j in range(degree + 1)] for b in range(h)]
    mons = monomials(degree)
    rows = []
    for order in range(h):
        for a in range(order, -1, -1):
            b = order - a
            ra, rb = ax[a], ay[b]
            rows.append([ra[i] * rb[j] % p for i, j in mons])
    return rows


def multiplicity(coeffs: Sequence[int], degree: int, x0: int, y0: int, p: int) -> int:
    """Order of vanishing of a nonzero curve at an affine point."""
    if not any(c % p for c in coeffs):
        raise ValueError("the zero polynomial has no multiplicity")
    rows = fat_point_rows(degree, x0, y0, degree + 1, p)
    idx = 0
    for order in range(degree + 1):
        for _ in range(order + 1):
            if sum(r * c for r, c in zip(rows[idx], coeffs)) % p:
                return order
            idx += 1
    return degree + 1  # unreachable for a nonzero polynomial


def evaluate(coeffs: Sequence[int], degree: int, point: Sequence[int], p: int) -> int:
    x, y, z = point
    return sum(c * pow(x, i, p) * pow(y, j, p) * pow(z, degree - i - j, p) for c, (i, j) in zip(coeffs, monomials(degree))) % p


def evaluation_row(degree: int, point: Sequence[int], p: int) -> list[int]:
    x, y, z = point
    return [pow(x, i, p) * pow(y, j, p) * pow(z, degree - i - j, p) % p for i, j in monomials(degree)]


def multiply(f: Sequence[int], df: int, g: Sequence[int], dg: int, p: int) -> list[int]:
    """Product of two curves given on monomial bases of degrees df and dg."""
    index = {mon: k for k, mon in enumerate(monomials(df + dg))}
    out = [0] * len(index)
    for cf, (i1, j1) in zip(f, monomials(df)):
        if cf % p == 0:
            continue
        for cg, (i2, j2) in zip(g, monomials(dg)):
            if cg:
                k = index[(i1 + i2, j1 + j2)]
                out[k] = (out[k] + cf * cg) % p
    return out


def power(f: Sequence[int], df: int, e: int, p: int) -> list[int]:
    out, dout = [1], 0
    for _ in range(e):
        out, dout = multiply(out, dout, f, df, p), dout + df
    return out


# -- univariate truncated series ---------------------------------------------------

def poly_eval(f: Poly, s: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * s + c) % p
    return acc


def taylor(f: Poly, s0: int, n_terms: int, p: int) -> list[int]:
    """Coefficients of f(s0 + u) in u, truncated to n_terms."""
    out = [0] * n_terms
    for k in range(min(n_terms, len(f))):
        out[k] = sum(comb(e, k) * f[e] * pow(s0, e - k, p) for e in range(k, len(f))) % p
    return out


def series_mul(a: Poly, b: Poly, n_terms: int, p: int) -> list[int]:
    out = [0] * n_terms
    for i, x in enumerate(a[:n_terms]):
        if x:
            for j, y in enumerate(b[: n_terms - i]):
                out[i + j] += x * y
    return [c % p for c in out]


def _series_powers(base: Poly, top: int, n_terms: int, p: int) -> list[list[int]]:
    one = [1] + [0] * (n_terms - 1)
    out = [one]
    for _ in range(top):
        out.append(series_mul(out[-1], base, n_terms, p))
    return out


def local_jet(
    degree: int,
    param: Sequence[Poly],
    s0: int,
    v_order: int,
    n_terms: int,
    p: int,
) -> dict[tuple[int, int], list[int]]:
    """Coefficient functionals of F(X(s0+u), Y(s0+u) + v, Z(s0+u)).

    In the coordinates (u, v) the branch of the parametrized curve through
    the point is {v = 0}. Keys are (a, b) for u^a v^b with b < v_order and
    a < n_terms.
    """
    X, Y, Z = (taylor(c, s0, n_terms, p) for c in param)
    xp = _series_powers(X, degree, n_terms, p)
    yp = _series_powers(Y, degree, n_terms, p)
    zp = _series_powers(Z, degree, n_terms, p)
    mons = monomials(degree)
    jet = {(a, b): [0] * len(mons) for a in range(n_terms) for b in range(v_order)}
    for col, (i, j) in enumerate(mons):
        base = series_mul(xp[i], zp[degree - i - j], n_terms, p)
        for b in range(min(j, v_order - 1) + 1):
            ser = series_mul(base, yp[j - b], n_terms, p)
            c = comb(j, b) % p
            for a in range(n_terms):
                if ser[a]:
                    jet[(a, b)][col] = ser[a] * c % p
    return jet


def blowup_chain_rows(jet: dict[tuple[int, int], list[int]], h: int, m: int, n_terms: int) -> list[list[int]]:
    """Rows for m infinitely near points of multiplicity h along {v = 0}.

    At each stage the coefficients of total order < h are forced to vanish,
    then v -> u*v is substituted and u^h divided out, moving the surviving
    term u^a v^b to u^(a+b-h) v^b.
    """
    current = dict(jet)
    known = {b: n_terms for b in range(h)}  # u-exponents below known[b] are exact
    rows: list[list[int]] = []
    for _ in range(m):
        for order in range(h):
            for b in range(order + 1):
                a = order - b
                if a >= known[b]:
                    raise TruncationError(f"series truncated too early for term u^{a} v^{b}")
                rows.append(current[(a, b)])
        current = {(a + b - h, b): row for (a, b), row in current.items() if a + b >= h and b < h}
        known = {b: known[b] + b - h for b in known}
    return rows


def default_truncation(h: int, m: int) -> int:
    return h * m + m + 2
