"""Heights on E(F_q(u)): the naive degree height, canonical heights by
repeated doubling, height pairings with Gram-rank lower bounds for the
Mordell-Weil rank, torsion testing, and the explicit point family on
y^2 + xy + u^d y = x^3 + u^d x^2 with d = q + 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    FFECError,
    Fq,
    FqElem,
    Poly,
    RatFunc,
    _int_factor,
    field_create,
    format_ratfunc,
)
from .local import torsion_bound
from .weierstrass import Curve, CurvePoint, minimal_polynomial_model

# Coordinate degrees grow by a factor of 4 per doubling; this cap keeps a
# runaway iteration from exhausting memory before it exhausts patience.
DEGREE_CAP = 300_000

FAMILY_CAP = 2 ** 16


class TorsionInconclusive(FFECError):
    """The height signal says torsion but the multiple check cannot confirm."""


@dataclass(frozen=True)
class HeightValue:
    """A rational height estimate; the error is the last doubling bracket
    |h_n/4^n - h_{n-1}/4^{n-1}|, which shrinks by a factor of 4 per extra
    iteration."""

    value: Fraction
    error: Fraction
    iterations: int


@dataclass(frozen=True)
class PointFamily:
    curve: Curve
    d: int
    points: tuple[CurvePoint, ...]
    zeta: FqElem


def _deg(f: Poly) -> int:
    return f.degree if f.coeffs else 0


def naive_height(P: CurvePoint) -> int:
    """max(deg num, deg den) of the x-coordinate in reduced form."""
    if P.is_infinity:
        raise ValueError("the point at infinity has no naive height")
    return max(_deg(P.x.num), _deg(P.x.den))


def canonical_height(E: Curve, P: CurvePoint, n_iter: int = 6) -> HeightValue:
    """h(2^n P)/4^n after n_iter doublings, with the bracket against the
    previous iterate as the error estimate.  Returns an exact 0 if some
    2^n P is the point at infinity."""
    if P.is_infinity:
        raise ValueError("the point at infinity has no canonical height")
    if n_iter < 1:
        raise ValueError("need at least one doubling")
    M, tau = minimal_polynomial_model(E)
    Q = tau.apply_point(P)
    inv = M.invariants()
    b2, b4, b6, b8 = (r.num for r in (inv.b2, inv.b4, inv.b6, inv.b8))
    two = M.field.scalar(2)
    four = M.field.scalar(4)
    X, Z = Q.x.num, Q.x.den
    hs = [max(_deg(X), _deg(Z))]
    for n in range(1, n_iter + 1):
        X2 = X * X
        Z2 = Z * Z
        XZ = X * Z
        XZ3 = XZ * Z2
        X2Z2 = X2 * Z2
        Xn = X2 * X2 - b4 * X2Z2 - b6 * XZ3 * two - b8 * (Z2 * Z2)
        Zn = X2 * XZ * four + b2 * X2Z2 + b4 * XZ3 * two + b6 * (Z2 * Z2)
        if Zn.is_zero():
            return HeightValue(Fraction(0), Fraction(0), n)
        g = Xn.gcd(Zn)
        if g.degree > 0:
            Xn = Xn.exact_div(g)
            Zn = Zn.exact_div(g)
        X, Z = Xn, Zn
        h = max(_deg(X), _deg(Z))
        if h > DEGREE_CAP:
            raise FFECError(
                f"degree budget exceeded at doubling {n}: {h} > {DEGREE_CAP}")
        hs.append(h)
        # once two consecutive steps quadruple exactly, h_n/4^n has
        # stabilized and further doublings only confirm the same value
        if n >= 2 and hs[-1] > 0 and hs[-1] == 4 * hs[-2] and hs[-2] == 4 * hs[-3]:
            return HeightValue(Fraction(hs[-1], 4 ** n), Fraction(0), n)
    value = Fraction(hs[-1], 4 ** n_iter)
    prev = Fraction(hs[-2], 4 ** (n_iter - 1))
    return HeightValue(value, abs(value - prev), n_iter)


def _height_or_zero(E: Curve, P: CurvePoint, n_iter: int) -> HeightValue:
    if P.is_infinity:
        return HeightValue(Fraction(0), Fraction(0), n_iter)
    return canonical_height(E, P, n_iter)


def height_pairing(E: Curve, P: CurvePoint, Q: CurvePoint,
                   n_iter: int = 6) -> HeightValue:
    """(hhat(P+Q) - hhat(P) - hhat(Q)) / 2."""
    s = _height_or_zero(E, E.add(P, Q), n_iter)
    a = _height_or_zero(E, P, n_iter)
    b = _height_or_zero(E, Q, n_iter)
    return HeightValue((s.value - a.value - b.value) / 2,
                       (s.error + a.error + b.error) / 2, n_iter)


def gram_matrix(E: Curve, points, n_iter: int = 6,
                tol: float = 1e-9) -> list[list[Fraction]]:
    """Pairing matrix with every entry snapped to the nearest rational of
    denominator at most 4 d^2.  Raises if an entry cannot be reconstructed
    unambiguously at the given tolerance."""
    d = len(points)
    bound = 4 * d * d
    tolf = Fraction(tol)
    heights = [_height_or_zero(E, P, n_iter) for P in points]
    gram: list[list[Fraction]] = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            if i == j:
                raw, err = heights[i].value, heights[i].error
            else:
                s = _height_or_zero(E, E.add(points[i], points[j]), n_iter)
                raw = (s.value - heights[i].value - heights[j].value) / 2
                err = (s.error + heights[i].error + heights[j].error) / 2
            snapped = raw.limit_denominator(bound)
            # distinct rationals with denominator <= bound are at least
            # 1/bound^2 apart, so the bracket must pin down a single one
            if abs(snapped - raw) > err + tolf or \
                    2 * (err + tolf) >= Fraction(1, bound * bound):
                raise FFECError(
                    f"Gram entry ({i},{j}) = {raw} is ambiguous within "
                    f"error {err}; increase n_iter")
            gram[i][j] = gram[j][i] = snapped
    return gram


def _rational_rank(rows: list[list[Fraction]]) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _kernel_basis(rows: list[list[Fraction]]) -> list[tuple[int, ...]]:
    """Primitive integer vectors spanning the rational null space."""
    n = len(rows)
    m = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(n):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        pivots.append(c)
        rank += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for c in free:
        v = [Fraction(0)] * n
        v[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][c]
        lcm = 1
        for x in v:
            lcm = lcm * x.denominator // _gcd_int(lcm, x.denominator)
        ints = [int(x * lcm) for x in v]
        g = 0
        for x in ints:
            g = _gcd_int(g, abs(x))
        basis.append(tuple(x // g for x in ints) if g else tuple(ints))
    return basis


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def gram_rank(E: Curve, points, n_iter: int = 6, tol: float = 1e-9) -> int:
    """Exact rank of the snapped Gram matrix, a lower bound for the
    Mordell-Weil rank."""
    return _rational_rank(gram_matrix(E, points, n_iter, tol))


def is_torsion(E: Curve, P: CurvePoint, n_iter: int = 6,
               tol: float = 1e-9) -> bool:
    """Torsion means either some 2^n P hits the point at infinity or the
    height estimate vanishes within tol AND a multiple bounded by
    torsion_bound (times a small power of p for the p-part) kills P."""
    if P.is_infinity:
        return True
    h = canonical_height(E, P, n_iter)
    if h.value == 0 and h.error == 0 and \
            E.scalar_mul(2 ** h.iterations, P).is_infinity:
        return True
    if h.value >= Fraction(tol) + h.error:
        return False
    m = torsion_bound(E)
    Q = E.scalar_mul(m, P)
    if Q.is_infinity:
        return True
    p = E.field.p
    for _ in range(2):
        Q = E.scalar_mul(p, Q)
        if Q.is_infinity:
            return True
    raise TorsionInconclusive(
        f"height {h.value} (error {h.error}) is below tolerance but "
        f"{m} p^2 * P is not the identity")


def _multiplicative_generator(F: Fq) -> FqElem:
    n = F.q - 1
    primes = list(_int_factor(n))
    for c in F.elements():
        if c and all(c ** (n // l) != F.one for l in primes):
            return c
    raise FFECError("no multiplicative generator found")


def _scale_var(r: RatFunc, c: FqElem) -> RatFunc:
    return RatFunc(r.num.scale_var(c), r.den.scale_var(c))


def legendre_family(p: int, f: int = 1) -> PointFamily:
    """The curve y^2 + xy + u^d y = x^3 + u^d x^2 over F_{q^2}(u) with
    q = p^f and d = q + 1, together with its d explicit points

        P_i = P(zeta_d^i u), i = 0, ..., d-1,

    where P(u) has x = u^q (u^q - u) / (1+4u)^q.  Every point is verified
    on the curve by exact substitution."""
    if p == 2:
        raise ValueError("the point formula needs p > 2")
    if f < 1:
        raise ValueError("the constant-field exponent must be positive")
    q = p ** f
    d = q + 1
    if p ** (2 * f) > FAMILY_CAP:
        raise FFECError(f"constant field F_{p ** (2 * f)} exceeds the cap")
    F = field_create(p, 2 * f)
    zeta = _multiplicative_generator(F) ** ((F.q - 1) // d)
    u = Poly.x(F)
    E = Curve(F, a1=1, a2=u ** d, a3=u ** d, var="u")
    four_u = Poly(F, (1, 4))
    x0 = RatFunc(u ** (2 * q) - u ** (q + 1), four_u ** q)
    cs = [0] * (q + 1)
    cs[0], cs[1], cs[q] = 1, 2, 2
    half = F.scalar(2).inverse()
    y0 = RatFunc((u ** (2 * q)) * (Poly(F, cs) - four_u ** ((q + 1) // 2)) * half,
                 four_u ** ((3 * q - 1) // 2))
    points = []
    z = F.one
    for i in range(d):
        P = CurvePoint(_scale_var(x0, z), _scale_var(y0, z))
        if not E.on_curve(P):
            raise FFECError(f"family point {i} fails the curve equation")
        points.append(P)
        z = z * zeta
    return PointFamily(E, d, tuple(points), zeta)


def points_report(fam: PointFamily, n_iter: int = 6,
                  tol: float = 1e-9) -> dict:
    """Per-point heights, the snapped Gram matrix, its rank, and a kernel
    basis, with rationals rendered as strings."""
    t0 = time.time()
    E = fam.curve
    rows = []
    for i, P in enumerate(fam.points):
        h = canonical_height(E, P, n_iter)
        rows.append({
            "i": i,
            "x": format_ratfunc(P.x, E.var),
            "y": format_ratfunc(P.y, E.var),
            "naive": naive_height(P),
            "canonical": str(h.value),
            "error": str(h.error),
            "iterations": h.iterations,
        })
    gram = gram_matrix(E, fam.points, n_iter, tol)
    rank = _rational_rank(gram)
    kernel = _kernel_basis(gram)
    return {
        "curve": repr(E),
        "q": E.field.q,
        "d": fam.d,
        "points": rows,
        "gram": [[str(x) for x in row] for row in gram],
        "rank": rank,
        "kernel": [list(v) for v in kernel],
        "seconds": round(time.time() - t0, 3),
    }
