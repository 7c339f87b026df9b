"""Named example curves used across the test suite and the CLI."""

from __future__ import annotations

from .algebra import Fq, FqElem, Poly, RatFunc
from .weierstrass import Curve


def _t(field: Fq) -> RatFunc:
    return RatFunc.t(field)


def e1(field: Fq) -> Curve:
    """y^2 = x^3 + 1 (a constant curve)."""
    return Curve(field, a6=1)


def e2(field: Fq) -> Curve:
    """y^2 = x^3 + t^6 (constant after rescaling by u = t)."""
    return Curve(field, a6=_t(field) ** 6)


def e3(field: Fq) -> Curve:
    """y^2 = x^3 + t (isotrivial of height 1)."""
    return Curve(field, a6=_t(field))


def e4(field: Fq) -> Curve:
    """y^2 = x^3 + x + t, for p > 3."""
    if field.p <= 3:
        raise ValueError("this model needs characteristic > 3")
    return Curve(field, a4=1, a6=_t(field))


def e5(field: Fq) -> Curve:
    """y^2 + t y = x^3, for p != 3."""
    if field.p == 3:
        raise ValueError("this model is singular in characteristic 3")
    return Curve(field, a3=_t(field))


def e6(field: Fq) -> Curve:
    """y^2 = x^3 + t x, for p != 2."""
    if field.p == 2:
        raise ValueError("this model is singular in characteristic 2")
    return Curve(field, a4=_t(field))


def e7(field: Fq) -> Curve:
    """y^2 + x y + t y = x^3, discriminant t^3 (1 - 27 t)."""
    return Curve(field, a1=1, a3=_t(field))


def e8(field: Fq) -> Curve:
    """y^2 + x y = x^3 + t x, discriminant t^2 (1 - 64 t)."""
    return Curve(field, a1=1, a4=_t(field))


def e9(field: Fq) -> Curve:
    """y^2 + x y = x^3 + t, discriminant -t (1 + 432 t)."""
    return Curve(field, a1=1, a6=_t(field))


def first_example(field: Fq) -> Curve:
    """y^2 + x y + t y = x^3 + t x^2, discriminant t^4 (1 - 16 t)."""
    t = _t(field)
    return Curve(field, a1=1, a2=t, a3=t)


def second_example(field: Fq) -> Curve:
    """y^2 + 2 t x y = x^3 - t^2 x, for p != 2."""
    if field.p == 2:
        raise ValueError("this model is singular in characteristic 2")
    t = _t(field)
    return Curve(field, a1=2 * t, a4=-(t * t))


def berger_l4(field: Fq, a) -> Curve:
    """The one-parameter family
    y^2 + a(t-1) xy + a(t^2-t) y = x^3 + (2a+1) t x^2 + a(a+2) t^2 x + a^2 t^3
    with parameter a outside {0, 1, 2}."""
    if isinstance(a, int):
        a = field.scalar(a)
    elif not (isinstance(a, FqElem) and a.field is field):
        raise ValueError("parameter must be a field element")
    bad = (field.zero, field.one, field.scalar(2))
    if a in bad:
        raise ValueError("parameter must avoid 0, 1, 2")
    t = _t(field)
    ar = RatFunc.from_const(a)
    return Curve(
        field,
        a1=ar * (t - 1),
        a2=(2 * ar + 1) * t,
        a3=ar * (t * t - t),
        a4=ar * (ar + 2) * t * t,
        a6=ar * ar * t ** 3,
    )
