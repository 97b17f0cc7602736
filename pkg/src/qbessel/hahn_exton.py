"""The Hahn-Exton q-Bessel function and its companions.

Evaluates J_nu(x; base) from its defining series

    J_nu(x; base) = x^nu (base^(nu+1); base)_inf / (base; base)_inf
                    * 1_phi_1(0; base^(nu+1); base, base x^2),

together with the regular part x^-nu J_nu, the second solution of the
q-difference equation, the classical x-derivative, and the base-q
q-derivative of J_nu(.; q^2) in closed form.

The base is an explicit parameter because the difference-equation
identities live in base q^2 while the half-shift relations live in base q;
callers pick the convention, the context only supplies tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, Divergent, InvalidOrder, TruncationBudgetExceeded
from .qcalc import Kahan, QContext, SeriesSpec, basic_hypergeometric, is_integer

__all__ = ["BesselEval", "jq", "jq_regular", "jq_second", "jq_deriv", "jq_any", "dq_jq"]


@dataclass(frozen=True)
class BesselEval:
    """An evaluated q-Bessel value with truncation metadata.

    scale is the magnitude of the largest series term: for large arguments
    the sum cancels catastrophically and residuals are only meaningful
    relative to this scale.
    """

    value: complex | float
    tail_bound: float
    terms_used: int
    scale: float


def _check_base(base) -> None:
    if not (0 < base < 1):
        raise DomainError(f"base must lie in (0,1), got {base!r}")


def _check_order(nu) -> None:
    if is_integer(nu) and round(nu) <= -1:
        raise InvalidOrder(
            f"order {nu!r}: base^(nu+1) is a lower-parameter pole of the series"
        )


def _series(nu, x, base, ctx: QContext):
    spec = SeriesSpec((0.0,), (base ** (nu + 1),), base, base * x * x)
    return basic_hypergeometric(spec, ctx)


def _prefactor(nu, base, ctx: QContext) -> float:
    """(base^(nu+1); base)_inf / (base; base)_inf as one paired product.

    Pairing factor-by-factor keeps the partials representable even when
    both infinite products underflow double range (base close to 1), and
    collapses to exactly 1 at nu = 0.
    """
    a = base ** (nu + 1)
    qf = float(base)
    out = 1.0
    fa = a
    fq = base
    for _ in range(ctx.max_terms):
        out *= (1 - fa) / (1 - fq)
        fa *= base
        fq *= base
        if abs(fa - fq) <= ctx.eps * (1 - qf) ** 2:
            return out
    raise TruncationBudgetExceeded(
        f"prefactor product did not settle within max_terms={ctx.max_terms}"
    )


def jq(nu: float, x: float, base: float, ctx: QContext) -> BesselEval:
    """J_nu(x; base).

    Non-integer orders require x > 0 (real power x^nu); integer orders
    accept any x != 0. Orders in {-1, -2, ...} raise InvalidOrder; use
    jq_any for the reflected evaluation at negative integer orders.
    """
    _check_base(base)
    _check_order(nu)
    if is_integer(nu):
        nu = round(nu)
        if x == 0:
            raise DomainError("x = 0: use jq_regular for the regular part")
    elif x <= 0:
        raise DomainError(f"x must be positive for non-integer order, got {x!r}")
    xpow = x ** nu
    pref = xpow * _prefactor(nu, base, ctx)
    s = _series(nu, x, base, ctx)
    apref = abs(pref)
    return BesselEval(pref * s.value, apref * s.tail_bound, s.terms_used, apref * s.scale)


def jq_regular(nu: float, x: float, base: float, ctx: QContext) -> BesselEval:
    """The regular part x^-nu J_nu(x; base): entire and even in x."""
    _check_base(base)
    _check_order(nu)
    if is_integer(nu):
        nu = round(nu)
    pref = _prefactor(nu, base, ctx)
    s = _series(nu, x, base, ctx)
    apref = abs(pref)
    return BesselEval(pref * s.value, apref * s.tail_bound, s.terms_used, apref * s.scale)


def jq_any(nu: float, x: float, base: float, ctx: QContext) -> BesselEval:
    """J_nu for any real order.

    Negative integer orders go through the reflection
    J_{-n}(x; base) = (-1)^n base^(n/2) J_n(x base^(n/2); base); everything
    else is a plain jq call.
    """
    if is_integer(nu) and round(nu) < 0:
        n = -round(nu)
        shift = base ** (n / 2)
        inner = jq(n, x * shift, base, ctx)
        factor = -shift if n % 2 else shift
        af = abs(factor)
        return BesselEval(
            factor * inner.value, af * inner.tail_bound, inner.terms_used, af * inner.scale
        )
    return jq(nu, x, base, ctx)


def jq_second(nu: float, x: float, base: float, ctx: QContext) -> BesselEval:
    """The second solution e^(i nu pi) base^(-nu/2) J_(-nu)(x base^(-nu/2); base).

    Carries the principal phase e^(i nu pi), so the value is complex for
    non-integer nu. At integer orders the defining combination degenerates
    and the function equals J_n; integer input is routed there.
    """
    _check_base(base)
    if x <= 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if is_integer(nu):
        inner = jq_any(round(nu), x, base, ctx)
        return BesselEval(
            complex(inner.value), inner.tail_bound, inner.terms_used, inner.scale
        )
    phase = complex(math.cos(math.pi * nu), math.sin(math.pi * nu))
    shift = base ** (-nu / 2)
    inner = jq(-nu, x * shift, base, ctx)
    factor = phase * shift
    af = abs(factor)
    return BesselEval(
        factor * inner.value, af * inner.tail_bound, inner.terms_used, af * inner.scale
    )


def jq_deriv(nu: float, x: float, base: float, ctx: QContext) -> BesselEval:
    """Classical derivative d/dx J_nu(x; base), by term-wise differentiation.

    Valid because J_nu is x^nu times an entire function of x^2; each series
    term is a plain power of x.
    """
    _check_base(base)
    _check_order(nu)
    if is_integer(nu):
        nu = round(nu)
    if x <= 0:
        raise DomainError(f"x must be positive, got {x!r}")
    pref = _prefactor(nu, base, ctx)
    b = base ** (nu + 1)
    z = base * x * x
    acc = Kahan()
    term = 1.0
    scale = 0.0
    prev = 0.0
    qk = 1.0
    k = 0
    tail = None
    while k <= ctx.max_terms:
        contrib = term * (nu + 2 * k)
        acc.add(contrib)
        c_abs = abs(contrib)
        scale = max(scale, c_abs)
        if k > 2 and prev > 0.0 and c_abs > 0.0:
            r = c_abs / prev
            if r < 1.0:
                t = c_abs * r / (1.0 - r)
                if t <= ctx.eps * abs(acc.total) or t < 1e-300:
                    tail = t
                    break
        prev = c_abs
        term = term * (-1.0) * qk * z / ((1.0 - base * qk) * (1.0 - b * qk))
        qk *= base
        k += 1
    if tail is None:
        raise Divergent(
            f"derivative series failed to converge within max_terms={ctx.max_terms}"
        )
    lead = pref * x ** (nu - 1)
    alead = abs(lead)
    return BesselEval(lead * acc.total, alead * tail, k + 1, alead * scale)


def dq_jq(nu: float, x: float, ctx: QContext) -> float:
    """The base-q q-derivative of J_nu(.; q^2) at x, in closed form:

        -q/(1-q) J_{nu+1}(xq; q^2) + (1-q^nu)/(x(1-q)) J_nu(x; q^2).

    Agrees with the difference quotient applied to jq; the closed form
    avoids the subtraction of nearby values.
    """
    return _dq_jq_eval(nu, x, ctx)[0]


def _dq_jq_eval(nu: float, x: float, ctx: QContext) -> tuple[float, float]:
    """(value, scale) of dq_jq; scale is the residual normalizer."""
    if x <= 0:
        raise DomainError(f"x must be positive, got {x!r}")
    q = ctx.q
    p = q * q
    c1 = -q / (1 - q)
    c2 = (1 - q ** nu) / (x * (1 - q))
    a = jq(nu + 1, x * q, p, ctx)
    value = c1 * a.value
    scale = abs(c1) * a.scale
    if c2 != 0.0:
        b = jq(nu, x, p, ctx)
        value += c2 * b.value
        scale += abs(c2) * b.scale
    return value, scale
