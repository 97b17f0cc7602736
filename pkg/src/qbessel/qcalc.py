"""q-calculus primitives.

q-shifted factorials, basic hypergeometric series, the q-derivative and the
Jackson q-integral, driven by a shared :class:`QContext` that fixes the base
0 < q < 1 and the truncation tolerances.

Conventions follow Gasper & Rahman: (a;q)_k = prod_{j<k} (1 - a q^j), and
the r_phi_s series carries the ((-1)^k q^(k(k-1)/2))^(1+s-r) factor.

Series accumulation uses compensated (Kahan) summation throughout; the
downstream identity checks are cancellation-heavy, so the guard digits
matter. The finite constructions (qpochhammer, terminating series, the
q-derivative) are duck-typed: fed Fraction inputs they stay exact, which the
test suite exploits as a rational-arithmetic oracle.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    DomainError,
    Divergent,
    InvalidDenominator,
    NonFinite,
    TruncationBudgetExceeded,
)

__all__ = [
    "QContext",
    "SeriesSpec",
    "SeriesValue",
    "qpochhammer",
    "qpochhammer_inf",
    "basic_hypergeometric",
    "q_derivative",
    "q_integral",
    "is_integer",
    "relative_residual",
]

#: |x - round(x)| below this treats x as an integer (routing gate only).
INTEGER_TOL = 1e-12


def is_integer(value) -> bool:
    """True when ``value`` is within INTEGER_TOL of an integer."""
    return abs(value - round(value)) < INTEGER_TOL


def relative_residual(lhs, rhs, *scales) -> float:
    """|lhs - rhs| normalized by the largest participating magnitude."""
    denom = max(abs(lhs), abs(rhs), *(abs(s) for s in scales), 1e-300)
    return abs(lhs - rhs) / denom


@dataclass(frozen=True)
class QContext:
    """The base q plus global numeric tolerances.

    eps is the relative truncation target for infinite series and products;
    max_terms caps any single accumulation loop.
    """

    q: float
    eps: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise DomainError(f"base must satisfy 0 < q < 1, got {self.q!r}")
        if not self.eps > 0:
            raise DomainError(f"eps must be positive, got {self.eps!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")

    def with_base(self, base) -> "QContext":
        """Same tolerances, different base."""
        return dataclasses.replace(self, q=base)

    def squared(self) -> "QContext":
        """Context in base q^2 (where the difference-equation identities live)."""
        return dataclasses.replace(self, q=self.q * self.q)


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of a basic hypergeometric series r_phi_s.

    num_params are a_1..a_r, den_params are b_1..b_s; the (q;q)_k factor is
    implicit and must not be listed.
    """

    num_params: tuple
    den_params: tuple
    base: float
    arg: complex | float

    def __post_init__(self):
        object.__setattr__(self, "num_params", tuple(self.num_params))
        object.__setattr__(self, "den_params", tuple(self.den_params))
        if not (0 < self.base < 1):
            raise DomainError(f"series base must lie in (0,1), got {self.base!r}")


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series (or product) value with truncation metadata.

    scale records the largest |term| seen, the natural normalizer for
    residual checks on cancellation-prone sums.
    """

    value: complex | float
    tail_bound: float
    terms_used: int
    scale: float


class Kahan:
    """Compensated accumulator; works for float and complex terms."""

    __slots__ = ("total", "_carry")

    def __init__(self):
        self.total = 0.0
        self._carry = 0.0

    def add(self, term):
        y = term - self._carry
        t = self.total + y
        self._carry = (t - self.total) - y
        self.total = t


def qpochhammer(a, ctx: QContext, k: int):
    """Finite q-shifted factorial (a;q)_k = prod_{j=0}^{k-1} (1 - a q^j).

    k = 0 is the empty product 1. Exact for exact (Fraction) inputs.
    """
    if k < 0:
        raise DomainError("qpochhammer requires k >= 0")
    q = ctx.q
    one = q ** 0
    out = one
    factor = a
    for _ in range(k):
        out = out * (one - factor)
        factor = factor * q
    return out


def qpochhammer_inf(a, ctx: QContext) -> SeriesValue:
    """Infinite product (a;q)_inf truncated under a geometric tail bound.

    Stops once the multiplicative tail |a| q^K / (1-q) is below eps; the
    reported tail_bound is |value| times that bound. A factor that vanishes
    exactly (a = q^-j) short-circuits to 0.
    """
    qf = float(ctx.q)
    q = ctx.q
    out = None
    factor = a
    scale = 1.0
    k = 0
    while k < ctx.max_terms:
        f = 1 - factor
        out = f if out is None else out * f
        k += 1
        if f == 0:
            return SeriesValue(out, 0.0, k, scale)
        scale = max(scale, abs(out))
        factor = factor * q
        tail = abs(factor) / (1.0 - qf)
        if tail < ctx.eps:
            return SeriesValue(out, abs(out) * tail, k, scale)
    raise TruncationBudgetExceeded(
        f"(a;q)_inf tail not below eps={ctx.eps} within {ctx.max_terms} factors"
    )


def _power_index(value, base) -> int | None:
    """Return n >= 0 with value == base**(-n), or None.

    Detection is logarithmic with a 1e-9 relative gate on the recovered
    exponent; parameters built as float powers of the base land well inside.
    """
    if isinstance(value, complex):
        if value.imag != 0.0:
            return None
        value = value.real
    if value <= 0:
        return None
    n = -math.log(value) / math.log(base)
    r = round(n)
    if r < 0 or abs(n - r) > 1e-9 * max(1.0, abs(n)):
        return None
    return int(r)


def basic_hypergeometric(spec: SeriesSpec, ctx: QContext) -> SeriesValue:
    """Sum the series r_phi_s(a_1..a_r; b_1..b_s; base, z).

    A terminating series (some a_i = base^-n) is summed exactly through its
    last nonzero term; otherwise summation stops when the observed-ratio
    geometric tail bound drops below eps * |partial sum|.

    Raises InvalidDenominator if a b_j = base^-p pole would be reached
    before termination, and Divergent if terms fail to decay within
    max_terms.
    """
    base = spec.base
    z = spec.arg
    d = 1 + len(spec.den_params) - len(spec.num_params)

    k_stop = None  # index of the last potentially nonzero term
    for a in spec.num_params:
        n = _power_index(a, base)
        if n is not None:
            k_stop = n if k_stop is None else min(k_stop, n)
    for b in spec.den_params:
        p = _power_index(b, base)
        if p is not None and (k_stop is None or k_stop > p):
            raise InvalidDenominator(
                f"lower parameter {b!r} = base^-{p} vanishes before termination"
            )

    acc = Kahan()
    term = 1.0 + z * 0
    acc.add(term)
    scale = abs(term)
    prev_abs = scale
    qk = base ** 0
    k = 0
    while True:
        if k_stop is not None and k >= k_stop:
            return SeriesValue(acc.total, 0.0, k + 1, scale)
        if k + 1 > ctx.max_terms:
            raise Divergent(
                f"series terms failed to decay within max_terms={ctx.max_terms}"
            )
        ratio = z
        for a in spec.num_params:
            ratio = ratio * (1 - a * qk)
        den = 1 - base * qk  # the implicit (q;q)_k factor
        for b in spec.den_params:
            den = den * (1 - b * qk)
        if den == 0:
            raise InvalidDenominator("denominator factor vanished during summation")
        ratio = ratio / den
        if d:
            ratio = ratio * ((-qk) ** d)
        term = term * ratio
        qk = qk * base
        k += 1
        acc.add(term)
        t_abs = abs(term)
        if not math.isfinite(t_abs):
            raise Divergent("series terms overflowed; argument outside convergence region")
        scale = max(scale, t_abs)
        if t_abs == 0.0:
            return SeriesValue(acc.total, 0.0, k + 1, scale)
        if prev_abs > 0.0:
            r = t_abs / prev_abs
            if r < 1.0:
                tail = t_abs * r / (1.0 - r)
                if tail <= ctx.eps * abs(acc.total) or tail < 1e-300:
                    return SeriesValue(acc.total, tail, k + 1, scale)
        prev_abs = t_abs


def q_derivative(f: Callable, x, ctx: QContext):
    """The q-difference quotient (f(x) - f(qx)) / ((1-q) x)."""
    if x == 0:
        raise DomainError("q-derivative is undefined at x = 0")
    q = ctx.q
    return (f(x) - f(q * x)) / ((1 - q) * x)


def q_integral(f: Callable, z, ctx: QContext) -> SeriesValue:
    """Jackson integral (1-q) z sum_{k>=0} f(z q^k) q^k.

    The sum stops when a geometric bound on the remaining terms, built from
    the largest recently observed term ratio, is below eps * |partial sum|.
    """
    if not z > 0:
        raise DomainError(f"q-integral requires z > 0, got {z!r}")
    q = float(ctx.q)
    acc = Kahan()
    scale = 0.0
    recent: list[float] = []
    qk = 1.0
    for k in range(ctx.max_terms):
        val = f(z * qk)
        if not math.isfinite(abs(val)):
            raise NonFinite(f"integrand returned a non-finite value at node {z * qk!r}")
        term = val * qk
        acc.add(term)
        t_abs = abs(term)
        scale = max(scale, t_abs)
        recent.append(t_abs)
        if len(recent) > 4:
            recent.pop(0)
        qk *= q
        if k >= 8:
            if max(recent) == 0.0:
                return _q_integral_result(acc, 0.0, k + 1, scale, z, ctx)
            ratios = [
                recent[i + 1] / recent[i]
                for i in range(len(recent) - 1)
                if recent[i] > 0.0
            ]
            if ratios:
                r = max(ratios)
                if r < 1.0:
                    tail = recent[-1] * r / (1.0 - r)
                    if tail <= ctx.eps * abs(acc.total) or tail < 1e-300:
                        return _q_integral_result(acc, tail, k + 1, scale, z, ctx)
    raise TruncationBudgetExceeded(
        f"q-integral tail not below eps={ctx.eps} within {ctx.max_terms} nodes"
    )


def _q_integral_result(acc, tail, terms, scale, z, ctx):
    w = (1 - ctx.q) * z
    return SeriesValue(w * acc.total, abs(w) * tail, terms, abs(w) * scale)
