"""Sparse exact Puiseux series in mixed exponentiated/formal variables.

An exponentiated variable (q- or y-type) may carry rational exponents
with a fixed per-variable denominator bound and may appear with negative
exponents. A formal variable (tau-type) only ever appears with
nonnegative integer exponents; it is never exponentiated or inverted.

Truncation is by total weighted degree: every variable weighs its
exponent. Coefficients are `fractions.Fraction`; all operations are
exact up to the declared truncation order.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence


class RosterMismatch(ValueError):
    pass


class BadConstantTerm(ValueError):
    pass


class NonzeroConstantInner(ValueError):
    pass


class ZeroLinearTerm(ValueError):
    pass


class NotMirrorShaped(ValueError):
    pass


class BranchCutViolation(ValueError):
    pass


@dataclass(frozen=True)
class Roster:
    """Variable roster: names, exponent denominators, formal flags."""

    names: tuple[str, ...]
    denoms: tuple[int, ...]
    formal: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.names) == len(self.denoms) == len(self.formal)):
            raise ValueError("roster fields must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for d, f in zip(self.denoms, self.formal):
            if d < 1 or (f and d != 1):
                raise ValueError("formal variables must have denominator 1")

    def index(self, name: str) -> int:
        return self.names.index(name)


def make_roster(names: Sequence[str], denoms: Sequence[int] | None = None,
                formal: Sequence[bool] | None = None) -> Roster:
    n = len(names)
    return Roster(tuple(names),
                  tuple(denoms) if denoms is not None else (1,) * n,
                  tuple(formal) if formal is not None else (False,) * n)


class PuiseuxSeries:
    """Truncated sparse Puiseux series with exact rational coefficients.

    Exponents are stored as integers scaled by the per-variable
    denominator; the public API speaks in Fractions.
    """

    __slots__ = ("roster", "order", "terms")

    def __init__(self, roster: Roster, order, terms: Mapping[tuple[int, ...], Fraction]):
        self.roster = roster
        self.order = Fraction(order)
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if self._weight(e) > self.order:
                continue
            for i, f in enumerate(roster.formal):
                if f and e[i] < 0:
                    raise ValueError("negative exponent on formal variable")
            clean[tuple(e)] = c
        self.terms = clean

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, roster: Roster, order) -> "PuiseuxSeries":
        return cls(roster, order, {})

    @classmethod
    def constant(cls, roster: Roster, order, value) -> "PuiseuxSeries":
        return cls(roster, order, {(0,) * len(roster.names): Fraction(value)})

    @classmethod
    def monomial(cls, roster: Roster, order, exponents: Mapping[str, Fraction],
                 coef=1) -> "PuiseuxSeries":
        e = [0] * len(roster.names)
        for name, p in exponents.items():
            i = roster.index(name)
            p = Fraction(p)
            scaled = p * roster.denoms[i]
            if scaled.denominator != 1:
                raise ValueError(
                    f"exponent {p} of {name} exceeds denominator bound {roster.denoms[i]}")
            e[i] = int(scaled)
        return cls(roster, order, {tuple(e): Fraction(coef)})

    # -- inspection ---------------------------------------------------

    def _weight(self, e: tuple[int, ...]) -> Fraction:
        return sum(Fraction(x, d) for x, d in zip(e, self.roster.denoms))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.roster.names), Fraction(0))

    def valuation(self) -> Optional[Fraction]:
        if not self.terms:
            return None
        return min(self._weight(e) for e in self.terms)

    def coefficient(self, exponents: Mapping[str, Fraction]) -> Fraction:
        e = [0] * len(self.roster.names)
        for name, p in exponents.items():
            i = self.roster.index(name)
            scaled = Fraction(p) * self.roster.denoms[i]
            if scaled.denominator != 1:
                return Fraction(0)
            e[i] = int(scaled)
        return self.terms.get(tuple(e), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        out = []
        for e, c in self.terms.items():
            out.append((tuple(Fraction(x, d) for x, d in zip(e, self.roster.denoms)), c))
        out.sort(key=lambda t: (sum(t[0]), t[0]))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self.roster == other.roster and self.order == other.order
                and self.terms == other.terms)

    def __repr__(self) -> str:
        parts = []
        for e, c in self.sorted_terms()[:8]:
            mono = "*".join(f"{v}^{p}" for v, p in zip(self.roster.names, e) if p)
            parts.append(f"{c}{'*' + mono if mono else ''}")
        tail = " + ..." if len(self.terms) > 8 else ""
        return f"<series O({self.order}): {' + '.join(parts) or '0'}{tail}>"

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "PuiseuxSeries") -> Fraction:
        if self.roster != other.roster:
            raise RosterMismatch("incompatible variable rosters")
        return min(self.order, other.order)

    def truncate(self, order) -> "PuiseuxSeries":
        return PuiseuxSeries(self.roster, order, self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(self.roster, self.order, other)
        order = self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return PuiseuxSeries(self.roster, order, t)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.roster, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(self.roster, self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "PuiseuxSeries":
        k = Fraction(k)
        return PuiseuxSeries(self.roster, self.order,
                             {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        order = self._check(other)
        denoms = self.roster.denoms
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            w1 = self._weight(e1)
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if w1 + other._weight(e2) > order:
                    continue
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return PuiseuxSeries(self.roster, order, out)

    __rmul__ = __mul__

    def shift(self, exponents: Mapping[str, Fraction]) -> "PuiseuxSeries":
        """Multiply by a monomial (exponent shift)."""
        mono = PuiseuxSeries.monomial(self.roster, self.order, exponents)
        (me,) = mono.terms.keys()
        return PuiseuxSeries(self.roster, self.order,
                             {tuple(a + b for a, b in zip(e, me)): c
                              for e, c in self.terms.items()})


# -- transcendental operations ----------------------------------------


def series_exp(s: PuiseuxSeries) -> PuiseuxSeries:
    if s.constant_term():
        raise BadConstantTerm("exp requires zero constant term")
    v = s.valuation()
    one = PuiseuxSeries.constant(s.roster, s.order, 1)
    if v is None:
        return one
    if v <= 0:
        raise BadConstantTerm("exp requires positive valuation")
    out = one
    p = one
    k = 1
    while k * v <= s.order:
        p = p * s
        if p.is_zero():
            break
        out = out + p.scale(Fraction(1, math.factorial(k)))
        k += 1
    return out


def series_log(s: PuiseuxSeries) -> PuiseuxSeries:
    if s.constant_term() != 1:
        raise BadConstantTerm("log requires constant term 1")
    u = s - 1
    v = u.valuation()
    out = PuiseuxSeries.zero(s.roster, s.order)
    if v is None:
        return out
    if v <= 0:
        raise BadConstantTerm("log requires 1 + positive-valuation tail")
    p = PuiseuxSeries.constant(s.roster, s.order, 1)
    k = 1
    while k * v <= s.order:
        p = p * u
        if p.is_zero():
            break
        out = out + p.scale(Fraction((-1) ** (k + 1), k))
        k += 1
    return out


def _rational_root(c: Fraction, e: Fraction) -> Fraction:
    """c**e as an exact Fraction, or raise ValueError."""
    if e.denominator == 1:
        return c ** int(e)
    if c <= 0:
        raise ValueError("cannot take fractional power of nonpositive constant")

    def iroot(m: int, k: int) -> int:
        r = round(m ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand ** k == m:
                return cand
        raise ValueError(f"{m} has no integer {k}-th root")

    k = e.denominator
    base = Fraction(iroot(c.numerator, k), iroot(c.denominator, k))
    return base ** e.numerator


def series_pow(s: PuiseuxSeries, e) -> PuiseuxSeries:
    """s**e for rational e; the lowest-weight term of s must be unique.

    The leading monomial is exponentiated directly (its new exponents
    must respect the per-variable denominators) and the tail via the
    binomial series.
    """
    e = Fraction(e)
    if s.is_zero():
        if e > 0:
            return s
        raise ZeroDivisionError("0 to a nonpositive power")
    v = s.valuation()
    lead = [(ex, c) for ex, c in s.terms.items() if s._weight(ex) == v]
    if len(lead) != 1:
        raise ValueError("leading term not unique; cannot take rational power")
    (le, lc) = lead[0]
    c0 = _rational_root(lc, e)
    roster = s.roster
    me = []
    for i, x in enumerate(le):
        p = Fraction(x, roster.denoms[i]) * e
        scaled = p * roster.denoms[i]
        if scaled.denominator != 1:
            raise ValueError("power pushes exponent beyond denominator bound")
        if roster.formal[i] and (p < 0 or p.denominator != 1):
            raise ValueError("power not admissible on a formal variable")
        me.append(int(scaled))
    me = tuple(me)
    if len(s.terms) == 1:
        return PuiseuxSeries(roster, s.order, {me: c0})
    w0 = v * e
    # truncation bookkeeping: u-terms of s/lead are valid up to weight
    # s.order - v, so the result is valid up to w0 + (s.order - v);
    # for e > 1 this exceeds s.order, because every product of e terms
    # of s with one factor in the unknown tail lands above that bound
    res_order = w0 + (s.order - v)
    u_order = s.order - v
    u_terms = {}
    for e2, c in s.terms.items():
        u_terms[tuple(a - b for a, b in zip(e2, le))] = c / lc
    u = PuiseuxSeries(roster, u_order, u_terms) - 1
    uv = u.valuation()
    if uv is None or uv <= 0:
        raise ValueError("tail of leading-term factorization not positive")
    out = PuiseuxSeries.constant(roster, u_order, 1)
    p = PuiseuxSeries.constant(roster, u_order, 1)
    coef = Fraction(1)
    k = 0
    while (k + 1) * uv <= u_order:
        coef = coef * (e - k) / (k + 1)
        k += 1
        p = p * u
        if p.is_zero():
            break
        out = out + p.scale(coef)
    result = {}
    for e2, c in out.terms.items():
        result[tuple(a + b for a, b in zip(e2, me))] = c * c0
    return PuiseuxSeries(roster, res_order, result)


def series_compose(outer: PuiseuxSeries, inner: PuiseuxSeries) -> PuiseuxSeries:
    """Substitute `inner` for the single variable of `outer`."""
    if len(outer.roster.names) != 1:
        raise ValueError("outer series must be univariate")
    if inner.constant_term():
        raise NonzeroConstantInner("inner series must have zero constant term")
    iv = inner.valuation()
    out = PuiseuxSeries.zero(inner.roster, inner.order)
    if not outer.terms:
        return out
    d = outer.roster.denoms[0]
    exps = []
    for (e,), c in outer.terms.items():
        if e % d:
            raise ValueError("composition requires integer outer exponents")
        if e < 0:
            raise ValueError("composition requires nonnegative outer exponents")
        exps.append((e // d, c))
    exps.sort()
    # Horner over descending exponents
    k_prev = None
    acc = PuiseuxSeries.zero(inner.roster, inner.order)
    for k, c in sorted(exps, reverse=True):
        if k_prev is not None:
            for _ in range(k_prev - k):
                acc = acc * inner
        acc = acc + c
        k_prev = k
    for _ in range(k_prev):
        if iv is not None and acc.is_zero():
            break
        acc = acc * inner
    return acc


def lagrange_invert(s: PuiseuxSeries, order: int,
                    out_name: Optional[str] = None) -> PuiseuxSeries:
    """Compositional inverse of a univariate series c1*z + O(z^2)."""
    if len(s.roster.names) != 1 or s.roster.denoms[0] != 1:
        raise ValueError("inversion requires a univariate integer-exponent series")
    if s.constant_term():
        raise ZeroLinearTerm("series must vanish at 0")
    c1 = s.coefficient({s.roster.names[0]: 1})
    if not c1:
        raise ZeroLinearTerm("linear coefficient is zero")
    name = out_name or s.roster.names[0]
    roster = make_roster([name], [1], [s.roster.formal[0]])
    t = PuiseuxSeries.monomial(roster, order, {name: 1})
    h = (s - PuiseuxSeries.monomial(s.roster, s.order, {s.roster.names[0]: 1}, c1)).truncate(order)
    f = t.scale(1 / c1)
    for _ in range(order + 1):
        nf = (t - series_compose(h, f)).scale(1 / c1)
        if nf == f:
            break
        f = nf
    return f


def substitute(s: PuiseuxSeries, images: Mapping[str, PuiseuxSeries],
               order=None) -> PuiseuxSeries:
    """Substitute a series for every variable of s.

    Every image must have a unique interpretation for the rational
    powers appearing in s (delegated to series_pow). Images must share a
    roster.
    """
    imgs = [images[n] for n in s.roster.names]
    tgt = imgs[0].roster
    order = Fraction(order) if order is not None else min(i.order for i in imgs)
    nt = len(tgt.names)
    acc: dict[tuple[int, ...], Fraction] = {}
    res_order = order
    cache: dict[tuple[int, int], PuiseuxSeries] = {}

    def power(i: int, scaled: int) -> PuiseuxSeries:
        key = (i, scaled)
        if key not in cache:
            cache[key] = series_pow(imgs[i], Fraction(scaled, s.roster.denoms[i]))
        return cache[key]

    for e, c in s.terms.items():
        # Monomial images are exact; collect them into a single exponent
        # shift applied after the series factors are multiplied out, so
        # that a negative-weight monomial cannot push otherwise-retained
        # terms past the truncation bound mid-product.
        shift_e = [0] * nt
        shift_w = Fraction(0)
        coef = Fraction(c)
        factors: list[tuple[int, int]] = []
        for i, x in enumerate(e):
            if not x:
                continue
            img = imgs[i]
            if len(img.terms) == 1:
                p = Fraction(x, s.roster.denoms[i])
                ((ie, ic),) = img.terms.items()
                coef *= _rational_root(ic, p)
                for j, xe in enumerate(ie):
                    scaled = Fraction(xe) * p
                    if scaled.denominator != 1:
                        raise ValueError(
                            "substitution exponent exceeds denominator bound")
                    shift_e[j] += int(scaled)
                shift_w += img._weight(ie) * p
            else:
                factors.append((i, x))
        if factors:
            term = power(*factors[0])
            for f in factors[1:]:
                term = term * power(*f)
            res_order = min(res_order, term.order + shift_w)
            for te, tc in term.terms.items():
                ne = tuple(a + b for a, b in zip(te, shift_e))
                acc[ne] = acc.get(ne, Fraction(0)) + tc * coef
        else:
            ne = tuple(shift_e)
            acc[ne] = acc.get(ne, Fraction(0)) + coef
    return PuiseuxSeries(tgt, res_order, acc)


def multivar_invert(log_corrections: Sequence[PuiseuxSeries],
                    tau_series: Sequence[PuiseuxSeries],
                    q_names: Sequence[str], tau_names: Sequence[str],
                    q_denoms: Sequence[int], order) -> list[PuiseuxSeries]:
    """Invert a mirror-shaped map.

    Input (all series in a common y-roster of length r' = r + s):
      log q_a = log y_a + A_a(y),  A_a with no constant term (a = 1..r)
      tau_b   = B_b(y),            B_b with zero constant term (b = 1..s)
    where B_b = y^{v_b} * (1 + higher) and v_b has exponent exactly 1 on
    y_{r+b} and no other extended variable. Returns [Y_1..Y_{r'}] as
    series in (q_1..q_r, tau_1..tau_s) with q(Y(q,tau)) = q and
    tau(Y(q,tau)) = tau to the truncation order.
    """
    r = len(log_corrections)
    sdim = len(tau_series)
    if r + sdim == 0:
        return []
    src = (log_corrections + list(tau_series))[0].roster if (list(log_corrections) + list(tau_series)) else None
    src = (list(log_corrections) + list(tau_series))[0].roster
    rp = len(src.names)
    if rp != r + sdim:
        raise NotMirrorShaped("roster length must match number of relations")
    order = Fraction(order)
    tgt = make_roster(list(q_names) + list(tau_names),
                      list(q_denoms) + [1] * sdim,
                      [False] * r + [True] * sdim)
    for A in log_corrections:
        if A.constant_term():
            raise NotMirrorShaped("log-correction has a constant term")
    leads = []
    for b, B in enumerate(tau_series):
        if B.constant_term():
            raise NotMirrorShaped("tau relation has a constant term")
        v = B.valuation()
        lead = [(e, c) for e, c in B.terms.items() if B._weight(e) == v]
        if len(lead) != 1:
            raise NotMirrorShaped("tau relation leading term not unique")
        (le, lc) = lead[0]
        if lc != 1:
            raise NotMirrorShaped("tau relation leading coefficient must be 1")
        vexp = [Fraction(x, d) for x, d in zip(le, src.denoms)]
        if vexp[r + b] != 1 or any(vexp[r + c] for c in range(sdim) if c != b):
            raise NotMirrorShaped("tau relation not triangular in extended variables")
        leads.append(vexp)

    def base_monomial(exps: Mapping[str, Fraction], coef=1):
        return PuiseuxSeries.monomial(tgt, order, exps, coef)

    # starting point: Y_a = q_a; Y_{r+b} = tau_b * prod q_a^{-v_{b,a}}
    Y = []
    for a in range(r):
        Y.append(base_monomial({q_names[a]: Fraction(1)}))
    for b in range(sdim):
        exps = {tau_names[b]: Fraction(1)}
        for a in range(r):
            if leads[b][a]:
                exps[q_names[a]] = -leads[b][a]
        Y.append(base_monomial(exps))

    names = src.names
    for _ in range(int(math.ceil(order)) * max([1] + list(q_denoms)) + 3):
        images = dict(zip(names, Y))
        newY = []
        for a in range(r):
            A = log_corrections[a]
            if A.is_zero():
                newY.append(base_monomial({q_names[a]: Fraction(1)}))
                continue
            corr = substitute(A, images, order)
            newY.append(base_monomial({q_names[a]: Fraction(1)}) * series_exp(-corr))
        for b in range(sdim):
            B = tau_series[b]
            lead_mono = PuiseuxSeries.monomial(
                src, B.order, dict((names[i], leads[b][i]) for i in range(rp) if leads[b][i]))
            C = B - lead_mono
            rhs = base_monomial({tau_names[b]: Fraction(1)})
            if not C.is_zero():
                rhs = rhs - substitute(C, images, order)
            for i in range(rp):
                if i == r + b or not leads[b][i]:
                    continue
                rhs = rhs * series_pow(Y[i], -leads[b][i])
            newY.append(rhs)
        if all(a.terms == b.terms for a, b in zip(Y, newY)):
            Y = newY
            break
        Y = newY
    return Y


# -- numeric evaluation ------------------------------------------------


def eval_complex(s: PuiseuxSeries, assignment: Mapping[str, complex]) -> complex:
    """Evaluate on the principal branch.

    Raises BranchCutViolation when a variable with a genuinely
    fractional exponent is assigned a value on the cut (-inf, 0].
    """
    vals = []
    for i, name in enumerate(s.roster.names):
        if name not in assignment:
            raise KeyError(f"no value for variable {name}")
        vals.append(complex(assignment[name]))
    total = 0 + 0j
    for e, c in s.terms.items():
        prod = complex(c)
        for i, x in enumerate(e):
            if not x:
                continue
            p = Fraction(x, s.roster.denoms[i])
            v = vals[i]
            if p.denominator != 1 and v.imag == 0 and v.real <= 0:
                raise BranchCutViolation(
                    f"variable {s.roster.names[i]} on the branch cut")
            if v == 0:
                if p < 0:
                    raise ZeroDivisionError("negative power of zero")
                prod = 0 if p > 0 else prod
                continue
            if p.denominator == 1:
                prod *= v ** int(p)
            else:
                prod *= cmath.exp(complex(p) * cmath.log(v))
        total += prod
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise OverflowError("series evaluation overflowed")
    return total


# -- JSON round-trip ----------------------------------------------------


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def series_to_json(s: PuiseuxSeries) -> dict:
    terms = []
    for e, c in s.sorted_terms():
        terms.append({"exp": [_frac_str(x) for x in e], "coef": _frac_str(c)})
    return {
        "vars": list(s.roster.names),
        "denoms": list(s.roster.denoms),
        "formal": list(s.roster.formal),
        "order": _frac_str(s.order),
        "terms": terms,
    }


def series_from_json(data: dict) -> PuiseuxSeries:
    names = data["vars"]
    denoms = data.get("denoms", [1] * len(names))
    formal = data.get("formal", [False] * len(names))
    roster = make_roster(names, denoms, formal)
    order = Fraction(data["order"])
    terms = {}
    for t in data["terms"]:
        e = []
        for x, d in zip(t["exp"], denoms):
            scaled = Fraction(x) * d
            if scaled.denominator != 1:
                raise ValueError("exponent incompatible with declared denominator")
            e.append(int(scaled))
        terms[tuple(e)] = Fraction(t["coef"])
    return PuiseuxSeries(roster, order, terms)
