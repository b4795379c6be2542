"""I-functions, mirror maps, superpotentials and open invariants.

Cohomology-valued I-function coefficients are polynomials in the
divisor classes pbar_1..pbar_r truncated at degree n (nilpotency),
Laurent in 1/z, tensored with a twisted-sector label. Only the H^0 and
H^2 parts feed the mirror map and the open-closed extraction, but the
full truncated expansion is kept for the normalization checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import Vec, solve_unique
from .extended import ExtendedFanData, KEffElement, keff_enumerate
from .fan import (DiscClass, StackyFan, XBarResult, compute_box, is_gorenstein,
                  star_subdivide_xbar, wall_curve_classes)
from .series import (PuiseuxSeries, Roster, make_roster, multivar_invert,
                     series_exp, series_pow, substitute)


class MirrorShapeViolation(ValueError):
    pass


class GaugeUnsolvableError(ValueError):
    pass


class BasicNotOneError(ValueError):
    pass


class NotGorensteinError(ValueError):
    pass


class NotFanoError(ValueError):
    pass


# coefficient polynomials: dict[(zexp, pexp)] -> Fraction, pexp a tuple of
# length r with sum <= n

CoefPoly = dict


def _poly_mul(a: CoefPoly, b: CoefPoly, n: int) -> CoefPoly:
    out: CoefPoly = {}
    for (za, pa), ca in a.items():
        for (zb, pb), cb in b.items():
            pe = tuple(x + y for x, y in zip(pa, pb))
            if sum(pe) > n:
                continue
            key = (za + zb, pe)
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v}


def _dbar(ext: ExtendedFanData, j: int) -> CoefPoly:
    """D-bar_j = sum_{a<=r} d_{aj} pbar_a as a degree-1 polynomial."""
    out: CoefPoly = {}
    if j >= ext.m:
        return out
    for a in range(ext.r):
        c = ext.basis[a][j]
        if c:
            pe = tuple(1 if b == a else 0 for b in range(ext.r))
            out[(0, pe)] = Fraction(c)
    return out


def _i_coefficient(ext: ExtendedFanData, kel: KEffElement) -> CoefPoly:
    """Expansion of the product over rays for one effective class.

    Each factor (Dbar_j + c z) with c != 0 is written as c z times
    exp(log(1 + Dbar_j/(c z))); nilpotency of the pbar's truncates every
    logarithm at degree n, so the whole coefficient assembles from a
    scalar monomial in z, an optional product of bare Dbar factors
    (integer-negative pairings), and one exponential.
    """
    n = ext.dim
    r = ext.r
    scalar = Fraction(1)
    zbase = 0
    bare: list[int] = []
    slog: dict[tuple[int, int], Fraction] = {}  # (j, i) -> coef of Dbar_j^i z^-i
    for j, p in enumerate(kel.pairings):
        if p == 0:
            continue
        if p < 0:
            ks = range(math.ceil(p), 0)
            sign = 1
        else:
            ks = range(0, math.ceil(p))
            sign = -1
        for k in ks:
            c = p - k
            if c == 0:
                assert j < ext.m, "vanishing factor on an extended index"
                bare.append(j)
                continue
            if sign > 0:
                scalar *= c
                zbase += 1
            else:
                scalar /= c
                zbase -= 1
            if j < ext.m:
                for i in range(1, n + 1):
                    slog[(j, i)] = slog.get((j, i), Fraction(0)) + \
                        sign * Fraction((-1) ** (i + 1), i) / c ** i
    # assemble S = sum slog * Dbar_j^i z^{-i}
    S: CoefPoly = {}
    dbar_pows: dict[tuple[int, int], CoefPoly] = {}
    for (j, i), coef in slog.items():
        if not coef:
            continue
        key = (j, i)
        if key not in dbar_pows:
            p1 = _dbar(ext, j)
            acc = p1
            for _ in range(i - 1):
                acc = _poly_mul(acc, p1, n)
            dbar_pows[key] = acc
        for (zz, pe), cc in dbar_pows[key].items():
            k2 = (zz - i, pe)
            S[k2] = S.get(k2, Fraction(0)) + coef * cc
    # exp(S): S has p-degree >= 1 in every term, so n+1 powers suffice
    expS: CoefPoly = {(0, (0,) * r): Fraction(1)}
    power: CoefPoly = {(0, (0,) * r): Fraction(1)}
    for i in range(1, n + 1):
        power = _poly_mul(power, S, n)
        if not power:
            break
        for key, cc in power.items():
            expS[key] = expS.get(key, Fraction(0)) + cc / math.factorial(i)
    out = expS
    for j in bare:
        out = _poly_mul(out, _dbar(ext, j), n)
    return {(z + zbase, pe): c * scalar for (z, pe), c in out.items() if c * scalar}


@dataclass
class ISeries:
    ext: ExtendedFanData
    order: Fraction
    z_depth: int
    elements: list[KEffElement]
    coeffs: dict[tuple, CoefPoly]  # keyed by delta

    def coefficient(self, delta, zexp: int, pexp) -> Fraction:
        return self.coeffs.get(tuple(delta), {}).get((zexp, tuple(pexp)), Fraction(0))


def i_function(ext: ExtendedFanData, order, z_depth: int = 2) -> ISeries:
    order = Fraction(order)
    elements = keff_enumerate(ext, order)
    coeffs = {}
    for kel in elements:
        poly = _i_coefficient(ext, kel)
        coeffs[kel.delta] = {k: v for k, v in poly.items() if k[0] >= -z_depth - ext.dim}
    return ISeries(ext, order, z_depth, elements, coeffs)


def check_normalization(iseries: ISeries) -> tuple[bool, list[str]]:
    """z^0 coefficient is 1; the 1/z coefficient lies in H^{<=2}_orb."""
    errors = []
    ext = iseries.ext
    zero_p = (0,) * ext.r
    for kel in iseries.elements:
        poly = iseries.coeffs[kel.delta]
        for (z, pe), c in poly.items():
            if z > 0 and c:
                errors.append(f"positive z-power {z} at {kel.delta}")
            if z == 0 and c:
                if kel.weight == 0 and pe == zero_p and c == 1:
                    continue
                errors.append(f"unexpected z^0 term at {kel.delta}: {pe} -> {c}")
            if z == -1 and c:
                if kel.nu == (0,) * ext.dim:
                    if sum(pe) > 1:
                        errors.append(f"1/z term of degree {sum(pe)} at {kel.delta}")
                else:
                    age = next(el.age for el in ext.box if el.nu == kel.nu)
                    if age > 1 or sum(pe) > 0:
                        errors.append(
                            f"1/z term outside H^2_orb at {kel.delta} (sector {kel.nu})")
    return (not errors, errors)


# -- mirror map ----------------------------------------------------------


@dataclass
class MirrorMap:
    ext: ExtendedFanData
    order: Fraction
    y_roster: Roster
    q_names: tuple[str, ...]
    tau_names: tuple[str, ...]
    q_denoms: tuple[int, ...]
    log_corrections: list[PuiseuxSeries]   # log q_a = log y_a + A_a(y)
    tau: list[PuiseuxSeries]               # tau_b = B_b(y)

    def inverse(self) -> list[PuiseuxSeries]:
        return multivar_invert(self.log_corrections, self.tau,
                               self.q_names, self.tau_names,
                               self.q_denoms, self.order)


def _chart_denoms(ext: ExtendedFanData, elements: Sequence[KEffElement],
                  extra_fracs: Sequence[Fraction] = ()) -> list[int]:
    dens = [1] * ext.r_prime
    for kel in elements:
        for a, x in enumerate(kel.delta):
            dens[a] = dens[a] * x.denominator // math.gcd(dens[a], x.denominator)
    for f in extra_fracs:
        for a in range(ext.r_prime):
            dens[a] = dens[a] * f.denominator // math.gcd(dens[a], f.denominator)
    return dens


def mirror_map(ext: ExtendedFanData, order,
               iseries: Optional[ISeries] = None) -> MirrorMap:
    order = Fraction(order)
    if iseries is None or iseries.order < order:
        iseries = i_function(ext, order, z_depth=2)
    ok, errors = check_normalization(iseries)
    if not ok:
        raise MirrorShapeViolation("; ".join(errors))
    r, rp = ext.r, ext.r_prime
    y_names = [f"y{a + 1}" for a in range(rp)]
    denoms = _chart_denoms(ext, iseries.elements)
    roster = make_roster(y_names, denoms, [False] * rp)
    zero_p = (0,) * r
    A = [PuiseuxSeries.zero(roster, order) for _ in range(r)]
    B = [PuiseuxSeries.zero(roster, order) for _ in range(rp - r)]
    extra_by_nu = {el.nu: b for b, el in enumerate(ext.extra)}
    zero_nu = (0,) * ext.dim
    for kel in iseries.elements:
        if kel.weight == 0:
            continue
        poly = iseries.coeffs[kel.delta]
        mono = {y_names[a]: kel.delta[a] for a in range(rp) if kel.delta[a]}
        if kel.nu == zero_nu:
            for a in range(r):
                pe = tuple(1 if b == a else 0 for b in range(r))
                c = poly.get((-1, pe), Fraction(0))
                if c:
                    A[a] = A[a] + PuiseuxSeries.monomial(roster, order, mono, c)
        elif kel.nu in extra_by_nu:
            c = poly.get((-1, zero_p), Fraction(0))
            if c:
                b = extra_by_nu[kel.nu]
                B[b] = B[b] + PuiseuxSeries.monomial(roster, order, mono, c)
    q_names = tuple(f"q{a + 1}" for a in range(r))
    tau_names = tuple(f"tau{r + b + 1}" for b in range(rp - r))
    return MirrorMap(ext, order, roster, q_names, tau_names,
                     tuple(denoms[:r]), A, B)


# -- superpotentials -----------------------------------------------------


@dataclass(frozen=True)
class PotentialTerm:
    vector: Vec             # stacky vector b_j or Box vector nu
    ray_index: int          # index into ext.all_vectors()
    is_extended: bool
    coefficient: PuiseuxSeries


@dataclass(frozen=True)
class Potential:
    gauge: tuple[int, ...]
    terms: tuple[PotentialTerm, ...]
    label: str = ""


def _gauge_exponents(ext: ExtendedFanData, gauge: Sequence[int]) -> dict[int, list[Fraction]]:
    """For each ray j not in the gauge cone: exponents of C_j as a
    monomial in the chart coordinates (one per basis class)."""
    free = [j for j in range(ext.m_prime) if j not in gauge]
    if len(free) != ext.r_prime:
        raise GaugeUnsolvableError("gauge cone must have dim(fan) rays")
    out: dict[int, list[Fraction]] = {}
    M = [[Fraction(ext.basis[a][j]) for j in free] for a in range(ext.r_prime)]
    for a in range(ext.r_prime):
        rhs = [Fraction(1) if b == a else Fraction(0) for b in range(ext.r_prime)]
        col = solve_unique(M, rhs)
        if col is None:
            raise GaugeUnsolvableError("gauge constraints are inconsistent")
        for jj, j in enumerate(free):
            out.setdefault(j, [Fraction(0)] * ext.r_prime)[a] = col[jj]
    return out


def hori_vafa(ext: ExtendedFanData, gauge: Optional[Sequence[int]] = None,
              chart_prefix: str = "y", order=10) -> Potential:
    """W^HV: one term z^{b_j} (or z^nu) per extended ray; coefficients are
    monomials in the chart coordinates, C_j = 1 on the gauge cone."""
    gauge = tuple(gauge) if gauge is not None else ext.fan.max_cones[0]
    if gauge not in ext.fan.max_cones:
        raise GaugeUnsolvableError(f"{gauge} is not a maximal cone")
    expo = _gauge_exponents(ext, gauge)
    fracs = [x for exps in expo.values() for x in exps]
    denoms = _chart_denoms(ext, [], fracs)
    names = [f"{chart_prefix}{a + 1}" for a in range(ext.r_prime)]
    roster = make_roster(names, denoms, [False] * ext.r_prime)
    vectors = ext.all_vectors()
    terms = []
    for j in range(ext.m_prime):
        if j in gauge:
            coef = PuiseuxSeries.constant(roster, order, 1)
        else:
            coef = PuiseuxSeries.monomial(
                roster, order,
                {names[a]: expo[j][a] for a in range(ext.r_prime) if expo[j][a]})
        terms.append(PotentialTerm(vectors[j], j, j >= ext.m, coef))
    return Potential(gauge, tuple(terms), label="hori-vafa")


def _theorem_status(ext: ExtendedFanData) -> str:
    """Open mirror theorem coverage: manifolds and the P(1,..,1,n) family."""
    if not ext.box:
        return "proved (manifold)"
    fan = ext.fan
    if ext.m == fan.dim + 1:
        indices = []
        from .exact import cone_index
        for c in fan.max_cones:
            indices.append(cone_index(fan.cone_generators(c)))
        big = [i for i in indices if i > 1]
        if len(big) == 1:
            k = big[0]
            ages = sorted(el.age for el in ext.box)
            if ages == [Fraction(i) for i in range(1, k)]:
                return "proved (P(1,...,1,n) family)"
    return "conjectural via the open mirror theorem"


@dataclass
class LFResult:
    potential: Potential
    mirror: MirrorMap
    chart_images: dict[str, PuiseuxSeries]   # y_a -> series in (q, tau)
    status: str


def lf_superpotential(ext: ExtendedFanData, order=10,
                      gauge: Optional[Sequence[int]] = None) -> LFResult:
    """W^LF: the Hori-Vafa coefficients evaluated on the inverse mirror map."""
    order = Fraction(order)
    mm = mirror_map(ext, order)
    Y = mm.inverse()
    hv = hori_vafa(ext, gauge, chart_prefix="y", order=order)
    # align the HV chart roster (possibly finer denominators) with the
    # mirror-map images
    images = {}
    for a, name in enumerate(hv.terms[0].coefficient.roster.names):
        images[name] = Y[a]
    terms = []
    for t in hv.terms:
        coef = substitute(t.coefficient, images, order)
        terms.append(PotentialTerm(t.vector, t.ray_index, t.is_extended, coef))
    pot = Potential(hv.gauge, tuple(terms), label="lagrangian-floer")
    return LFResult(pot, mm, images, _theorem_status(ext))


# -- open invariant extraction -------------------------------------------


@dataclass
class OpenGWTable:
    """n_{1,l,beta_a + d} keyed by (ray index, q-exponents, tau-exponents)."""

    entries: dict[tuple[int, tuple, tuple], Fraction]
    generating: dict[int, PuiseuxSeries]   # normalized series per ray
    status: str


def extract_open_gw(lf: LFResult, ext: ExtendedFanData) -> OpenGWTable:
    mm = lf.mirror
    r = ext.r
    expo = _gauge_exponents(ext, lf.potential.gauge)
    entries: dict[tuple[int, tuple, tuple], Fraction] = {}
    generating = {}
    for t in lf.potential.terms:
        j = t.ray_index
        # LF prefactor: the same gauge solve with q^{d-tilde} on the
        # extended constraints
        qexp = [Fraction(0)] * r
        if j not in lf.potential.gauge:
            for a in range(ext.r_prime):
                if not expo[j][a]:
                    continue
                if a < r:
                    qexp[a] += expo[j][a]
                else:
                    for c, dt in enumerate(ext.dtilde[a - r]):
                        qexp[c] += expo[j][a] * dt
        coef = t.coefficient
        shift = {mm.q_names[a]: -qexp[a] for a in range(r) if qexp[a]}
        S = coef.shift(shift) if shift else coef
        generating[j] = S
        # basic normalization
        zero_q = (0,) * r
        if t.is_extended:
            b = j - ext.m
            basic_tau = tuple(1 if c == b else 0 for c in range(ext.r_prime - r))
            basic = S.coefficient(dict(
                [(mm.tau_names[b], Fraction(1))]))
        else:
            basic_tau = (0,) * (ext.r_prime - r)
            basic = S.constant_term()
        if basic != 1:
            raise BasicNotOneError(
                f"basic coefficient for ray {j} is {basic}, expected 1")
        for exps, c in S.sorted_terms():
            qpart = tuple(exps[:r])
            tpart = tuple(int(x) for x in exps[r:])
            fact = 1
            for l in tpart:
                fact *= math.factorial(l)
            entries[(j, qpart, tpart)] = c * fact
    return OpenGWTable(entries, generating, lf.status)


# -- open-closed bridge ----------------------------------------------------


@dataclass
class BridgeReport:
    xbar: XBarResult
    beta_bar_delta: Optional[tuple]
    closed_series: PuiseuxSeries          # H^0 part of 1/z^2 of I on X-bar, in y
    statement: str
    cross_checked: bool
    match: Optional[bool]


def closed_h0_z2(ext: ExtendedFanData, order, iseries: Optional[ISeries] = None,
                 roster: Optional[Roster] = None) -> PuiseuxSeries:
    """H^0 part of the 1/z^2 coefficient of the I-function, as a y-series."""
    order = Fraction(order)
    if iseries is None:
        iseries = i_function(ext, order, z_depth=2)
    if roster is None:
        names = [f"y{a + 1}" for a in range(ext.r_prime)]
        roster = make_roster(names, _chart_denoms(ext, iseries.elements),
                             [False] * ext.r_prime)
    zero_p = (0,) * ext.r
    zero_nu = (0,) * ext.dim
    out = PuiseuxSeries.zero(roster, order)
    for kel in iseries.elements:
        if kel.nu != zero_nu:
            continue
        c = iseries.coeffs[kel.delta].get((-2, zero_p), Fraction(0))
        if c:
            mono = {roster.names[a]: kel.delta[a]
                    for a in range(ext.r_prime) if kel.delta[a]}
            out = out + PuiseuxSeries.monomial(roster, order, mono, c)
    return out


def open_closed_bridge(fan: StackyFan, beta: DiscClass, order=10) -> BridgeReport:
    from .extended import build_extended

    if not is_gorenstein(fan):
        raise NotGorensteinError("bridge requires a Gorenstein fan")
    if any(w.c1 <= 0 for w in wall_curve_classes(fan)):
        raise NotFanoError("bridge requires all wall curve classes with c1 > 0")
    box = compute_box(fan)
    xbar = star_subdivide_xbar(fan, beta)
    ext_bar = build_extended(xbar.fan)
    closed = closed_h0_z2(ext_bar, order)
    statement = ("n_{1,l,beta} equals the (l+1)-point closed invariant of "
                 "beta-bar = beta + beta_infinity on X-bar; " + xbar.beta_bar_note)
    if xbar.fan != fan:
        return BridgeReport(xbar, None, closed, statement +
                            " (closed-side cross-check needs the subdivided "
                            "model's own mirror data; not compared here)",
                            False, None)
    # X-bar == X: compare closed-side extraction with the open-side series
    ext = ext_bar
    # beta-bar pairing vector: t-coefficients of the basic boundary plus the
    # opposite ray
    w = [Fraction(0)] * ext.m_prime
    if any(beta.ray_mult):
        jb = beta.ray_mult.index(1)
        w[jb] += 1
    else:
        el = box[beta.box_mult.index(1)]
        for j, t in zip(el.cone, el.t):
            w[j] += t
    w[xbar.new_ray_index] += 1
    A = [[Fraction(ext.basis[a][j]) for a in range(ext.r_prime)]
         for j in range(ext.m_prime)]
    delta = solve_unique(A, w)
    if delta is None:
        raise MirrorShapeViolation("beta-bar is not a curve class")
    lf = lf_superpotential(ext, order)
    table = extract_open_gw(lf, ext)
    if any(beta.ray_mult):
        jopen = beta.ray_mult.index(1)
    else:
        el = box[beta.box_mult.index(1)]
        jopen = ext.m + list(ext.extra).index(el)
    S = table.generating[jopen]
    mono = {lf.mirror.q_names[a]: delta[a] for a in range(ext.r) if delta[a]}
    open_side = S.shift(mono) if mono else S
    closed_q = substitute(closed, lf.chart_images, order)
    match = closed_q.terms == open_side.truncate(closed_q.order).terms
    return BridgeReport(xbar, tuple(delta), closed, statement, True, match)
