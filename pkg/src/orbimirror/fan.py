"""Stacky fans, Box elements, labeled polytopes and disc classes.

A stacky fan is a complete simplicial fan together with a lattice
vector b_j = c_j v_j on each ray (v_j primitive, c_j >= 1). The Box of
a cone collects the twisted sectors nu = sum t_k b_{i_k} with
t_k in [0,1) and nu integral; the age of nu is sum t_k.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import (DependentGeneratorsError, Vec, cone_coefficients,
                    cone_index, det, primitive_vector, solve_unique)


class InvalidFanError(ValueError):
    pass


class IncompleteFanError(ValueError):
    pass


class NonBasicClassError(ValueError):
    pass


class PointNotInteriorError(ValueError):
    pass


class UnboundedPolytopeError(ValueError):
    pass


class NonSimpleVertexError(ValueError):
    pass


class InvalidDiscDataError(ValueError):
    pass


@dataclass(frozen=True)
class StackyFan:
    dim: int
    stacky_vectors: tuple[Vec, ...]
    max_cones: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(dim, stacky_vectors, max_cones) -> "StackyFan":
        vecs = tuple(tuple(int(x) for x in v) for v in stacky_vectors)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in max_cones))
        return StackyFan(dim, vecs, cones)

    @property
    def n_rays(self) -> int:
        return len(self.stacky_vectors)

    def labels(self) -> tuple[int, ...]:
        out = []
        for v in self.stacky_vectors:
            g = 0
            for x in v:
                g = math.gcd(g, x)
            out.append(g)
        return tuple(out)

    def primitive_rays(self) -> tuple[Vec, ...]:
        return tuple(primitive_vector(v) for v in self.stacky_vectors)

    def cone_generators(self, cone: Sequence[int]) -> list[Vec]:
        return [self.stacky_vectors[i] for i in cone]


def fan_from_json(data: dict) -> StackyFan:
    dim = int(data["dim"])
    vecs = [list(map(int, v)) for v in data["stacky_vectors"]]
    if "labels" in data:
        labels = [int(c) for c in data["labels"]]
        if len(labels) != len(vecs):
            raise ValueError("labels length mismatch")
        vecs = [[c * x for x in v] for c, v in zip(labels, vecs)]
    return StackyFan.make(dim, vecs, data["max_cones"])


def fan_to_json(fan: StackyFan) -> dict:
    return {"dim": fan.dim,
            "stacky_vectors": [list(v) for v in fan.stacky_vectors],
            "max_cones": [list(c) for c in fan.max_cones]}


@dataclass(frozen=True)
class FanReport:
    simplicial: bool
    complete: bool
    errors: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return self.simplicial and self.complete and not self.errors


def validate_fan(fan: StackyFan, samples: int = 200) -> FanReport:
    errors = []
    n = fan.dim
    vecs = fan.stacky_vectors
    if any(len(v) != n for v in vecs):
        return FanReport(False, False, ("ray dimension mismatch",))
    if any(all(x == 0 for x in v) for v in vecs):
        return FanReport(False, False, ("zero stacky vector",))
    prims = set()
    for v in vecs:
        p = primitive_vector(v)
        if p in prims:
            errors.append(f"repeated ray direction {p}")
        prims.add(p)
    simplicial = True
    for c in fan.max_cones:
        if len(c) != n or len(set(c)) != n:
            simplicial = False
            errors.append(f"cone {c} does not have {n} distinct rays")
            continue
        try:
            cone_index(fan.cone_generators(c))
        except DependentGeneratorsError:
            simplicial = False
            errors.append(f"cone {c} has dependent generators")
    if not simplicial:
        return FanReport(False, False, tuple(errors))

    complete = True
    if n == 1:
        signs = sorted(v[0] > 0 for v in vecs)
        if len(vecs) != 2 or signs != [False, True] or \
                sorted(fan.max_cones) != [(0,), (1,)]:
            complete = False
            errors.append("1-dimensional fan must consist of two opposite rays")
    else:
        walls: dict[frozenset, list] = {}
        for c in fan.max_cones:
            for f in itertools.combinations(c, n - 1):
                walls.setdefault(frozenset(f), []).append(c)
        for f, cs in walls.items():
            if len(cs) != 2:
                complete = False
                errors.append(f"wall {tuple(sorted(f))} lies in {len(cs)} max cones")
        if complete and len(fan.max_cones) > 1:
            # wall-graph connectivity
            adj = {c: set() for c in fan.max_cones}
            for cs in walls.values():
                if len(cs) == 2:
                    adj[cs[0]].add(cs[1])
                    adj[cs[1]].add(cs[0])
            seen = {fan.max_cones[0]}
            queue = [fan.max_cones[0]]
            while queue:
                for nb in adj[queue.pop()]:
                    if nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
            if len(seen) != len(fan.max_cones):
                complete = False
                errors.append("wall graph disconnected")
        if complete:
            rng = random.Random(20240815)
            for _ in range(samples):
                v = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 7))
                          for _ in range(n))
                if all(x == 0 for x in v):
                    continue
                if not any(cone_coefficients(fan.cone_generators(c), v) is not None
                           for c in fan.max_cones):
                    complete = False
                    errors.append(f"direction {v} not covered by any cone")
                    break
    return FanReport(simplicial, complete, tuple(errors))


@dataclass(frozen=True)
class BoxElement:
    nu: Vec
    cone: tuple[int, ...]
    t: tuple[Fraction, ...]
    age: Fraction


def _box_of_cone(fan: StackyFan, cone: Sequence[int]) -> dict[Vec, BoxElement]:
    """All Box elements (including those of faces) of a full-dim cone."""
    from .exact import smith_normal_form

    n = fan.dim
    gens = fan.cone_generators(cone)
    B = [[gens[j][i] for j in range(n)] for i in range(n)]  # columns = gens
    U, S, V = smith_normal_form(B)
    diag = [S[i][i] for i in range(n)]
    # invert U over Q to get group representatives x = U^{-1} y
    Uinv_cols = []
    for j in range(n):
        rhs = [Fraction(1 if i == j else 0) for i in range(n)]
        Uinv_cols.append(solve_unique([[Fraction(U[i][k]) for k in range(n)]
                                       for i in range(n)], rhs))
    out: dict[Vec, BoxElement] = {}
    for y in itertools.product(*[range(d) for d in diag]):
        x = [sum(Uinv_cols[j][i] * y[j] for j in range(n)) for i in range(n)]
        t = solve_unique([[Fraction(B[i][j]) for j in range(n)] for i in range(n)],
                         [Fraction(xi) for xi in x])
        tf = [ti - math.floor(ti) for ti in t]
        if all(ti == 0 for ti in tf):
            continue
        nu = []
        for i in range(n):
            val = sum(tf[j] * gens[j][i] for j in range(n))
            assert val.denominator == 1
            nu.append(int(val))
        support = tuple(cone[j] for j in range(n) if tf[j])
        ts = tuple(tf[j] for j in range(n) if tf[j])
        out[tuple(nu)] = BoxElement(tuple(nu), support, ts, sum(ts))
    return out


def compute_box(fan: StackyFan) -> tuple[BoxElement, ...]:
    """Box' of the fan: nonzero twisted sectors, one per minimal cone."""
    report = validate_fan(fan)
    if not report.valid:
        raise InvalidFanError("; ".join(report.errors) or "invalid fan")
    found: dict[Vec, BoxElement] = {}
    for c in fan.max_cones:
        for nu, el in _box_of_cone(fan, c).items():
            if nu in found:
                if found[nu].cone != el.cone or found[nu].t != el.t:
                    raise InvalidFanError(f"inconsistent Box element at {nu}")
            else:
                found[nu] = el
    return tuple(found[k] for k in sorted(found))


def is_gorenstein(fan: StackyFan) -> bool:
    return all(el.age.denominator == 1 for el in compute_box(fan))


@dataclass(frozen=True)
class WallCurve:
    wall: tuple[int, ...]
    relation: tuple[Fraction, ...]
    c1: Fraction


def wall_curve_classes(fan: StackyFan) -> list[WallCurve]:
    """One curve class per wall of the fan.

    The relation sum a_j b_j = 0 is supported on the wall rays plus the
    two opposite rays; it is normalized so the lower-indexed opposite
    ray has coefficient 1 (the two opposite coefficients need not be
    equal for orbifold fans). c1 = sum a_j.
    """
    report = validate_fan(fan)
    if not report.valid:
        raise InvalidFanError("; ".join(report.errors) or "invalid fan")
    n = fan.dim
    m = fan.n_rays
    out = []
    if n == 1:
        i, j = 0, 1
        c = Fraction(-fan.stacky_vectors[i][0], fan.stacky_vectors[j][0])
        rel = [Fraction(0)] * m
        rel[i], rel[j] = Fraction(1), c
        return [WallCurve((), tuple(rel), Fraction(1) + c)]
    walls: dict[frozenset, list] = {}
    for c in fan.max_cones:
        for f in itertools.combinations(c, n - 1):
            walls.setdefault(frozenset(f), []).append(c)
    for f, cs in sorted(walls.items(), key=lambda kv: tuple(sorted(kv[0]))):
        sigma, sigma2 = cs
        (e0,) = set(sigma) - f
        (e1,) = set(sigma2) - f
        if e0 > e1:
            e0, e1 = e1, e0
        idx = sorted(f) + [e1]
        A = [[Fraction(fan.stacky_vectors[j][i]) for j in idx] for i in range(n)]
        b = [Fraction(-fan.stacky_vectors[e0][i]) for i in range(n)]
        sol = solve_unique(A, b)
        rel = [Fraction(0)] * m
        rel[e0] = Fraction(1)
        for j, v in zip(idx, sol):
            rel[j] = v
        out.append(WallCurve(tuple(sorted(f)), tuple(rel), sum(rel)))
    return out


def primitive_collections(fan: StackyFan) -> list[tuple[int, ...]]:
    report = validate_fan(fan)
    if not report.valid:
        raise InvalidFanError("; ".join(report.errors) or "invalid fan")
    faces = set()
    for c in fan.max_cones:
        for k in range(len(c) + 1):
            for f in itertools.combinations(c, k):
                faces.add(f)
    m = fan.n_rays
    out = []
    for k in range(1, m + 1):
        for s in itertools.combinations(range(m), k):
            if s in faces:
                continue
            if all(tuple(x for x in s if x != i) in faces for i in s):
                out.append(s)
    return out


def minimal_containing_cone(fan: StackyFan, v: Sequence) -> tuple[int, ...]:
    """Indices of the rays of the unique minimal cone containing v."""
    if all(x == 0 for x in v):
        return ()
    for c in fan.max_cones:
        coeffs = cone_coefficients(fan.cone_generators(c), v)
        if coeffs is not None:
            return tuple(i for i, t in zip(c, coeffs) if t > 0)
    raise IncompleteFanError(f"no cone contains {tuple(v)}")


# -- labeled polytopes ---------------------------------------------------


@dataclass(frozen=True)
class LabeledPolytope:
    """P = {u : <u, b_j> >= lambda_j}; b_j carries the facet label."""

    normals: tuple[Vec, ...]
    offsets: tuple[Fraction, ...]

    @staticmethod
    def make(normals, offsets) -> "LabeledPolytope":
        return LabeledPolytope(tuple(tuple(int(x) for x in b) for b in normals),
                               tuple(Fraction(l) for l in offsets))


def polytope_to_fan(P: LabeledPolytope) -> StackyFan:
    """Normal fan of a simple bounded polytope, with labels."""
    n = len(P.normals[0])
    m = len(P.normals)
    cones = []
    if n == 1:
        if m != 2 or P.normals[0][0] * P.normals[1][0] >= 0:
            raise UnboundedPolytopeError("1-d polytope needs two opposite facets")
        lo = Fraction(P.offsets[0], P.normals[0][0])
        hi = Fraction(P.offsets[1], P.normals[1][0])
        if (P.normals[0][0] > 0 and lo >= hi) or (P.normals[0][0] < 0 and hi >= lo):
            raise UnboundedPolytopeError("empty or degenerate interval")
        cones = [(0,), (1,)]
        return StackyFan.make(1, P.normals, cones)
    for s in itertools.combinations(range(m), n):
        A = [[Fraction(P.normals[j][i]) for i in range(n)] for j in s]
        try:
            u = solve_unique(A, [P.offsets[j] for j in s])
        except DependentGeneratorsError:
            continue
        if u is None:
            continue
        ok = True
        for j in range(m):
            if j in s:
                continue
            val = sum(Fraction(P.normals[j][i]) * u[i] for i in range(n)) - P.offsets[j]
            if val < 0:
                ok = False
                break
            if val == 0:
                raise NonSimpleVertexError(f"vertex {tuple(u)} lies on extra facet {j}")
        if ok:
            cones.append(tuple(s))
    fan = StackyFan.make(n, P.normals, cones)
    report = validate_fan(fan)
    if not report.valid:
        raise UnboundedPolytopeError(
            "normal fan is not complete: " + "; ".join(report.errors))
    return fan


def fan_to_polytope(fan: StackyFan, offsets: Sequence) -> LabeledPolytope:
    P = LabeledPolytope.make(fan.stacky_vectors, offsets)
    # round-trip validation
    back = polytope_to_fan(P)
    if set(back.max_cones) != set(fan.max_cones):
        raise InvalidFanError("offsets do not realize the fan as a normal fan")
    return P


def disc_area(P: LabeledPolytope, u: Sequence,
              a: Union[int, BoxElement], allow_boundary: bool = False) -> Fraction:
    """ell_a(u) = <u, b_a> - lambda_a, or sum t_k ell_{i_k} for a Box element."""
    u = [Fraction(x) for x in u]
    ells = [sum(Fraction(b[i]) * u[i] for i in range(len(u))) - l
            for b, l in zip(P.normals, P.offsets)]
    if any(e < 0 for e in ells) or (not allow_boundary and any(e == 0 for e in ells)):
        raise PointNotInteriorError("point not in the interior of the polytope")
    if isinstance(a, BoxElement):
        return sum(t * ells[j] for j, t in zip(a.cone, a.t))
    return ells[a]


# -- disc classes --------------------------------------------------------


@dataclass(frozen=True)
class DiscClass:
    """beta = sum k_j beta_j + sum k_nu beta_nu + (sphere class d)."""

    fan: StackyFan
    ray_mult: tuple[int, ...]
    box_mult: tuple[int, ...]  # aligned with compute_box(fan)
    sphere_c1: Fraction = Fraction(0)

    def boundary(self, box: Sequence[BoxElement]) -> Vec:
        n = self.fan.dim
        out = [0] * n
        for k, b in zip(self.ray_mult, self.fan.stacky_vectors):
            for i in range(n):
                out[i] += k * b[i]
        for k, el in zip(self.box_mult, box):
            for i in range(n):
                out[i] += k * el.nu[i]
        return tuple(out)

    def is_basic(self) -> bool:
        return (self.sphere_c1 == 0 and
                sum(self.ray_mult) + sum(self.box_mult) == 1 and
                all(k >= 0 for k in self.ray_mult + self.box_mult))


def basic_ray_class(fan: StackyFan, j: int, box: Sequence[BoxElement]) -> DiscClass:
    rm = [0] * fan.n_rays
    rm[j] = 1
    return DiscClass(fan, tuple(rm), (0,) * len(box))


def basic_box_class(fan: StackyFan, k: int, box: Sequence[BoxElement]) -> DiscClass:
    bm = [0] * len(box)
    bm[k] = 1
    return DiscClass(fan, (0,) * fan.n_rays, tuple(bm))


def maslov_index_cw(disc: DiscClass, box: Sequence[BoxElement]) -> Fraction:
    """mu_CW = 2 sum k_j + 2 sum k_nu age(nu) + 2 c1(sphere part)."""
    tw = sum(Fraction(k) * el.age for k, el in zip(disc.box_mult, box))
    return 2 * sum(disc.ray_mult) + 2 * tw + 2 * disc.sphere_c1


def maslov_index_desingularized(disc: DiscClass, box: Sequence[BoxElement]) -> Fraction:
    tw = sum(Fraction(k) * el.age for k, el in zip(disc.box_mult, box))
    return maslov_index_cw(disc, box) - 2 * tw


# -- the X-bar construction ----------------------------------------------


@dataclass(frozen=True)
class XBarResult:
    fan: StackyFan
    boundary_vector: Vec
    infinity_vector: Vec
    new_ray_index: int          # index of the ray carrying b_infinity
    replaced_ray: bool          # True when b_infinity sat on an existing ray
    beta_bar_note: str


def star_subdivide_xbar(fan: StackyFan, beta: DiscClass) -> XBarResult:
    """Compactify a basic disc class: adjoin (or reuse) the ray at -b0.

    Returns the fan X-bar together with bookkeeping for the closed class
    beta-bar = beta + beta_infinity, which satisfies d(beta-bar) = 0.
    """
    report = validate_fan(fan)
    if not report.valid:
        raise IncompleteFanError("; ".join(report.errors) or "fan not complete")
    if not beta.is_basic():
        raise NonBasicClassError("X-bar construction needs a basic disc class")
    box = compute_box(fan)
    b0 = beta.boundary(box)
    b_inf = tuple(-x for x in b0)
    C = minimal_containing_cone(fan, b_inf)
    if len(C) == 1:
        j0 = C[0]
        vecs = list(fan.stacky_vectors)
        vecs[j0] = b_inf
        newfan = StackyFan.make(fan.dim, vecs, fan.max_cones)
        note = (f"beta-bar = beta + beta_{j0}; the opposite vector lies on "
                f"ray {j0}, whose stacky vector becomes {b_inf}")
        return XBarResult(newfan, b0, b_inf, j0, True, note)
    m = fan.n_rays
    vecs = list(fan.stacky_vectors) + [b_inf]
    cones = []
    cset = set(C)
    for c in fan.max_cones:
        if cset <= set(c):
            for i in C:
                cones.append(tuple(sorted([x for x in c if x != i] + [m])))
        else:
            cones.append(c)
    newfan = StackyFan.make(fan.dim, vecs, cones)
    rep = validate_fan(newfan)
    if not rep.valid:
        raise InvalidFanError("star subdivision failed: " + "; ".join(rep.errors))
    note = (f"beta-bar = beta + beta_{m}; new ray {m} at {b_inf} star-subdivides "
            f"the cones containing {C}")
    return XBarResult(newfan, b0, b_inf, m, False, note)


# -- Blaschke product boundary check --------------------------------------


def blaschke_boundary_check(spec: dict, samples: int = 64) -> float:
    """Max deviation of | w_j | from |a_j| over boundary sample points.

    spec = {"a": [a_j], "alphas": [[alpha_{j,s}]], "z_plus": [z_i],
            "t": [[t_{ij}] per interior point i]}; all alphas and z_plus
    must lie strictly inside the unit disc.
    """
    a = [complex(x) for x in spec["a"]]
    alphas = [[complex(x) for x in row] for row in spec["alphas"]]
    z_plus = [complex(x) for x in spec.get("z_plus", [])]
    t = [[Fraction(x) for x in row] for row in spec.get("t", [])]
    for row in alphas:
        for al in row:
            if abs(al) >= 1:
                raise InvalidDiscDataError(f"|alpha| = {abs(al)} >= 1")
    for z in z_plus:
        if abs(z) >= 1:
            raise InvalidDiscDataError(f"|z+| = {abs(z)} >= 1")
    worst = 0.0
    for k in range(samples):
        z = cmath.exp(2j * cmath.pi * (k + 0.5) / samples)
        for j in range(len(a)):
            w = a[j]
            for al in alphas[j]:
                w *= (z - al) / (1 - al.conjugate() * z)
            for i, zi in enumerate(z_plus):
                base = (z - zi) / (1 - zi.conjugate() * z)
                tij = t[i][j] if i < len(t) and j < len(t[i]) else Fraction(0)
                if tij:
                    w *= cmath.exp(float(tij) * cmath.log(base))
            worst = max(worst, abs(abs(w) - abs(a[j])))
    return worst
