"""Fenchel conjugates, calmness of the subdifferential and parametric solution maps.

Conjugates are computed in closed form inside the catalog; a grid-sup
evaluator on [-10, 10] is kept alongside 1-D conjugates as an independent
cross-check. Calmness of F = df at (xbar, ystar) is measured by the excess

    e(F(x) ∩ V, F(xbar)) / ||x - xbar||,

with V a coordinate box around ystar. Since (df)^{-1} = df*, the same
constant is the subregularity modulus of df* at (ystar, xbar).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .catalog import (
    Abs,
    BasePair,
    ConvexFunction,
    IndicatorBox,
    MaxAffine,
    PowerEven,
    Quadratic,
    Scaled,
    Separable,
    Sum,
    Tilted,
    _merge_quadratics,
    box_vertices,
    function_to_json,
    kinks,
    solution_set,
    subdifferential,
    value,
)
from .regularity import (
    INEQ_TOL,
    ModulusReport,
    SampleGrid,
    _subdiff,
    estimate_growth_constant,
    estimate_strong_growth_constant,
    estimate_subregularity_modulus,
    sweep,
)
from .sets import (
    ConvexSet,
    UnsupportedError,
    as_vector,
    intersect_box,
    is_single_point,
    json_vector,
    set_distance,
    set_excess,
    set_to_json,
    sets_equal,
)

FALLBACK_RADIUS = 10.0
FALLBACK_POINTS = 100_001  # odd, so the grid contains 0 and the integers
CALM_FACTOR = 1.5
BRIDGE_RTOL = 0.10


# --------------------------------------------------------------------------
# argument transforms g(y) -> g(y + t) and g(y) -> g(s y), s > 0


def _shift(g: ConvexFunction, t: np.ndarray) -> ConvexFunction:
    match g:
        case Quadratic():
            return Quadratic(g.A, g.A @ t + g.b, 0.5 * t @ g.A @ t + g.b @ t + g.offset)
        case IndicatorBox():
            return IndicatorBox(g.lo - t, g.hi - t)
        case MaxAffine():
            return MaxAffine(g.slopes, g.intercepts + g.slopes @ t)
        case Sum():
            return Sum(_shift(g.left, t), _shift(g.right, t))
        case Separable():
            return Separable(tuple(_shift(p, t[i : i + 1]) for i, p in enumerate(g.parts)))
        case Scaled():
            return Scaled(_shift(g.inner, t), g.alpha)
        case Abs():
            return MaxAffine([[1.0], [-1.0]], [t[0], -t[0]])
    raise UnsupportedError(f"cannot shift the argument of {type(g).__name__}")


def _rescale(g: ConvexFunction, s: float) -> ConvexFunction:
    match g:
        case Quadratic():
            return Quadratic(s * s * g.A, s * g.b, g.offset)
        case IndicatorBox():
            return IndicatorBox(g.lo / s, g.hi / s)
        case MaxAffine():
            return MaxAffine(s * g.slopes, g.intercepts)
        case Abs():
            return Scaled(g, s)
        case Sum():
            return Sum(_rescale(g.left, s), _rescale(g.right, s))
        case Separable():
            return Separable(tuple(_rescale(p, s) for p in g.parts))
        case Scaled():
            return Scaled(_rescale(g.inner, s), g.alpha)
    raise UnsupportedError(f"cannot rescale the argument of {type(g).__name__}")


# --------------------------------------------------------------------------
# conjugates


def _lower_hull(points: np.ndarray) -> np.ndarray:
    """Lower convex hull of 2-D points, sorted by abscissa (ties: lowest)."""
    pts = sorted({(float(a), float(b)) for a, b in points})
    hull: list = []
    for p in pts:
        if hull and hull[-1][0] == p[0]:
            continue  # same abscissa, keep the lower one (sorted first)
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return np.array(hull)


def _max_affine_conjugate_1d(f: MaxAffine) -> ConvexFunction:
    """max_i a_i x + b_i  ->  indicator of [min a, max a] plus the lower
    hull of the points (a_i, -b_i), written as a max of its segment lines."""
    hull = _lower_hull(np.column_stack([f.slopes[:, 0], -f.intercepts]))
    box = IndicatorBox([hull[0, 0]], [hull[-1, 0]])
    if len(hull) == 1:
        lines = ([[0.0]], [hull[0, 1]])
    else:
        (x0, y0), (x1, y1) = hull[:-1].T, hull[1:].T
        m = (y1 - y0) / (x1 - x0)
        lines = (m.reshape(-1, 1), y0 - m * x0)
    if np.all(np.abs(lines[0]) == 0) and np.all(np.abs(lines[1]) == 0):
        return box
    return Sum(box, MaxAffine(*lines))


def _box_max_affine_conjugate_1d(box: IndicatorBox, g: MaxAffine) -> MaxAffine:
    """(indicator of [l, h] + g)* is the max of x_j y - g(x_j) over the
    endpoints and the breakpoints of g inside [l, h]."""
    l, h = float(box.lo[0]), float(box.hi[0])
    if not (math.isfinite(l) and math.isfinite(h)):
        raise UnsupportedError("conjugate needs a bounded box")
    pts = {l, h} | {k for k in kinks(g) if l < k < h}
    xs = sorted(pts)
    return MaxAffine([[x] for x in xs], [-value(g, [x]) for x in xs])


def _pure_box_support(f: MaxAffine) -> IndicatorBox | None:
    """A MaxAffine with zero intercepts whose slopes are the vertices of a
    box is the support function of that box."""
    if np.any(f.intercepts != 0):
        return None
    lo, hi = f.slopes.min(axis=0), f.slopes.max(axis=0)
    want = {tuple(v) for v in box_vertices(lo, hi)}
    have = {tuple(v) for v in f.slopes}
    return IndicatorBox(lo, hi) if want == have else None


def _as_max_affine(g: ConvexFunction) -> MaxAffine | None:
    """Sums of Abs and MaxAffine terms as a single MaxAffine (pairwise sums of pieces)."""
    match g:
        case MaxAffine():
            return g
        case Abs():
            return MaxAffine([[1.0], [-1.0]], [0.0, 0.0])
        case Sum():
            l, r = _as_max_affine(g.left), _as_max_affine(g.right)
            if l is None or r is None:
                return None
            S = (l.slopes[:, None, :] + r.slopes[None, :, :]).reshape(-1, g.dim)
            c = (l.intercepts[:, None] + r.intercepts[None, :]).ravel()
            return MaxAffine(S, c)
    return None


def exact_conjugate(f: ConvexFunction) -> ConvexFunction:
    """f* as a catalog function; UnsupportedError outside the sub-catalog."""
    match f:
        case Quadratic():
            w = np.linalg.eigvalsh(f.A)
            if w.min() <= 1e-12 * max(1.0, float(w.max())):
                raise UnsupportedError("conjugate of a quadratic with singular A is not in the catalog")
            Ainv = np.linalg.inv(f.A)
            Ainv = 0.5 * (Ainv + Ainv.T)
            return Quadratic(Ainv, -Ainv @ f.b, 0.5 * f.b @ Ainv @ f.b - f.offset)
        case PowerEven() if f.p == 2:
            return Quadratic([[0.5]], [0.0])
        case Abs():
            return IndicatorBox([-1.0], [1.0])
        case MaxAffine():
            if f.dim == 1:
                return _max_affine_conjugate_1d(f)
            box = _pure_box_support(f)
            if box is not None:
                return box
            raise UnsupportedError("conjugate of a max-affine function in n >= 2 is a polytope indicator")
        case IndicatorBox():
            if not (np.all(np.isfinite(f.lo)) and np.all(np.isfinite(f.hi))):
                raise UnsupportedError("support function of an unbounded box")
            V = box_vertices(f.lo, f.hi)
            return MaxAffine(V, np.zeros(len(V)))
        case Separable():
            return Separable(tuple(exact_conjugate(p) for p in f.parts))
        case Tilted():
            return _shift(exact_conjugate(f.inner), f.ystar)
        case Scaled():
            return Scaled(_rescale(exact_conjugate(f.inner), 1.0 / f.alpha), f.alpha)
        case Sum():
            q = _merge_quadratics(f)
            if q is not None:
                return exact_conjugate(q)
            m = _as_max_affine(f)
            if m is not None:
                return exact_conjugate(m)
            if f.dim == 1:
                for a, b in ((f.left, f.right), (f.right, f.left)):
                    if isinstance(a, IndicatorBox) and isinstance(b, MaxAffine):
                        return _box_max_affine_conjugate_1d(a, b)
            raise UnsupportedError("conjugate of this sum is not in the catalog")
    raise UnsupportedError(f"conjugate of {type(f).__name__} is not in the catalog")


@dataclass(frozen=True, eq=False)
class ConjugatePair:
    """A catalog function with its exact conjugate and, for n = 1, a grid-sup
    evaluator on [-R, R] used as an independent check."""

    primal: ConvexFunction
    conjugate: ConvexFunction
    radius: float = FALLBACK_RADIUS
    points: int = FALLBACK_POINTS

    @cached_property
    def _grid(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.linspace(-self.radius, self.radius, self.points)
        return xs, _values_on_line(self.primal, xs)

    def numeric(self, y: float) -> tuple[float, bool]:
        """(grid sup of x*y - f(x), trusted); untrusted when the sup sits at
        the boundary of the grid, where it is only a lower bound."""
        if self.primal.dim != 1:
            raise UnsupportedError("numeric conjugate is one-dimensional")
        xs, fx = self._grid
        vals = xs * y - fx
        i = int(np.argmax(vals))
        return float(vals[i]), 0 < i < len(xs) - 1


def _values_on_line(f: ConvexFunction, xs: np.ndarray) -> np.ndarray:
    """f at many points of the real line, written out from the formulas."""
    match f:
        case Quadratic():
            return 0.5 * f.A[0, 0] * xs**2 + f.b[0] * xs + f.offset
        case Abs():
            return np.abs(xs)
        case PowerEven():
            return xs**f.p
        case MaxAffine():
            return np.max(np.outer(xs, f.slopes[:, 0]) + f.intercepts, axis=1)
        case IndicatorBox():
            return np.where((xs >= f.lo[0]) & (xs <= f.hi[0]), 0.0, np.inf)
        case Scaled():
            return f.alpha * _values_on_line(f.inner, xs)
        case Sum():
            return _values_on_line(f.left, xs) + _values_on_line(f.right, xs)
        case Separable():
            return _values_on_line(f.parts[0], xs)
        case Tilted():
            return _values_on_line(f.inner, xs) - f.ystar[0] * xs
    return np.array([value(f, [t]) for t in xs])


def conjugate(f: ConvexFunction) -> ConjugatePair:
    return ConjugatePair(f, exact_conjugate(f))


def biconjugate(f: ConvexFunction) -> ConvexFunction:
    return exact_conjugate(exact_conjugate(f))


def _same_value(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


def check_biconjugation(f: ConvexFunction, probes, tol: float = 1e-6) -> tuple[bool, float]:
    """f** = f on the probe points; returns (ok, largest finite deviation)."""
    g = biconjugate(f)
    worst, ok = 0.0, True
    for x in probes:
        a, b = value(f, x), value(g, x)
        ok &= _same_value(a, b, tol)
        if math.isfinite(a) and math.isfinite(b):
            worst = max(worst, abs(a - b))
    return bool(ok), worst


def fenchel_young_gap(pair: ConjugatePair, x, y) -> float:
    """f(x) + f*(y) - <y, x>, nonnegative, zero iff y in df(x)."""
    x, y = as_vector(x), as_vector(y)
    return value(pair.primal, x) + value(pair.conjugate, y) - float(x @ y)


@dataclass(eq=False)
class InverseLawCheck:
    rows: list = field(default_factory=list)  # (y, solution set, df*(y), equal)

    @property
    def ok(self) -> bool:
        return all(r[3] for r in self.rows)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "rows": [
                {"y": json_vector(y), "solution_set": set_to_json(S), "conjugate_subdifferential": set_to_json(D), "equal": e}
                for y, S, D, e in self.rows
            ],
        }


def check_inverse_subdifferential(pair: ConjugatePair, samples, tol: float = 1e-8) -> InverseLawCheck:
    """(df)^{-1}(y) = df*(y) as sets at every sampled dual point."""
    out = InverseLawCheck()
    for y in samples:
        y = as_vector(y)
        S = solution_set(pair.primal, y)
        D = subdifferential(pair.conjugate, y)
        out.rows.append((y, S, D, sets_equal(S, D, tol)))
    return out


# --------------------------------------------------------------------------
# calmness


def _window(ystar: np.ndarray, radius: float):
    return ystar - radius, ystar + radius


@dataclass(eq=False)
class CalmnessReport:
    calmness: ModulusReport
    isolated: bool
    bridge: ModulusReport | None
    bridge_ok: bool | None

    @property
    def calm(self) -> bool:
        return self.calmness.holds

    @property
    def isolated_calm(self) -> bool:
        return self.calm and self.isolated

    def to_json(self) -> dict:
        return {
            "calmness": self.calmness.to_json(),
            "calm": self.calm,
            "isolated": self.isolated,
            "isolated_calm": self.isolated_calm,
            "bridge": None if self.bridge is None else self.bridge.to_json(),
            "bridge_ok": self.bridge_ok,
        }


def _close(a: float, b: float, rtol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rtol * max(abs(a), abs(b)) + 1e-12


def estimate_calmness_modulus(
    bp: BasePair, grid: SampleGrid | None = None, V_radius: float = 1.0, bridge: bool = True
) -> CalmnessReport:
    """kappa = sup over x != xbar of e(df(x) ∩ V, df(xbar)) / ||x - xbar||.

    V is the box of half-width ``V_radius`` around ystar. When the conjugate
    is in the catalog, the same constant is recomputed as the subregularity
    modulus of df* at (ystar, xbar): y sampled in the ball of radius
    ``V_radius``, df*(y) cut to the box of half-width ``grid.radius``
    around xbar.
    """
    grid = SampleGrid.around(bp) if grid is None else grid
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar
    target = subdifferential(f, xbar)
    lo, hi = _window(ystar, V_radius)

    def ratio(x):
        t = float(np.linalg.norm(x - xbar))
        if t == 0:
            return None
        return set_excess(intersect_box(_subdiff(f, x), lo, hi), target), t

    report = sweep("calmness", grid, ratio, sup=True, factor=CALM_FACTOR)
    isolated = is_single_point(target)
    dual, ok = None, None
    if bridge:
        try:
            fstar = exact_conjugate(f)
        except UnsupportedError:
            fstar = None
        if fstar is not None:
            dbp = BasePair(fstar, ystar, xbar, V_radius)
            dgrid = SampleGrid(ystar, V_radius, grid.per_axis, grid.n_random, grid.seed)
            dual = estimate_subregularity_modulus(
                dbp, dgrid, solution=target, image_window=grid.radius, factor=CALM_FACTOR
            )
            ok = _close(report.value, dual.value, BRIDGE_RTOL)
    return CalmnessReport(report, isolated, dual, ok)


@dataclass(eq=False)
class ConjugateGrowthCheck:
    """Calmness of df at (xbar, ystar) against quadratic growth of f* at
    (ystar, xbar) measured from df(xbar), and the isolated versions."""

    calmness: CalmnessReport
    growth: ModulusReport
    strong_growth: ModulusReport

    @property
    def calm_ok(self) -> bool:
        return self.calmness.calm == self.growth.holds

    @property
    def isolated_ok(self) -> bool:
        return self.calmness.isolated_calm == self.strong_growth.holds

    @property
    def bound_ok(self) -> bool:
        """kappa <= 1/c whenever both sides hold."""
        if not (self.calmness.calm and self.growth.holds):
            return True
        c = self.growth.value
        return c == 0 or self.calmness.calmness.value <= 1 / c + INEQ_TOL

    @property
    def ok(self) -> bool:
        return self.calm_ok and self.isolated_ok and self.bound_ok

    def to_json(self) -> dict:
        return {
            "calmness": self.calmness.to_json(),
            "conjugate_growth": self.growth.to_json(),
            "conjugate_strong_growth": self.strong_growth.to_json(),
            "calm_ok": self.calm_ok,
            "isolated_ok": self.isolated_ok,
            "bound_ok": self.bound_ok,
        }


def check_conjugate_growth(bp: BasePair, grid: SampleGrid | None = None, V_radius: float = 1.0) -> ConjugateGrowthCheck:
    """df calm at xbar for ystar  <=>  f*(y) >= f*(ystar) + <xbar, y - ystar> + c d(y, df(xbar))^2
    near ystar; isolated calmness <=> the same with ||y - ystar||^2."""
    grid = SampleGrid.around(bp) if grid is None else grid
    calm = estimate_calmness_modulus(bp, grid, V_radius)
    fstar = exact_conjugate(bp.f)
    dbp = BasePair(fstar, bp.ystar, bp.xbar, V_radius)
    dgrid = SampleGrid(bp.ystar, V_radius, grid.per_axis, grid.n_random, grid.seed)
    target = subdifferential(bp.f, bp.xbar)
    growth = estimate_growth_constant(dbp, dgrid, solution=target)
    strong = estimate_strong_growth_constant(dbp, dgrid)
    return ConjugateGrowthCheck(calm, growth, strong)


# --------------------------------------------------------------------------
# parametric solution maps S(x) = (d phi)^{-1}(-(alpha x + beta))


@dataclass(frozen=True, eq=False)
class SolutionMapSpec:
    """S(x) = {y : 0 in alpha x + beta + d phi(y)} for a 1-D phi."""

    phi: ConvexFunction
    alpha: float
    beta: float = 0.0
    domain: tuple = (-math.inf, math.inf)

    def __post_init__(self):
        if self.phi.dim != 1:
            raise ValueError("solution maps are implemented for a 1-D decision variable")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        lo, hi = (float(t) for t in self.domain)
        if lo > hi:
            raise ValueError("empty parameter domain")
        object.__setattr__(self, "domain", (lo, hi))

    def base(self, x: float) -> float:
        return self.alpha * x + self.beta


def solution_map_eval(spec: SolutionMapSpec, x: float) -> ConvexSet:
    lo, hi = spec.domain
    if not lo <= x <= hi:
        raise ValueError(f"parameter {x} outside the domain [{lo}, {hi}]")
    return solution_set(spec.phi, [-spec.base(x)])


@dataclass(eq=False)
class SolutionMapCheck:
    calmness: ModulusReport
    isolated: bool
    growth: ModulusReport
    strong_growth: ModulusReport

    @property
    def calm(self) -> bool:
        return self.calmness.holds

    @property
    def isolated_calm(self) -> bool:
        return self.calm and self.isolated

    @property
    def calm_ok(self) -> bool:
        """S calm  <=>  growth of phi measured from its solution set."""
        return self.calm == self.growth.holds

    @property
    def isolated_ok(self) -> bool:
        """strong growth of phi  =>  S isolatedly calm."""
        return (not self.strong_growth.holds) or self.isolated_calm

    @property
    def ok(self) -> bool:
        return self.calm_ok and self.isolated_ok

    def to_json(self) -> dict:
        return {
            "calmness": self.calmness.to_json(),
            "calm": self.calm,
            "isolated": self.isolated,
            "isolated_calm": self.isolated_calm,
            "growth": self.growth.to_json(),
            "strong_growth": self.strong_growth.to_json(),
            "calm_ok": self.calm_ok,
            "isolated_ok": self.isolated_ok,
        }


def check_solution_map(
    spec: SolutionMapSpec,
    xbar: float,
    ybar: float,
    grid: SampleGrid | None = None,
    V_radius: float = 1.0,
    phi_radius: float = 1.0,
) -> SolutionMapCheck:
    """Calmness of S at xbar for ybar (parameter grid around xbar) against
    quadratic growth of phi at (ybar, -(alpha xbar + beta))."""
    target = solution_map_eval(spec, xbar)
    if set_distance(target, [ybar]) > 1e-10:
        raise ValueError(f"usage: ybar={ybar} is not in S(xbar)")
    grid = SampleGrid([xbar], 0.5) if grid is None else grid
    lo, hi = spec.domain
    wlo, whi = [ybar - V_radius], [ybar + V_radius]

    def ratio(x):
        t = abs(float(x[0]) - xbar)
        if t == 0 or not lo <= x[0] <= hi:
            return None
        return set_excess(intersect_box(solution_map_eval(spec, float(x[0])), wlo, whi), target), t

    calm = sweep("calmness", grid, ratio, sup=True, factor=CALM_FACTOR)
    bp = BasePair(spec.phi, [ybar], [-spec.base(xbar)], phi_radius)
    phi_grid = SampleGrid.around(bp, per_axis=grid.per_axis, n_random=grid.n_random, seed=grid.seed)
    growth = estimate_growth_constant(bp, phi_grid)
    strong = estimate_strong_growth_constant(bp, phi_grid)
    return SolutionMapCheck(calm, is_single_point(target), growth, strong)


def conjugate_json(pair: ConjugatePair) -> dict:
    return {"primal": function_to_json(pair.primal), "conjugate": function_to_json(pair.conjugate)}


__all__ = [
    "ConjugatePair",
    "SolutionMapSpec",
    "biconjugate",
    "check_biconjugation",
    "check_conjugate_growth",
    "check_inverse_subdifferential",
    "check_solution_map",
    "conjugate",
    "estimate_calmness_modulus",
    "exact_conjugate",
    "fenchel_young_gap",
    "solution_map_eval",
]
