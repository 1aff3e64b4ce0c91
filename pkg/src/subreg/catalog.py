"""A fixed catalog of convex functions on R^n (n <= 4) with exact oracles.

Each variant is a frozen dataclass. The module-level functions `value`,
`subdifferential`, `solution_set` and `prox` dispatch on the variant and
return exact answers or raise `UnsupportedError`; nothing is silently
approximated, except `prox` on variants without a closed form, which
bisects the scalar optimality inclusion to 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .sets import (
    MAX_DIM,
    MEMBERSHIP_TOL,
    Affine,
    Box,
    ConvexSet,
    Empty,
    Polytope,
    Singleton,
    UnsupportedError,
    as_interval,
    as_vector,
    interval_set,
    json_number,
    json_vector,
    minkowski_sum,
    scale,
    set_distance,
    translate,
    _nums,
)

BISECTION_TOL = 1e-12
ACTIVE_MARGIN = 1e-10


class DimensionError(ValueError):
    pass


class InvalidBasePair(ValueError):
    pass


class ConvexFunction:
    """Base class of the catalog variants."""

    dim: int

    def __call__(self, x) -> float:
        return value(self, x)


@dataclass(frozen=True, eq=False)
class Quadratic(ConvexFunction):
    """f(x) = 1/2 x'Ax + b'x + offset with A symmetric positive semidefinite."""

    A: np.ndarray
    b: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        A = A.reshape(1, 1) if A.ndim < 2 else A
        b = as_vector(self.b)
        n = b.size
        if A.shape != (n, n):
            raise DimensionError(f"A has shape {A.shape}, b has size {n}")
        if n > MAX_DIM:
            raise DimensionError(f"dimension capped at {MAX_DIM}")
        if np.max(np.abs(A - A.T), initial=0.0) > 1e-12:
            raise ValueError("A must be symmetric")
        if np.linalg.eigvalsh(A).min() < -1e-12:
            raise ValueError("A must be positive semidefinite")
        A.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self):
        return self.b.size


@dataclass(frozen=True, eq=False)
class Abs(ConvexFunction):
    dim = 1


@dataclass(frozen=True, eq=False)
class PowerEven(ConvexFunction):
    """f(x) = x**p on the real line, p even."""

    p: int
    dim = 1

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2 or self.p % 2:
            raise ValueError("p must be an even integer >= 2")
        object.__setattr__(self, "p", int(self.p))


@dataclass(frozen=True, eq=False)
class MaxAffine(ConvexFunction):
    """f(x) = max_i <a_i, x> + beta_i."""

    slopes: np.ndarray
    intercepts: np.ndarray

    def __post_init__(self):
        S = np.array(self.slopes, dtype=float)
        S = S.reshape(-1, 1) if S.ndim == 1 else S
        c = as_vector(self.intercepts)
        if S.shape[0] != c.size or c.size == 0:
            raise ValueError("need one intercept per slope, at least one piece")
        if S.shape[1] > MAX_DIM:
            raise DimensionError(f"dimension capped at {MAX_DIM}")
        S.flags.writeable = False
        object.__setattr__(self, "slopes", S)
        object.__setattr__(self, "intercepts", c)

    @property
    def dim(self):
        return self.slopes.shape[1]


@dataclass(frozen=True, eq=False)
class IndicatorBox(ConvexFunction):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("indicator box needs lo <= hi")
        if lo.size > MAX_DIM:
            raise DimensionError(f"dimension capped at {MAX_DIM}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size


@dataclass(frozen=True, eq=False)
class Scaled(ConvexFunction):
    inner: ConvexFunction
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("scale factor must be positive")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def dim(self):
        return self.inner.dim


@dataclass(frozen=True, eq=False)
class Sum(ConvexFunction):
    left: ConvexFunction
    right: ConvexFunction

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise DimensionError("summands live in different dimensions")

    @property
    def dim(self):
        return self.left.dim


@dataclass(frozen=True, eq=False)
class Separable(ConvexFunction):
    """f(x) = sum_i f_i(x_i) with each part one-dimensional."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts or any(p.dim != 1 for p in parts):
            raise DimensionError("separable parts must be 1-D functions")
        if len(parts) > MAX_DIM:
            raise DimensionError(f"dimension capped at {MAX_DIM}")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self):
        return len(self.parts)


@dataclass(frozen=True, eq=False)
class Tilted(ConvexFunction):
    """f(x) = inner(x) - <ystar, x>."""

    inner: ConvexFunction
    ystar: np.ndarray

    def __post_init__(self):
        y = as_vector(self.ystar)
        if y.size != self.inner.dim:
            raise DimensionError("tilt vector has the wrong size")
        object.__setattr__(self, "ystar", y)

    @property
    def dim(self):
        return self.inner.dim


def _check(f: ConvexFunction, x) -> np.ndarray:
    # a view, not a frozen copy: the oracles never keep or modify x
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != f.dim:
        raise DimensionError(f"point of dimension {x.size} for a function on R^{f.dim}")
    return x


# --------------------------------------------------------------------------
# value


def value(f: ConvexFunction, x) -> float:
    """f(x), +inf outside dom f."""
    x = _check(f, x)
    match f:
        case Quadratic():
            return float(0.5 * x @ f.A @ x + f.b @ x + f.offset)
        case Abs():
            return abs(float(x[0]))
        case PowerEven():
            return float(x[0]) ** f.p
        case MaxAffine():
            return float(np.max(f.slopes @ x + f.intercepts))
        case IndicatorBox():
            return 0.0 if np.all(x >= f.lo) and np.all(x <= f.hi) else math.inf
        case Scaled():
            return f.alpha * value(f.inner, x)
        case Sum():
            return value(f.left, x) + value(f.right, x)
        case Separable():
            return float(sum(value(p, x[i : i + 1]) for i, p in enumerate(f.parts)))
        case Tilted():
            return value(f.inner, x) - float(f.ystar @ x)
    raise TypeError(f"not a catalog function: {f!r}")


# --------------------------------------------------------------------------
# subdifferential


def subdifferential(f: ConvexFunction, x) -> ConvexSet:
    """The exact convex subdifferential at x (Empty outside dom f)."""
    x = _check(f, x)
    match f:
        case Quadratic():
            return Singleton(f.A @ x + f.b)
        case Abs():
            t = x[0]
            return Box([-1.0], [1.0]) if t == 0 else Singleton([math.copysign(1.0, t)])
        case PowerEven():
            return Singleton([f.p * x[0] ** (f.p - 1)])
        case MaxAffine():
            vals = f.slopes @ x + f.intercepts
            active = f.slopes[vals >= vals.max() - ACTIVE_MARGIN]
            return Singleton(active[0]) if len(active) == 1 else Polytope(active)
        case IndicatorBox():
            if np.any(x < f.lo) or np.any(x > f.hi):
                return Empty(f.dim)
            lo = np.where(x <= f.lo, -math.inf, 0.0)
            hi = np.where(x >= f.hi, math.inf, 0.0)
            return Box(lo, hi)
        case Scaled():
            return scale(subdifferential(f.inner, x), f.alpha)
        case Sum():
            return minkowski_sum(subdifferential(f.left, x), subdifferential(f.right, x))
        case Separable():
            ivs = [as_interval(subdifferential(p, x[i : i + 1])) for i, p in enumerate(f.parts)]
            return _product(ivs)
        case Tilted():
            return translate(subdifferential(f.inner, x), -f.ystar)
    raise TypeError(f"not a catalog function: {f!r}")


def _product(ivs: list) -> ConvexSet:
    if any(iv is None for iv in ivs):
        return Empty(len(ivs))
    lo = [a for a, _ in ivs]
    hi = [b for _, b in ivs]
    if lo == hi:
        return Singleton(lo)
    return Box(lo, hi)


def subgradient_interval(f: ConvexFunction, x: float) -> tuple[float, float] | None:
    """(min, max) of the subdifferential of a 1-D function at x."""
    return as_interval(subdifferential(f, [x]))


# --------------------------------------------------------------------------
# solution set (inverse subdifferential)


def _max_affine_argmin_1d(slopes, intercepts, ystar: float) -> ConvexSet:
    a = slopes[:, 0] - ystar
    c = intercepts
    tol = 1e-12 * max(1.0, float(np.max(np.abs(slopes))))
    if np.all(a > tol) or np.all(a < -tol):
        return Empty(1)
    if np.all(np.abs(a) <= tol):
        return Box([-math.inf], [math.inf])
    # infimum of the tilted envelope g(x) = max_i a_i x + c_i: it is attained
    # at a breakpoint, or as a limit along a flat piece
    cands = []
    for i, j in combinations(range(len(a)), 2):
        if abs(a[i] - a[j]) > tol:
            cands.append((c[j] - c[i]) / (a[i] - a[j]))
    levels = [float(np.max(a * t + c)) for t in cands]
    flat = np.abs(a) <= tol
    if not np.any(a < -tol) or not np.any(a > tol):
        levels.append(float(np.max(c[flat])))
    m = min(levels)
    lo, hi = -math.inf, math.inf
    for ai, ci in zip(a, c):
        if ai > tol:
            hi = min(hi, (m - ci) / ai)
        elif ai < -tol:
            lo = max(lo, (m - ci) / ai)
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return interval_set(lo, hi)


def solution_set(f: ConvexFunction, ystar) -> ConvexSet:
    """(df)^{-1}(ystar) = {x : ystar in df(x)}, exactly."""
    y = as_vector(ystar)
    if y.size != f.dim:
        raise DimensionError("dual point has the wrong size")
    match f:
        case Quadratic():
            rhs = y - f.b
            w, U = np.linalg.eigh(f.A)
            big = np.abs(w) > 1e-10 * max(1.0, float(np.max(np.abs(w))))
            coef = U.T @ rhs
            if np.any(np.abs(coef[~big]) > 1e-10 * max(1.0, float(np.linalg.norm(rhs)))):
                return Empty(f.dim)
            point = U[:, big] @ (coef[big] / w[big])
            basis = U[:, ~big].T
            if basis.shape[0] == 0:
                return Singleton(point)
            return Affine(point, basis)
        case Abs():
            t = y[0]
            if abs(t) > 1:
                return Empty(1)
            if t == 1:
                return Box([0.0], [math.inf])
            if t == -1:
                return Box([-math.inf], [0.0])
            return Singleton([0.0])
        case PowerEven():
            t = y[0] / f.p
            return Singleton([math.copysign(abs(t) ** (1.0 / (f.p - 1)), t)])
        case MaxAffine():
            if f.dim != 1:
                raise UnsupportedError("solution set of a max-affine function needs n = 1")
            return _max_affine_argmin_1d(f.slopes, f.intercepts, float(y[0]))
        case IndicatorBox():
            lo = np.where(y > 0, f.hi, f.lo)
            hi = np.where(y < 0, f.lo, f.hi)
            if np.any(~np.isfinite(lo) & (y > 0)) or np.any(~np.isfinite(hi) & (y < 0)):
                return Empty(f.dim)
            return _product(list(zip(lo.tolist(), hi.tolist())))
        case Scaled():
            return solution_set(f.inner, y / f.alpha)
        case Tilted():
            return solution_set(f.inner, y + f.ystar)
        case Separable():
            ivs = [as_interval(solution_set(p, y[i : i + 1])) for i, p in enumerate(f.parts)]
            return _product(ivs)
        case Sum():
            merged = _merge_quadratics(f)
            if merged is not None:
                return solution_set(merged, y)
            raise UnsupportedError("solution set of a general sum is not kept exact")
    raise TypeError(f"not a catalog function: {f!r}")


def _merge_quadratics(f: ConvexFunction) -> Quadratic | None:
    """Collapse Sum/Scaled/Tilted trees of quadratics into one Quadratic."""
    match f:
        case Quadratic():
            return f
        case Scaled():
            q = _merge_quadratics(f.inner)
            return None if q is None else Quadratic(f.alpha * q.A, f.alpha * q.b, f.alpha * q.offset)
        case Tilted():
            q = _merge_quadratics(f.inner)
            return None if q is None else Quadratic(q.A, q.b - f.ystar, q.offset)
        case Sum():
            l, r = _merge_quadratics(f.left), _merge_quadratics(f.right)
            if l is None or r is None:
                return None
            return Quadratic(l.A + r.A, l.b + r.b, l.offset + r.offset)
    return None


# --------------------------------------------------------------------------
# 1-D structure used by bisection and the graphical derivative


def kinks(f: ConvexFunction) -> list[float]:
    """Points where a 1-D catalog function is not differentiable."""
    match f:
        case Abs():
            return [0.0]
        case MaxAffine():
            a, c = f.slopes[:, 0], f.intercepts
            pts = []
            for i, j in combinations(range(len(a)), 2):
                if a[i] != a[j]:
                    t = (c[j] - c[i]) / (a[i] - a[j])
                    if abs(value(f, [t]) - (a[i] * t + c[i])) <= 1e-9 * max(1.0, abs(t)):
                        pts.append(float(t))
            return sorted(set(pts))
        case IndicatorBox():
            return [float(t) for t in (f.lo[0], f.hi[0]) if math.isfinite(t)]
        case Scaled() | Tilted():
            return kinks(f.inner)
        case Sum():
            return sorted(set(kinks(f.left)) | set(kinks(f.right)))
        case Separable():
            return kinks(f.parts[0])
    return []


def side_curvature(f: ConvexFunction, x: float, side: int) -> float | None:
    """One-sided derivative of the derivative of a 1-D function at x.

    Returns None when dom f does not extend to that side of x.
    """
    match f:
        case Quadratic():
            return float(f.A[0, 0])
        case Abs() | MaxAffine():
            return 0.0
        case PowerEven():
            return float(f.p * (f.p - 1) * x ** (f.p - 2))
        case IndicatorBox():
            inside = x < f.hi[0] if side > 0 else x > f.lo[0]
            return 0.0 if inside else None
        case Scaled():
            s = side_curvature(f.inner, x, side)
            return None if s is None else f.alpha * s
        case Tilted():
            return side_curvature(f.inner, x, side)
        case Sum():
            l, r = side_curvature(f.left, x, side), side_curvature(f.right, x, side)
            return None if l is None or r is None else l + r
        case Separable():
            return side_curvature(f.parts[0], x, side)
    raise UnsupportedError(f"no one-sided curvature for {f!r}")


class NonSmoothError(UnsupportedError):
    pass


def hessian(f: ConvexFunction, x) -> np.ndarray:
    """Hessian at x, raising NonSmoothError where f is not twice differentiable."""
    x = _check(f, x)
    n = f.dim
    match f:
        case Quadratic():
            return np.array(f.A)
        case PowerEven():
            return np.array([[f.p * (f.p - 1) * x[0] ** (f.p - 2)]])
        case Abs():
            if x[0] == 0:
                raise NonSmoothError("|x| is not differentiable at 0")
            return np.zeros((1, 1))
        case MaxAffine():
            vals = f.slopes @ x + f.intercepts
            if np.sum(vals >= vals.max() - ACTIVE_MARGIN) > 1:
                raise NonSmoothError("max-affine function at a kink")
            return np.zeros((n, n))
        case IndicatorBox():
            if np.all(x > f.lo) and np.all(x < f.hi):
                return np.zeros((n, n))
            raise NonSmoothError("indicator off the interior of its box")
        case Scaled():
            return f.alpha * hessian(f.inner, x)
        case Tilted():
            return hessian(f.inner, x)
        case Sum():
            return hessian(f.left, x) + hessian(f.right, x)
        case Separable():
            return np.diag([hessian(p, x[i : i + 1])[0, 0] for i, p in enumerate(f.parts)])
    raise TypeError(f"not a catalog function: {f!r}")


# --------------------------------------------------------------------------
# proximal map


def _bisect_inclusion(f: ConvexFunction, g, x: float, lo: float, hi: float) -> float:
    """Find u with 0 in g(u) + df(u) for nondecreasing g, given a bracket.

    The bracket must satisfy max df(lo) + g(lo) <= 0 <= min df(hi) + g(hi).
    """

    def side(u):
        iv = subgradient_interval(f, u)
        if iv is None:
            # outside the domain: left of it counts as "too small"
            return -1 if _left_of_domain(f, u) else 1
        a, b = iv
        gu = g(u)
        if a + gu > 0:
            return 1
        if b + gu < 0:
            return -1
        return 0

    # run to floating-point exhaustion: the answer is then accurate relative
    # to its own magnitude, which rate measurements near 0 depend on
    def snap(u, *extra):
        # kinks first: active pieces within ACTIVE_MARGIN make points next to
        # a kink look like solutions
        near = [k for k in kinks(f) if abs(k - u) <= 1e3 * BISECTION_TOL * max(1.0, abs(u))]
        for cand in (*near, *extra):
            if side(cand) == 0:
                return cand + 0.0  # no negative zero
        return u + 0.0

    for _ in range(2200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        s = side(mid)
        if s == 0:
            return snap(mid)
        if s > 0:
            hi = mid
        else:
            lo = mid
    return snap(0.5 * (lo + hi), lo, hi)


def _left_of_domain(f: ConvexFunction, u: float) -> bool:
    # probe: a 1-D catalog domain is an interval; compare with a point inside
    for t in (0.0, *kinks(f)):
        if subgradient_interval(f, t) is not None:
            return u < t
    raise UnsupportedError("could not locate the domain")


def find_bracket(f: ConvexFunction, g, center: float, width: float):
    """Expand [center - w, center + w] until the inclusion changes sign."""

    def residual_sign(u):
        iv = subgradient_interval(f, u)
        if iv is None:
            return -1 if _left_of_domain(f, u) else 1
        a, b = iv
        if a + g(u) > 0:
            return 1
        if b + g(u) < 0:
            return -1
        return 0

    w = max(width, 1e-12)
    for _ in range(200):
        lo, hi = center - w, center + w
        slo, shi = residual_sign(lo), residual_sign(hi)
        if slo <= 0 <= shi:
            return lo, hi
        w *= 2.0
    raise BracketError(f"no sign change in [{center - w}, {center + w}]")


class BracketError(RuntimeError):
    pass


def prox(f: ConvexFunction, lam: float, x) -> np.ndarray:
    """argmin_z f(z) + lam/2 ||z - x||^2."""
    if not lam > 0:
        raise ValueError("prox parameter must be positive")
    x = _check(f, x)
    match f:
        case Quadratic():
            n = f.dim
            return np.linalg.solve(f.A + lam * np.eye(n), lam * x - f.b)
        case Abs():
            t = x[0]
            return np.array([math.copysign(max(abs(t) - 1.0 / lam, 0.0), t)])
        case IndicatorBox():
            return np.clip(x, f.lo, f.hi)
        case Separable():
            return np.concatenate([prox(p, lam, x[i : i + 1]) for i, p in enumerate(f.parts)])
        case Scaled():
            return prox(f.inner, lam / f.alpha, x)
        case Tilted():
            return prox(f.inner, lam, x + f.ystar / lam)
        case Sum():
            q = _merge_quadratics(f)
            if q is not None:
                return prox(q, lam, x)
    if f.dim == 1:
        return np.array([_prox_1d(f, lam, float(x[0]))])
    if isinstance(f, MaxAffine):
        return _prox_max_affine(f, lam, x)
    raise UnsupportedError(f"no exact prox for {f!r} in dimension {f.dim}")


def _prox_1d(f: ConvexFunction, lam: float, x: float) -> float:
    iv = subgradient_interval(f, x)

    def g(u):
        return lam * (u - x)

    if iv is not None:
        gx = iv[0] if abs(iv[0]) <= abs(iv[1]) else iv[1]
        r = abs(gx) / lam
        lo, hi = x - r, x + r
        if r == 0:
            return x
    else:
        lo, hi = find_bracket(f, g, x, 1.0)
    return _bisect_inclusion(f, g, x, lo, hi)


def _prox_max_affine(f: MaxAffine, lam: float, x: np.ndarray) -> np.ndarray:
    # z = x - (1/lam) A'mu where mu maximises the concave dual
    #   q(mu) = <mu, A x + c> - ||A'mu||^2 / (2 lam) over the simplex.
    # The optimum lies on some face; enumerate supports and keep the best
    # KKT-feasible candidate.
    A, c = f.slopes, f.intercepts
    k = len(c)
    best, best_q = None, -math.inf
    h = A @ x + c
    for r in range(1, k + 1):
        for idx in combinations(range(k), r):
            I = list(idx)
            AI = A[I]
            G = AI @ AI.T / lam
            K = np.block([[G, np.ones((r, 1))], [np.ones((1, r)), np.zeros((1, 1))]])
            rhs = np.concatenate([h[I], [1.0]])
            sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
            mu = sol[:r]
            if np.any(mu < -1e-12):
                continue
            full = np.zeros(k)
            full[I] = np.maximum(mu, 0)
            full /= full.sum()
            q = float(full @ h - np.sum((A.T @ full) ** 2) / (2 * lam))
            if q > best_q + 1e-15:
                best, best_q = full, q
    return x - A.T @ best / lam


# --------------------------------------------------------------------------
# base pairs


@dataclass(frozen=True, eq=False)
class BasePair:
    """Anchor (xbar, ystar) on the graph of df, with an analysis radius."""

    f: ConvexFunction
    xbar: np.ndarray
    ystar: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        xbar, ystar = as_vector(self.xbar), as_vector(self.ystar)
        if xbar.size != self.f.dim or ystar.size != self.f.dim:
            raise DimensionError("base pair vectors do not match the function")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "xbar", xbar)
        object.__setattr__(self, "ystar", ystar)
        object.__setattr__(self, "radius", float(self.radius))
        d = set_distance(subdifferential(self.f, xbar), ystar)
        if not d <= MEMBERSHIP_TOL:
            raise InvalidBasePair(f"base pair invalid: ystar is at distance {d:g} from df(xbar)")


# --------------------------------------------------------------------------
# JSON descriptors


def function_from_json(obj: dict) -> ConvexFunction:
    kind = obj.get("type")
    if kind == "Quadratic":
        return Quadratic(_nums(obj["A"]), _nums(obj["b"]), float(obj.get("offset", 0.0)))
    if kind == "Abs":
        return Abs()
    if kind == "PowerEven":
        return PowerEven(int(obj["p"]))
    if kind == "MaxAffine":
        return MaxAffine(_nums(obj["slopes"]), _nums(obj["intercepts"]))
    if kind == "IndicatorBox":
        return IndicatorBox(_nums(obj["lo"]), _nums(obj["hi"]))
    if kind == "Scaled":
        return Scaled(function_from_json(obj["inner"]), float(obj["alpha"]))
    if kind == "Sum":
        return Sum(function_from_json(obj["left"]), function_from_json(obj["right"]))
    if kind == "Separable":
        return Separable(tuple(function_from_json(p) for p in obj["parts"]))
    if kind == "Tilted":
        return Tilted(function_from_json(obj["inner"]), _nums(obj["ystar"]))
    raise ValueError(f"unknown function type {kind!r}")


def function_to_json(f: ConvexFunction) -> dict:
    match f:
        case Quadratic():
            out = {"type": "Quadratic", "A": [json_vector(r) for r in f.A], "b": json_vector(f.b)}
            if f.offset:
                out["offset"] = json_number(f.offset)
            return out
        case Abs():
            return {"type": "Abs"}
        case PowerEven():
            return {"type": "PowerEven", "p": f.p}
        case MaxAffine():
            return {
                "type": "MaxAffine",
                "slopes": [json_vector(r) for r in f.slopes],
                "intercepts": json_vector(f.intercepts),
            }
        case IndicatorBox():
            return {"type": "IndicatorBox", "lo": json_vector(f.lo), "hi": json_vector(f.hi)}
        case Scaled():
            return {"type": "Scaled", "inner": function_to_json(f.inner), "alpha": f.alpha}
        case Sum():
            return {"type": "Sum", "left": function_to_json(f.left), "right": function_to_json(f.right)}
        case Separable():
            return {"type": "Separable", "parts": [function_to_json(p) for p in f.parts]}
        case Tilted():
            return {"type": "Tilted", "inner": function_to_json(f.inner), "ystar": json_vector(f.ystar)}
    raise TypeError(f"not a catalog function: {f!r}")


def box_vertices(lo, hi) -> np.ndarray:
    return np.array(list(product(*[sorted({a, b}) for a, b in zip(lo, hi)])), dtype=float)
