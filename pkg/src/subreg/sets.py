"""Closed convex sets in R^n with exact distance and excess.

Every variant is an immutable value. Unbounded pieces (half-lines, normal
cones) are boxes with infinite bounds; polytopes are small vertex lists so
that projection can be done by enumerating faces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

MEMBERSHIP_TOL = 1e-10
MAX_VERTICES = 16
MAX_DIM = 4


class UnsupportedError(ValueError):
    """No exact answer is available for this variant combination."""


def as_vector(x) -> np.ndarray:
    """x as a read-only 1-D float array (frozen float vectors pass through)."""
    if type(x) is np.ndarray and x.ndim == 1 and x.dtype == np.float64 and not x.flags.writeable:
        return x
    v = np.array(x, dtype=float).reshape(-1)
    v.flags.writeable = False
    return v


class ConvexSet:
    """Base class of the closed convex set variants."""

    dim: int

    def distance(self, x) -> float:
        return set_distance(self, x)

    def contains(self, x, tol: float = MEMBERSHIP_TOL) -> bool:
        return set_distance(self, x) <= tol


@dataclass(frozen=True, eq=False)
class Empty(ConvexSet):
    dim: int

    def __repr__(self):
        return f"Empty(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Singleton(ConvexSet):
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", as_vector(self.v))
        if not np.isfinite(self.v).all():
            raise ValueError("singleton must be a finite point")

    @property
    def dim(self) -> int:
        return self.v.size

    def __repr__(self):
        return f"Singleton({self.v.tolist()})"


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    """Product of closed intervals; bounds may be infinite."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if lo.shape != hi.shape:
            raise ValueError("box bounds have different sizes")
        # NaN fails lo <= hi as well
        if not ((lo <= hi) & (lo < np.inf) & (hi > -np.inf)).all():
            raise ValueError(f"invalid box bounds lo={lo} hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def __repr__(self):
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()})"


@dataclass(frozen=True, eq=False)
class Polytope(ConvexSet):
    """Convex hull of a short list of vertices (rows)."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        if V.shape[0] < 1:
            raise ValueError("polytope needs at least one vertex")
        if not np.all(np.isfinite(V)):
            raise ValueError("polytope vertices must be finite")
        # drop exact duplicates, keep first-seen order
        keep = []
        for row in V:
            if not any(np.array_equal(row, k) for k in keep):
                keep.append(row)
        V = np.array(keep)
        if V.shape[0] > MAX_VERTICES:
            raise ValueError(f"polytope limited to {MAX_VERTICES} vertices")
        V.flags.writeable = False
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __repr__(self):
        return f"Polytope({self.vertices.tolist()})"


@dataclass(frozen=True, eq=False)
class Affine(ConvexSet):
    """point + span(basis); basis rows are orthonormal."""

    point: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        p = as_vector(self.point)
        B = np.array(self.basis, dtype=float).reshape(-1, p.size)
        if B.shape[0] and np.max(np.abs(B @ B.T - np.eye(B.shape[0]))) > 1e-12:
            raise ValueError("affine basis must be orthonormal")
        B.flags.writeable = False
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.point.size

    def __repr__(self):
        return f"Affine(point={self.point.tolist()}, basis={self.basis.tolist()})"


@dataclass(frozen=True, eq=False)
class DistanceOracle(ConvexSet):
    """A set known only through its exact distance function."""

    tag: str
    fn: Callable[[np.ndarray], float]
    dim: int

    def __repr__(self):
        return f"DistanceOracle({self.tag!r})"


# --------------------------------------------------------------------------
# queries


def is_bounded(S: ConvexSet) -> bool:
    if isinstance(S, (Empty, Singleton, Polytope)):
        return True
    if isinstance(S, Box):
        return bool(np.all(np.isfinite(S.lo)) and np.all(np.isfinite(S.hi)))
    if isinstance(S, Affine):
        return S.basis.shape[0] == 0
    return False


def is_single_point(S: ConvexSet) -> bool:
    """True when S is exactly one point, whatever its representation."""
    if isinstance(S, Singleton):
        return True
    if isinstance(S, Box):
        return bool(np.all(S.lo == S.hi))
    if isinstance(S, Affine):
        return S.basis.shape[0] == 0
    if isinstance(S, Polytope):
        return S.vertices.shape[0] == 1
    return False


def extreme_points(S: ConvexSet) -> np.ndarray:
    """Rows containing every extreme point of a bounded set.

    Polytope rows may include non-extreme points, which is harmless for
    maximising convex or minimising linear functions.
    """
    if isinstance(S, Singleton):
        return S.v.reshape(1, -1)
    if isinstance(S, Polytope):
        return S.vertices
    if isinstance(S, Affine) and S.basis.shape[0] == 0:
        return S.point.reshape(1, -1)
    if isinstance(S, Box) and is_bounded(S):
        choices = [sorted({lo, hi}) for lo, hi in zip(S.lo, S.hi)]
        return np.array(list(itertools.product(*choices)), dtype=float)
    if isinstance(S, Empty):
        return np.zeros((0, S.dim))
    raise UnsupportedError(f"{S!r} has no finite list of extreme points")


def members(S: ConvexSet) -> np.ndarray:
    """Finite points of S: the extreme points when bounded, otherwise the
    finite corners of the box (infinite coordinates replaced by the finite
    end or 0)."""
    if isinstance(S, Box) and not is_bounded(S):
        choices = []
        for lo, hi in zip(S.lo, S.hi):
            c = sorted({t for t in (lo, hi) if math.isfinite(t)})
            choices.append(c or [0.0])
        return np.array(list(itertools.product(*choices)), dtype=float)
    if isinstance(S, Affine):
        return S.point.reshape(1, -1)
    return extreme_points(S)


def as_interval(S: ConvexSet) -> tuple[float, float] | None:
    """(lo, hi) of a one-dimensional set, None when empty."""
    if S.dim != 1:
        raise ValueError("as_interval needs a 1-D set")
    if isinstance(S, Empty):
        return None
    if isinstance(S, Singleton):
        return float(S.v[0]), float(S.v[0])
    if isinstance(S, Box):
        return float(S.lo[0]), float(S.hi[0])
    if isinstance(S, Polytope):
        return float(S.vertices.min()), float(S.vertices.max())
    if isinstance(S, Affine):
        if S.basis.shape[0]:
            return -math.inf, math.inf
        return float(S.point[0]), float(S.point[0])
    raise UnsupportedError(f"cannot read {S!r} as an interval")


def interval_set(lo: float, hi: float) -> ConvexSet:
    if lo == hi:
        return Singleton([lo])
    return Box([lo], [hi])


def as_box(S: ConvexSet) -> Box | None:
    if isinstance(S, Box):
        return S
    if isinstance(S, Singleton):
        return Box(S.v, S.v)
    if isinstance(S, Affine) and S.basis.shape[0] == 0:
        return Box(S.point, S.point)
    if S.dim == 1 and isinstance(S, (Polytope, Affine)):
        lo, hi = as_interval(S)
        return Box([lo], [hi])
    return None


# --------------------------------------------------------------------------
# distance and projection


def _polytope_project(V: np.ndarray, x: np.ndarray) -> np.ndarray:
    n = V.shape[1]
    if n == 1:
        return np.clip(x, V.min(), V.max())
    best, best_d = V[0], math.inf
    k = V.shape[0]
    # Caratheodory: the projection lies in the hull of <= n+1 vertices
    for r in range(1, min(k, n + 1) + 1):
        for idx in itertools.combinations(range(k), r):
            P = V[list(idx)]
            base = P[0]
            if r == 1:
                z = base
            else:
                D = (P[1:] - base).T
                mu = np.linalg.lstsq(D, x - base, rcond=None)[0]
                if np.any(mu < -1e-12) or mu.sum() > 1 + 1e-12:
                    continue
                z = base + D @ mu
            d = float(np.linalg.norm(x - z))
            if d < best_d:
                best, best_d = z, d
    return best


def project(S: ConvexSet, x) -> np.ndarray:
    """Nearest point of S to x."""
    x = as_vector(x)
    if isinstance(S, Singleton):
        return S.v.copy()
    if isinstance(S, Box):
        return np.clip(x, S.lo, S.hi)
    if isinstance(S, Affine):
        r = x - S.point
        return S.point + S.basis.T @ (S.basis @ r)
    if isinstance(S, Polytope):
        return _polytope_project(S.vertices, x)
    if isinstance(S, Empty):
        raise ValueError("cannot project onto the empty set")
    raise UnsupportedError(f"no projection for {S!r}")


def set_distance(S: ConvexSet, x) -> float:
    """Euclidean distance d(x, S), +inf for the empty set."""
    x = as_vector(x)
    if x.size != S.dim:
        raise ValueError(f"point of dimension {x.size} vs set of dimension {S.dim}")
    if isinstance(S, Empty):
        return math.inf
    if isinstance(S, DistanceOracle):
        return float(S.fn(x))
    if isinstance(S, Box):
        # clip first: inf - inf never appears
        d = x - np.clip(x, S.lo, S.hi)
    elif isinstance(S, Singleton):
        d = x - S.v
    else:
        d = x - project(S, x)
    return math.sqrt(float(d @ d))


# --------------------------------------------------------------------------
# excess


def _box_excess(C: Box, D: Box) -> float:
    total = 0.0
    for cl, ch, dl, dh in zip(C.lo, C.hi, D.lo, D.hi):
        left = 0.0 if dl == -math.inf else (math.inf if cl == -math.inf else dl - cl)
        right = 0.0 if dh == math.inf else (math.inf if ch == math.inf else ch - dh)
        t = max(left, right, 0.0)
        total += t * t
    return math.sqrt(total)


def set_excess(C: ConvexSet, D: ConvexSet) -> float:
    """e(C, D) = sup over C of d(., D), with e(empty, D) = 0 for nonempty D
    and e(empty, empty) = inf."""
    if isinstance(C, Empty):
        return math.inf if isinstance(D, Empty) else 0.0
    if isinstance(D, Empty):
        return math.inf
    if isinstance(C, Singleton):
        return set_distance(D, C.v)
    bc, bd = as_box(C), as_box(D)
    if bc is not None and bd is not None:
        return _box_excess(bc, bd)
    if not is_bounded(C):
        if is_bounded(D):
            return math.inf
        if isinstance(C, Affine) and isinstance(D, Affine):
            # directions of C must lie in span(D), else excess is infinite
            resid = C.basis - (C.basis @ D.basis.T) @ D.basis
            if resid.size and np.max(np.abs(resid)) > 1e-10:
                return math.inf
            return set_distance(D, C.point)
        raise UnsupportedError(f"excess of unbounded {C!r} over {D!r}")
    return max(set_distance(D, p) for p in extreme_points(C))


def sets_equal(A: ConvexSet, B: ConvexSet, tol: float = 1e-8) -> bool:
    if isinstance(A, Empty) or isinstance(B, Empty):
        return isinstance(A, Empty) and isinstance(B, Empty)
    return set_excess(A, B) <= tol and set_excess(B, A) <= tol


# --------------------------------------------------------------------------
# arithmetic


def translate(S: ConvexSet, t) -> ConvexSet:
    t = as_vector(t)
    if isinstance(S, Empty):
        return S
    if isinstance(S, Singleton):
        return Singleton(S.v + t)
    if isinstance(S, Box):
        return Box(S.lo + t, S.hi + t)
    if isinstance(S, Polytope):
        return Polytope(S.vertices + t)
    if isinstance(S, Affine):
        return Affine(S.point + t, S.basis)
    if isinstance(S, DistanceOracle):
        fn = S.fn
        return DistanceOracle(f"{S.tag}+t", lambda x: fn(x - t), S.dim)
    raise UnsupportedError(f"cannot translate {S!r}")


def scale(S: ConvexSet, alpha: float) -> ConvexSet:
    if alpha <= 0:
        raise ValueError("scale factor must be positive")
    if isinstance(S, Empty):
        return S
    if isinstance(S, Singleton):
        return Singleton(alpha * S.v)
    if isinstance(S, Box):
        return Box(alpha * S.lo, alpha * S.hi)
    if isinstance(S, Polytope):
        return Polytope(alpha * S.vertices)
    if isinstance(S, Affine):
        return Affine(alpha * S.point, S.basis)
    raise UnsupportedError(f"cannot scale {S!r}")


def minkowski_sum(S: ConvexSet, T: ConvexSet) -> ConvexSet:
    """S + T, exact for Singleton + any, Box + Box, and every 1-D pair."""
    if S.dim != T.dim:
        raise ValueError("Minkowski sum of sets of different dimension")
    if isinstance(S, Empty) or isinstance(T, Empty):
        return Empty(S.dim)
    if isinstance(S, Singleton):
        return translate(T, S.v)
    if isinstance(T, Singleton):
        return translate(S, T.v)
    if isinstance(S, Box) and isinstance(T, Box):
        return Box(S.lo + T.lo, S.hi + T.hi)
    if S.dim == 1:
        (a, b), (c, d) = as_interval(S), as_interval(T)
        return interval_set(a + c, b + d)
    raise UnsupportedError(f"Minkowski sum {S!r} + {T!r} is not kept exact")


def support_min(S: ConvexSet, c) -> float:
    """inf of <c, y> over y in S (+inf for the empty set)."""
    c = as_vector(c)
    if isinstance(S, Empty):
        return math.inf
    if isinstance(S, Box):
        total = 0.0
        for ci, lo, hi in zip(c, S.lo, S.hi):
            if ci > 0:
                total += ci * lo
            elif ci < 0:
                total += ci * hi
        return float(total)
    if isinstance(S, Affine):
        if S.basis.shape[0] and np.max(np.abs(S.basis @ c)) > 0:
            return -math.inf
        return float(c @ S.point)
    return float(np.min(extreme_points(S) @ c))


def _hull_2d(P: np.ndarray) -> np.ndarray:
    pts = sorted(set(map(tuple, P)))
    if len(pts) <= 2:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _clip_polygon(poly: list, axis: int, bound: float, keep_below: bool) -> list:
    def inside(p):
        return p[axis] <= bound if keep_below else p[axis] >= bound

    out = []
    m = len(poly)
    for i in range(m):
        cur, nxt = poly[i], poly[(i + 1) % m]
        if inside(cur):
            out.append(cur)
        if inside(cur) != inside(nxt):
            t = (bound - cur[axis]) / (nxt[axis] - cur[axis])
            out.append(cur + t * (nxt - cur))
    return out


def intersect_box(S: ConvexSet, lo, hi) -> ConvexSet:
    """S intersected with a finite box [lo, hi]."""
    lo, hi = as_vector(lo), as_vector(hi)
    if isinstance(S, Empty):
        return S
    if isinstance(S, Singleton):
        inside = (S.v >= lo - MEMBERSHIP_TOL).all() and (S.v <= hi + MEMBERSHIP_TOL).all()
        return S if inside else Empty(S.dim)
    if S.dim == 1 or isinstance(S, Box):
        B = as_box(S)
        if B is not None:
            a, b = np.maximum(B.lo, lo), np.minimum(B.hi, hi)
            if np.any(a > b):
                return Empty(S.dim)
            return Box(a, b)
    if isinstance(S, Polytope) and S.dim == 2:
        poly = [np.array(p) for p in _hull_2d(S.vertices)]
        if len(poly) < 3:
            # segment or point: clip parametrically
            a, b = poly[0], poly[-1]
            t0, t1 = 0.0, 1.0
            d = b - a
            for i in range(2):
                if d[i] == 0:
                    if a[i] < lo[i] or a[i] > hi[i]:
                        return Empty(2)
                    continue
                u, w = (lo[i] - a[i]) / d[i], (hi[i] - a[i]) / d[i]
                t0, t1 = max(t0, min(u, w)), min(t1, max(u, w))
            if t0 > t1:
                return Empty(2)
            return Polytope([a + t0 * d, a + t1 * d])
        for axis in range(2):
            poly = _clip_polygon(poly, axis, hi[axis], True)
            if poly:
                poly = _clip_polygon(poly, axis, lo[axis], False)
            if not poly:
                return Empty(2)
        return Polytope(_hull_2d(np.array(poly)))
    raise UnsupportedError(f"intersection of {S!r} with a box")


# --------------------------------------------------------------------------
# JSON descriptors


def _num(v):
    if isinstance(v, str):
        return float(v)  # accepts "inf", "-inf"
    if v is None:
        raise ValueError("null is not a number")
    return float(v)


def _nums(seq):
    if isinstance(seq, (list, tuple)):
        return [_nums(s) for s in seq]
    return _num(seq)


def set_from_json(obj: dict) -> ConvexSet:
    kind = obj.get("type")
    if kind == "Empty":
        return Empty(int(obj["dim"]))
    if kind == "Singleton":
        return Singleton(_nums(obj["v"]))
    if kind == "Box":
        return Box(_nums(obj["lo"]), _nums(obj["hi"]))
    if kind == "Polytope":
        V = _nums(obj["vertices"])
        if len(V) > 8:
            raise ValueError("descriptor polytopes are limited to 8 vertices")
        return Polytope(V)
    if kind == "Affine":
        return Affine(_nums(obj["point"]), _nums(obj.get("basis", [])))
    raise ValueError(f"unknown set type {kind!r}")


def json_number(v: float):
    v = float(v)
    if math.isfinite(v):
        return v
    return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")


def json_vector(v) -> list:
    return [json_number(t) for t in np.asarray(v, dtype=float).reshape(-1)]


def set_to_json(S: ConvexSet) -> dict:
    if isinstance(S, Empty):
        return {"type": "Empty", "dim": S.dim}
    if isinstance(S, Singleton):
        return {"type": "Singleton", "v": json_vector(S.v)}
    if isinstance(S, Box):
        return {"type": "Box", "lo": json_vector(S.lo), "hi": json_vector(S.hi)}
    if isinstance(S, Polytope):
        return {"type": "Polytope", "vertices": [json_vector(r) for r in S.vertices]}
    if isinstance(S, Affine):
        return {
            "type": "Affine",
            "point": json_vector(S.point),
            "basis": [json_vector(r) for r in S.basis],
        }
    return {"type": "DistanceOracle", "tag": S.tag, "dim": S.dim}
