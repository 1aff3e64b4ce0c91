"""Sampled estimators of regularity constants of a convex subdifferential.

Each estimator evaluates a pointwise ratio over a deterministic sample of
the ball B_a(xbar), repeats it on the radii a, a/2, ..., a/16 and returns a
`ModulusReport`. Radii sweeps use the same unit pattern rescaled to each
radius, so a ratio behaving like r**-k shows up as an exact factor 2**k per
halving; that is what the classifiers look for.

Two kinds of constants are estimated:

* sup-type (subregularity/calmness moduli kappa): smaller is better, and
  growth without bound as the radius shrinks means the property fails;
* inf-type (growth constants c): larger is better, and decay to zero means
  the property fails.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .catalog import (
    BasePair,
    ConvexFunction,
    NonSmoothError,
    Sum,
    hessian,
    side_curvature,
    solution_set,
    subdifferential,
    subgradient_interval,
    value,
)
from .sets import (
    ConvexSet,
    Empty,
    UnsupportedError,
    as_vector,
    intersect_box,
    is_single_point,
    json_number,
    json_vector,
    members,
    project,
    set_distance,
    support_min,
)

DENOM_FLOOR = 1e-12
ZERO_NUMERATOR = 1e-8
INEQ_TOL = 1e-9
SWEEP_HALVINGS = 4
KAPPA_FACTOR = 2.0
C_FACTOR = 0.5
LAMBDAS = tuple(k / 10 for k in range(1, 10))


class EstimatorError(RuntimeError):
    """A sample contradicted an identity the estimator relies on."""


@lru_cache(maxsize=1 << 16)
def _cached_subdifferential(f: ConvexFunction, key: bytes) -> ConvexSet:
    return subdifferential(f, np.frombuffer(key, dtype=float))


def _subdiff(f: ConvexFunction, x: np.ndarray) -> ConvexSet:
    """subdifferential(f, x), memoized per (function object, sample point).

    Several estimators run over the same samples; function descriptors are
    immutable and hashed by identity, so the cache is exact."""
    return _cached_subdifferential(f, np.ascontiguousarray(x, dtype=float).tobytes())


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Deterministic samples of the closed ball B_radius(center).

    A symmetric tensor grid (``per_axis`` points per coordinate, clipped to
    the ball) followed by ``n_random`` seeded uniform points.
    """

    center: np.ndarray
    radius: float
    per_axis: int = 41
    n_random: int = 200
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not self.radius > 0:
            raise ValueError("grid radius must be positive")
        if self.per_axis < 2:
            raise ValueError("need at least two grid points per axis")

    @classmethod
    def around(cls, bp: BasePair, **kw) -> "SampleGrid":
        return cls(bp.xbar, bp.radius, **kw)

    @cached_property
    def unit(self) -> np.ndarray:
        n = self.center.size
        k = self.per_axis
        h = (k - 1) / 2
        axis = (np.arange(k) - h) / h  # exactly symmetric
        mesh = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), -1).reshape(-1, n)
        mesh = mesh[np.linalg.norm(mesh, axis=1) <= 1 + 1e-12]
        rng = np.random.default_rng(self.seed)
        d = rng.standard_normal((self.n_random, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = rng.random(self.n_random) ** (1.0 / n)
        pts = np.vstack([mesh, d * r[:, None]])
        pts.flags.writeable = False
        return pts

    def samples(self, radius: float | None = None) -> np.ndarray:
        r = self.radius if radius is None else radius
        pts = self.center + r * self.unit
        pts.flags.writeable = False
        return pts

    def radii(self) -> list[float]:
        return [self.radius / 2**k for k in range(SWEEP_HALVINGS + 1)]


@dataclass(frozen=True)
class LedgerEntry:
    x: tuple
    numerator: float
    denominator: float

    @property
    def ratio(self) -> float:
        if self.denominator == 0:
            return math.inf if self.numerator > 0 else 0.0
        return self.numerator / self.denominator


@dataclass(eq=False)
class ModulusReport:
    kind: str
    value: float
    witness: np.ndarray | None
    ledger: list = field(default_factory=list)
    radii_sweep: list = field(default_factory=list)
    classification: str = "holds"
    note: str = ""

    @property
    def holds(self) -> bool:
        """Fails only on a positive detection; an empty ledger is vacuous."""
        return self.classification != "fails"

    @property
    def is_sup(self) -> bool:
        return self.kind in ("subregularity", "strong-subregularity", "calmness")

    def restricted(self, radius: float, center) -> float:
        """Value over ledger samples within ``radius`` of ``center`` (nested sets)."""
        c = as_vector(center)
        vals = [e.ratio for e in self.ledger if np.linalg.norm(np.array(e.x) - c) <= radius * (1 + 1e-12)]
        if not vals:
            return 0.0 if self.is_sup else math.inf
        return max(vals) if self.is_sup else min(vals)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value": json_number(self.value),
            "witness": None if self.witness is None else json_vector(self.witness),
            "radii_sweep": [[json_number(r), json_number(v)] for r, v in self.radii_sweep],
            "classification": self.classification,
            "note": self.note,
        }

    def ledger_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "numerator", "denominator", "ratio"])
        for e in self.ledger:
            w.writerow([";".join(repr(float(t)) for t in e.x), repr(e.numerator), repr(e.denominator), repr(e.ratio)])
        return buf.getvalue()


# --------------------------------------------------------------------------
# the sweep machinery


def _collect(points, pointwise) -> list[LedgerEntry]:
    out = []
    for x in points:
        r = pointwise(x)
        if r is not None:
            out.append(LedgerEntry(tuple(x.tolist()), float(r[0]), float(r[1])))
    return out


def _extreme(entries, sup: bool):
    if not entries:
        return (0.0 if sup else math.inf), None
    ratios = [e.ratio for e in entries]
    i = int(np.argmax(ratios) if sup else np.argmin(ratios))
    return ratios[i], np.array(entries[i].x)


def classify_sweep(values: list[float], sup: bool, factor: float | None = None) -> str:
    """Heuristic classification of a radius sweep (largest radius first).

    sup-type fails when the constant is infinite at the smallest radius or
    multiplies by >= factor over three consecutive halvings; inf-type fails
    when the constant is zero at the smallest radius or shrinks by <= factor
    over three consecutive halvings.
    """
    if sup:
        factor = KAPPA_FACTOR if factor is None else factor
        if values[-1] == math.inf:
            return "fails"
        for j in range(len(values) - 3):
            v = values[j : j + 4]
            if all(v[i] > 0 and v[i + 1] >= factor * v[i] for i in range(3)):
                return "fails"
        return "holds"
    factor = C_FACTOR if factor is None else factor
    if values[-1] <= DENOM_FLOOR:
        return "fails"
    for j in range(len(values) - 3):
        v = values[j : j + 4]
        if all(math.isfinite(v[i]) and v[i + 1] <= factor * v[i] for i in range(3)):
            return "fails"
    return "holds"


def sweep(kind: str, grid: SampleGrid, pointwise, sup: bool, factor: float | None = None) -> ModulusReport:
    """Evaluate ``pointwise`` over the grid at every sweep radius."""
    sweep_vals, main = [], None
    for k, r in enumerate(grid.radii()):
        entries = _collect(grid.samples(r), pointwise)
        v, wit = _extreme(entries, sup)
        sweep_vals.append((r, v))
        if k == 0:
            main = (entries, v, wit)
    entries, v, wit = main
    values = [s[1] for s in sweep_vals]
    cls = "degenerate" if not entries else classify_sweep(values, sup, factor)
    return ModulusReport(
        kind=kind,
        value=v,
        witness=wit,
        ledger=entries,
        radii_sweep=sweep_vals,
        classification=cls,
        note="heuristic classification from the radius sweep",
    )


def _grid(bp: BasePair, grid: SampleGrid | None) -> SampleGrid:
    return SampleGrid.around(bp) if grid is None else grid


def _solution(bp: BasePair, solution: ConvexSet | None) -> ConvexSet:
    S = solution_set(bp.f, bp.ystar) if solution is None else solution
    if isinstance(S, Empty):
        raise EstimatorError("solution set is empty: ystar is not in the range of df")
    return S


def _image(f: ConvexFunction, x, window: float | None, center) -> ConvexSet:
    D = _subdiff(f, x)
    if window is None:
        return D
    return intersect_box(D, center - window, center + window)


# --------------------------------------------------------------------------
# estimators


def estimate_subregularity_modulus(
    bp: BasePair,
    grid: SampleGrid | None = None,
    solution: ConvexSet | None = None,
    image_window: float | None = None,
    factor: float | None = None,
) -> ModulusReport:
    """kappa = sup d(x, S) / d(ystar, df(x)) with S = (df)^{-1}(ystar).

    ``image_window`` intersects df(x) with a box of that radius around
    ystar before measuring the distance; None uses df(x) as is.
    """
    grid = _grid(bp, grid)
    S = _solution(bp, solution)
    f, ystar = bp.f, bp.ystar

    def ratio(x):
        num = set_distance(S, x)
        den = set_distance(_image(f, x, image_window, ystar), ystar)
        if den == 0 and num >= ZERO_NUMERATOR and image_window is None:
            raise EstimatorError(f"ystar in df(x) at x={x} but d(x, S)={num:g}")
        if den < DENOM_FLOOR and num < ZERO_NUMERATOR:
            return None
        return num, den

    return sweep("subregularity", grid, ratio, sup=True, factor=factor)


def estimate_strong_subregularity_modulus(bp: BasePair, grid: SampleGrid | None = None) -> ModulusReport:
    """kappa = sup ||x - xbar|| / d(ystar, df(x)); infinite when another
    point of the solution set lies in the ball."""
    grid = _grid(bp, grid)
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar

    def ratio(x):
        num = float(np.linalg.norm(x - xbar))
        if num == 0:
            return None
        den = set_distance(_subdiff(f, x), ystar)
        return num, (0.0 if den < DENOM_FLOOR else den)

    return sweep("strong-subregularity", grid, ratio, sup=True)


def _tilted_excess(bp: BasePair):
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar
    f0 = value(f, xbar)

    def excess(x):
        return value(f, x) - f0 - float(ystar @ (x - xbar))

    return excess


def estimate_growth_constant(
    bp: BasePair, grid: SampleGrid | None = None, solution: ConvexSet | None = None
) -> ModulusReport:
    """c = inf [f(x) - f(xbar) - <ystar, x - xbar>] / d(x, S)^2."""
    grid = _grid(bp, grid)
    S = _solution(bp, solution)
    excess = _tilted_excess(bp)

    def ratio(x):
        d = set_distance(S, x)
        e = excess(x)
        if d < DENOM_FLOOR:
            if e < -INEQ_TOL:
                raise EstimatorError(f"negative tilted excess {e:g} on the solution set at x={x}")
            return None
        return e, d * d

    return sweep("growth", grid, ratio, sup=False)


def estimate_strong_growth_constant(bp: BasePair, grid: SampleGrid | None = None) -> ModulusReport:
    """c = inf [f(x) - f(xbar) - <ystar, x - xbar>] / ||x - xbar||^2."""
    grid = _grid(bp, grid)
    excess = _tilted_excess(bp)
    xbar = bp.xbar

    def ratio(x):
        u = x - xbar
        d2 = float(u @ u)
        if d2 == 0:
            return None
        return excess(x), d2

    return sweep("strong-growth", grid, ratio, sup=False)


def check_strong_monotone_relatedness(bp: BasePair, grid: SampleGrid | None = None) -> ModulusReport:
    """c = inf over x != xbar of min_{y in df(x)} <y - ystar, x - xbar> / ||x - xbar||^2.

    The inner minimum of a linear function over df(x) is exact (box
    corners, polytope vertices)."""
    grid = _grid(bp, grid)
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar

    def ratio(x):
        u = x - xbar
        d2 = float(u @ u)
        if d2 == 0:
            return None
        m = support_min(_subdiff(f, x), u)
        if m == math.inf:  # x outside dom f, nothing to test
            return None
        return m - float(ystar @ u), d2

    return sweep("monotone-modulus", grid, ratio, sup=False)


def refute_growth(bp: BasePair, c: float, grid: SampleGrid | None = None, strong: bool = True):
    """First sample violating the growth inequality with constant c, or None."""
    grid = _grid(bp, grid)
    excess = _tilted_excess(bp)
    S = None if strong else _solution(bp, None)
    for x in grid.samples():
        d = float(np.linalg.norm(x - bp.xbar)) if strong else set_distance(S, x)
        e = excess(x)
        if e < c * d * d - INEQ_TOL:
            return x, e, c * d * d
    return None


# --------------------------------------------------------------------------
# cross-checks of the characterization theorems


@dataclass(eq=False)
class GrowthSubregularityCheck:
    """Subregularity modulus vs. quadratic growth constant at one base pair."""

    subregularity: ModulusReport
    growth: ModulusReport
    forward_ok: bool
    backward_ok: bool
    equivalence_ok: bool
    isolated: bool | None = None

    @property
    def kappa(self) -> float:
        return self.subregularity.value

    @property
    def c(self) -> float:
        return self.growth.value

    @property
    def gap(self) -> float:
        """c * kappa; the forward bound only guarantees >= 1/4."""
        return self.c * self.kappa

    @property
    def ok(self) -> bool:
        return self.forward_ok and self.backward_ok and self.equivalence_ok

    def to_json(self) -> dict:
        out = {
            "kappa": json_number(self.kappa),
            "c": json_number(self.c),
            "forward_ok": self.forward_ok,
            "backward_ok": self.backward_ok,
            "equivalence_ok": self.equivalence_ok,
            "gap": json_number(self.gap) if math.isfinite(self.gap) else json_number(math.nan),
            "subregularity": self.subregularity.to_json(),
            "growth": self.growth.to_json(),
        }
        if self.isolated is not None:
            out["isolated"] = self.isolated
        return out


def _bounds(kappa: ModulusReport, c: ModulusReport) -> tuple[bool, bool]:
    if not (kappa.holds and c.holds):
        return True, True
    k, cc = kappa.value, c.value
    forward = cc >= (math.inf if k == 0 else 1 / (4 * k)) - INEQ_TOL or cc == math.inf
    backward = k <= (math.inf if cc == 0 else 1 / cc) + INEQ_TOL
    return forward, backward


def check_growth_subregularity(bp: BasePair, grid: SampleGrid | None = None) -> GrowthSubregularityCheck:
    """df subregular at (xbar, ystar) with kappa  <=>  growth with c, and
    c >= 1/(4 kappa), kappa <= 1/c on the estimates."""
    grid = _grid(bp, grid)
    kappa = estimate_subregularity_modulus(bp, grid)
    c = estimate_growth_constant(bp, grid)
    forward, backward = _bounds(kappa, c)
    return GrowthSubregularityCheck(kappa, c, forward, backward, kappa.holds == c.holds)


def isolated_in_solution_set(bp: BasePair) -> bool:
    """xbar is isolated in (df)^{-1}(ystar); for a convex set containing xbar
    that happens exactly when the set is the single point xbar."""
    return is_single_point(solution_set(bp.f, bp.ystar))


def check_strong_growth_subregularity(bp: BasePair, grid: SampleGrid | None = None) -> GrowthSubregularityCheck:
    """Strong subregularity (with exact isolation) <=> growth in ||x - xbar||^2."""
    grid = _grid(bp, grid)
    kappa = estimate_strong_subregularity_modulus(bp, grid)
    isolated = isolated_in_solution_set(bp)
    if not isolated:
        kappa.classification = "fails"
        kappa.note = "xbar is not isolated in the solution set"
    c = estimate_strong_growth_constant(bp, grid)
    forward, backward = _bounds(kappa, c)
    return GrowthSubregularityCheck(kappa, c, forward, backward, kappa.holds == c.holds, isolated)


@dataclass(eq=False)
class MonotoneChainCheck:
    strong_growth: ModulusReport
    monotone: ModulusReport
    equivalence_ok: bool
    transfer_ok: bool

    @property
    def ok(self) -> bool:
        return self.equivalence_ok and self.transfer_ok

    def to_json(self) -> dict:
        return {
            "strong_growth": self.strong_growth.to_json(),
            "monotone": self.monotone.to_json(),
            "equivalence_ok": self.equivalence_ok,
            "transfer_ok": self.transfer_ok,
        }


def check_monotone_chain(bp: BasePair, grid: SampleGrid | None = None) -> MonotoneChainCheck:
    """strong growth holds <=> strong monotone relatedness, c_mono >= c."""
    grid = _grid(bp, grid)
    c = estimate_strong_growth_constant(bp, grid)
    m = check_strong_monotone_relatedness(bp, grid)
    return MonotoneChainCheck(c, m, c.holds == m.holds, m.value >= c.value - INEQ_TOL)


@dataclass(eq=False)
class SumRuleCheck:
    c_left: float
    c_right: float
    c_sum: float
    ok: bool
    report: ModulusReport

    def to_json(self) -> dict:
        return {
            "c_left": json_number(self.c_left),
            "c_right": json_number(self.c_right),
            "c_sum": json_number(self.c_sum),
            "ok": self.ok,
        }


def check_sum_rule(bpf: BasePair, bpg: BasePair, grid: SampleGrid | None = None) -> SumRuleCheck:
    """Strong growth constants add up: c_{f+g} >= c_f + c_g."""
    if not np.array_equal(bpf.xbar, bpg.xbar):
        raise ValueError("both base pairs need the same xbar")
    grid = _grid(bpf, grid)
    cf = estimate_strong_growth_constant(bpf, grid)
    cg = estimate_strong_growth_constant(bpg, grid)
    bps = BasePair(Sum(bpf.f, bpg.f), bpf.xbar, bpf.ystar + bpg.ystar, bpf.radius)
    cs = estimate_strong_growth_constant(bps, grid)
    return SumRuleCheck(cf.value, cg.value, cs.value, cs.value >= cf.value + cg.value - INEQ_TOL, cs)


# --------------------------------------------------------------------------
# second-order moduli


def jacobi_eigenvalues(M, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(M, dtype=float)
    n = A.shape[0]
    scale = max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= 1e-18 * scale:
                    # negligible entry; rotating on it would overflow theta
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 if theta == 0 else math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = s, -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


def hessian_modulus(f: ConvexFunction, xbar) -> float:
    """Smallest eigenvalue of the Hessian at xbar (NonSmoothError otherwise)."""
    return float(jacobi_eigenvalues(hessian(f, xbar))[0])


@dataclass(eq=False)
class HessianCheck:
    modulus: float
    strong_growth: ModulusReport
    equivalence_ok: bool

    def to_json(self) -> dict:
        return {
            "hessian_modulus": json_number(self.modulus),
            "strong_growth": self.strong_growth.to_json(),
            "equivalence_ok": self.equivalence_ok,
        }


def check_hessian_equivalence(bp: BasePair, grid: SampleGrid | None = None) -> HessianCheck:
    """Positive-definite Hessian <=> strong growth, on smooth instances."""
    m = hessian_modulus(bp.f, bp.xbar)
    c = estimate_strong_growth_constant(bp, _grid(bp, grid))
    return HessianCheck(m, c, (m > DENOM_FLOOR) == c.holds)


def contingent_derivative_modulus(bp: BasePair) -> ModulusReport:
    """inf of <z, w>/||w||^2 over (w, z) tangent to gph df at (xbar, ystar), w != 0.

    Smooth points: the tangent cone is the graph of the Hessian. 1-D
    non-smooth points: the graph is a monotone curve with a vertical piece
    at xbar; only the branches leaving (xbar, ystar) horizontally contribute,
    each with slope equal to its one-sided curvature.
    """
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar
    try:
        H = hessian(f, xbar)
    except NonSmoothError:
        H = None
    if H is not None:
        w, U = np.linalg.eigh(H)
        m = float(jacobi_eigenvalues(H)[0])
        u = U[:, 0]
        entry = LedgerEntry(tuple(u.tolist()), float(u @ H @ u), float(u @ u))
        return ModulusReport("contingent-modulus", m, u, [entry], [], "holds" if m > DENOM_FLOOR else "fails")
    if f.dim != 1:
        raise UnsupportedError("graphical derivative only for smooth points or 1-D functions")
    lo, hi = subgradient_interval(f, float(xbar[0]))
    y = float(ystar[0])
    entries = []
    for side, end in ((1, hi), (-1, lo)):
        if y != end:
            continue
        s = side_curvature(f, float(xbar[0]), side)
        if s is None:
            continue
        # branch direction (side, side*s): <z, w>/|w|^2 = s
        entries.append(LedgerEntry((float(side),), float(s), 1.0))
    if not entries:
        return ModulusReport(
            "contingent-modulus", math.inf, None, [], [], "holds",
            note="no tangent directions with w != 0; positive definiteness is vacuous",
        )
    i = int(np.argmin([e.ratio for e in entries]))
    m = entries[i].ratio
    return ModulusReport(
        "contingent-modulus", m, np.array(entries[i].x), entries, [], "holds" if m > DENOM_FLOOR else "fails"
    )


def sampled_contingent_modulus(bp: BasePair, slope_bound: float = 1e4, depth: tuple = (20, 40)) -> float:
    """Fallback: inf of <y_k - ystar, x_k - xbar>/|x_k - xbar|^2 over graph
    points approaching (xbar, ystar) along bounded difference quotients.

    Returns +inf when no admissible sample exists (only vertical directions).
    """
    f, xbar, ystar = bp.f, bp.xbar, bp.ystar
    best = math.inf
    n = f.dim
    dirs = np.vstack([np.eye(n), -np.eye(n)])
    for j in range(*depth):
        t = 2.0**-j
        for d in dirs:
            x = xbar + t * d
            D = _subdiff(f, x)
            if isinstance(D, Empty):
                continue
            y = project(D, ystar)
            if np.linalg.norm(y - ystar) > slope_bound * t:
                continue
            best = min(best, float((y - ystar) @ (x - xbar)) / (t * t))
    return best


# --------------------------------------------------------------------------
# convex-combination growth and strong convexity


@dataclass(eq=False)
class CombinationGrowthCheck:
    c: float
    premise_holds: bool
    conclusion_holds: bool
    premise_witness: tuple | None
    conclusion_witness: tuple | None
    strong_convexity_holds: bool

    @property
    def implication_ok(self) -> bool:
        return (not self.premise_holds) or self.conclusion_holds

    @property
    def separates(self) -> bool:
        """Premise holds while strong convexity with the same c fails."""
        return self.premise_holds and not self.strong_convexity_holds

    def to_json(self) -> dict:
        def wit(w):
            return None if w is None else [json_vector(w[0]), json_number(w[1])]

        return {
            "c": json_number(self.c),
            "premise_holds": self.premise_holds,
            "conclusion_holds": self.conclusion_holds,
            "implication_ok": self.implication_ok,
            "premise_witness": wit(self.premise_witness),
            "conclusion_witness": wit(self.conclusion_witness),
            "strong_convexity_holds": self.strong_convexity_holds,
            "separates": self.separates,
        }


def _combination_ok(f, x1, x2, f1, f2, lam, c) -> bool:
    rhs = (1 - lam) * f1 + lam * f2
    if rhs == math.inf:
        return True
    d = x1 - x2
    rhs -= c * lam * (1 - lam) * float(d @ d)
    return value(f, (1 - lam) * x1 + lam * x2) <= rhs + INEQ_TOL


def check_convex_combination_growth(
    bp: BasePair, c: float, grid: SampleGrid | None = None, pair_samples: int = 41
) -> CombinationGrowthCheck:
    """Premise: f((1-l)x + l xbar) <= (1-l)f(x) + l f(xbar) - c l(1-l)||x - xbar||^2
    on the grid for l in 0.1..0.9. Conclusion: growth with c at every member
    of df(xbar). The premise must imply the conclusion."""
    grid = _grid(bp, grid)
    f, xbar = bp.f, bp.xbar
    pts = grid.samples()
    fx = [value(f, x) for x in pts]
    f0 = value(f, xbar)
    premise_w = None
    for x, v in zip(pts, fx):
        for lam in LAMBDAS:
            if not _combination_ok(f, x, xbar, v, f0, lam, c):
                premise_w = (x, lam)
                break
        if premise_w is not None:
            break
    conclusion_w = None
    for y in members(subdifferential(f, xbar)):
        for x, v in zip(pts, fx):
            d = x - xbar
            rhs = f0 + float(y @ d) + c * float(d @ d)
            if v < rhs - INEQ_TOL:
                conclusion_w = (x, float(y @ y) ** 0.5)
                break
        if conclusion_w is not None:
            break
    # strong convexity on pairs from a coarse, evenly spaced subsample
    step = max(1, len(pts) // pair_samples)
    sub, fsub = pts[::step], fx[::step]
    strong = all(
        _combination_ok(f, sub[i], sub[j], fsub[i], fsub[j], lam, c)
        for i in range(len(sub))
        for j in range(i + 1, len(sub))
        for lam in LAMBDAS
    )
    return CombinationGrowthCheck(c, premise_w is None, conclusion_w is None, premise_w, conclusion_w, strong)
