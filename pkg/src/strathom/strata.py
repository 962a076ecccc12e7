"""Strata, prestratifications, and stratified-map contexts.

A stratum is a connected parametrized submanifold of R^n: a chart map
psi: R^d -> R^n restricted to an open domain (conjunction of strict
inequalities in chart coordinates).  A prestratification collects
pairwise disjoint strata together with declared boundary incidences
(X, Y, y): a point y on Y that is a limit of points of X.

All validation here is sampled, never certified: reports carry their
sample counts and seeds, and a passing check means "no violation found
on these samples".  Incidence points are declared in the scene rather
than discovered; closure computation is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dsl import SmoothMap, _eval_values, to_source
from .grassmann import RTOL, Subspace, grassmann_distance, kernel, span_of
from .seeds import rng_for

ON_STRATUM_TOL = 1e-9  # point-membership / overlap distance
APPROACH_TOL = 1e-7  # how close the last arc term must come to y
IMMERSION_RTOL = 1e-8

__all__ = [
    "Stratum",
    "Incidence",
    "Prestratification",
    "StratifiedMapContext",
    "ApproachPlan",
    "Arc",
    "RankCertificate",
    "ValidationError",
    "ImmersionError",
    "ConstantRankError",
    "OverlapError",
    "IncidenceError",
    "LocateError",
    "NumericalInconsistencyError",
    "tangent_space",
    "approach_sequence",
    "validate_constant_rank",
    "validate_prestratification",
]


class ValidationError(Exception):
    pass


class ImmersionError(ValidationError):
    pass


class ConstantRankError(ValidationError):
    pass


class OverlapError(ValidationError):
    pass


class IncidenceError(ValidationError):
    pass


class LocateError(ValidationError):
    pass


class NumericalInconsistencyError(ValidationError):
    """Two independent computations of the same object disagree."""


# ---------------------------------------------------------------------------
# Stratum


@dataclass(frozen=True)
class Stratum:
    """Parametrized submanifold: chart psi: R^d -> R^n on an open domain.

    ``inverse_hint`` (optional) maps ambient points near the stratum back
    to chart coordinates in closed form and short-circuits point
    location; without it location falls back to a damped Gauss-Newton
    solve multistarted over ``sample_box``.
    """

    name: str
    chart: SmoothMap
    inverse_hint: SmoothMap | None = None
    sample_box: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if not self.sample_box:
            object.__setattr__(self, "sample_box", ((-1.0, 1.0),) * self.dim)
        if len(self.sample_box) != self.dim:
            raise ValueError(f"sample_box must have {self.dim} intervals")
        if self.inverse_hint is not None and (
            self.inverse_hint.n != self.ambient or self.inverse_hint.m != self.dim
        ):
            raise ValueError("inverse hint must map ambient points to chart points")

    @property
    def dim(self) -> int:
        return self.chart.n

    @property
    def ambient(self) -> int:
        return self.chart.m

    # -- sampling ------------------------------------------------------------

    def sample_chart_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Rejection-sample chart points from sample_box inside the domain."""
        box = np.asarray(self.sample_box)
        out: list[np.ndarray] = []
        attempts = 0
        while sum(len(o) for o in out) < count and attempts < 200:
            draw = rng.uniform(box[:, 0], box[:, 1], size=(max(count, 32), self.dim))
            keep = self.chart.in_domain(draw)
            out.append(draw[keep])
            attempts += 1
        pts = np.concatenate(out) if out else np.zeros((0, self.dim))
        if len(pts) < count:
            raise ValidationError(
                f"stratum {self.name!r}: could not sample {count} domain points "
                f"from its sample box (got {len(pts)})"
            )
        return pts[:count]

    # -- point location ------------------------------------------------------

    def domain_margins(self, u: np.ndarray) -> np.ndarray:
        """Values of the domain predicates at chart points (k, #preds)."""
        arr = np.atleast_2d(np.asarray(u, dtype=float))
        if not self.chart.domain:
            return np.ones((arr.shape[0], 0))
        cols = [arr[:, i] for i in range(self.dim)]
        return np.stack([_eval_values(p, cols) for p in self.chart.domain], axis=1)

    def locate(
        self,
        point,
        closure: bool = False,
        seed: int = 0,
        starts: int = 8,
        iters: int = 80,
    ) -> tuple[np.ndarray, float]:
        """Chart coordinates of the nearest chart image to ``point``.

        Returns (u, distance).  With ``closure=True`` the domain
        predicates may sit at zero (boundary points are eligible);
        otherwise the result must lie strictly inside the domain.
        """
        p = np.asarray(point, dtype=float)
        box = np.asarray(self.sample_box)
        seeds_list: list[np.ndarray] = []
        if self.inverse_hint is not None:
            seeds_list.append(np.asarray(self.inverse_hint(p, check_domain=False), dtype=float))
        seeds_list.append(box.mean(axis=1))
        rng = rng_for(seed, "locate", self.name)
        for _ in range(starts):
            seeds_list.append(rng.uniform(box[:, 0], box[:, 1]))
        u = np.array(seeds_list)
        # the sample box is the declared working region of the chart; an
        # inward nudge keeps iterates evaluable when the chart formula is
        # singular on an open boundary (log, sqrt)
        lo = box[:, 0] + 1e-12
        hi = box[:, 1] - 1e-12
        u = np.clip(u, lo, hi)
        for _ in range(iters):
            vals, jacs = self.chart.value_and_jacobian(u, check_domain=False)
            res = vals - p
            step = np.linalg.pinv(jacs) @ res[:, :, None]
            u = np.clip(u - step[:, :, 0], lo, hi)
            if np.max(np.abs(step)) < 1e-13:
                break
        vals = self.chart(u, check_domain=False)
        dists = np.linalg.norm(vals - p, axis=1)
        margins = self.domain_margins(u)
        if closure:
            ok = np.all(margins >= -1e-8, axis=1)
        else:
            # strict interior with a small margin: a point that is only a
            # *limit* of the stratum drives the solve onto the boundary
            # and must not count as lying on it
            ok = np.all(margins > 1e-9, axis=1)
        if not np.any(ok):
            raise LocateError(
                f"no admissible chart point found on {self.name!r} near {p.tolist()}"
            )
        dists = np.where(ok, dists, np.inf)
        best = int(np.argmin(dists))
        return u[best], float(dists[best])

    def __str__(self) -> str:
        return f"{self.name}: R^{self.dim} -> R^{self.ambient}, chart {self.chart.to_source()}"


def tangent_space(stratum: Stratum, u) -> Subspace:
    """Column span of the chart Jacobian; errors if the rank drops below d."""
    jac = stratum.chart.jacobian(u)
    space = span_of(list(jac.T), n=stratum.ambient, rtol=IMMERSION_RTOL)
    if space.dim != stratum.dim:
        raise ImmersionError(
            f"chart of {stratum.name!r} has rank {space.dim} < {stratum.dim} at {np.asarray(u).tolist()}"
        )
    return space


# ---------------------------------------------------------------------------
# Prestratification


@dataclass(frozen=True)
class Incidence:
    x: str  # approaching stratum
    y: str  # base stratum
    point: tuple[float, ...]


@dataclass(frozen=True)
class Prestratification:
    ambient: int
    strata: tuple[Stratum, ...]
    incidences: tuple[Incidence, ...] = ()

    def __post_init__(self):
        names = [s.name for s in self.strata]
        if len(set(names)) != len(names):
            raise ValueError("stratum names must be unique")
        for s in self.strata:
            if s.ambient != self.ambient:
                raise ValueError(f"stratum {s.name!r} lives in R^{s.ambient}, not R^{self.ambient}")
        for inc in self.incidences:
            self.stratum(inc.x)
            self.stratum(inc.y)
            if len(inc.point) != self.ambient:
                raise ValueError(f"incidence point {inc.point} has wrong dimension")

    def stratum(self, name: str) -> Stratum:
        for s in self.strata:
            if s.name == name:
                return s
        raise KeyError(f"no stratum named {name!r}")


# ---------------------------------------------------------------------------
# Constant-rank certificates and stratified-map context


@dataclass(frozen=True)
class RankCertificate:
    stratum: str
    rank: int
    samples: int
    seed: int
    chart_points: np.ndarray = field(repr=False)
    min_kept_sv: float  # smallest singular value counted into the rank
    max_dropped_sv: float  # largest singular value below the cutoff


def _numerical_rank(sv: np.ndarray) -> int:
    if sv.size == 0:
        return 0
    cut = max(RTOL * float(sv[0]), 1e-12)
    return int(np.count_nonzero(sv > cut))


def validate_constant_rank(
    f: SmoothMap, stratum: Stratum, samples: int = 60, seed: int = 0
) -> RankCertificate:
    """Certify that d(f o psi) has one rank at every sampled chart point."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = rng_for(seed, "rank", stratum.name)
    pts = stratum.sample_chart_points(samples, rng)
    _, chart_jacs = stratum.chart.value_and_jacobian(pts)
    vals = stratum.chart(pts)
    _, f_jacs = f.value_and_jacobian(vals, check_domain=False)
    composed = f_jacs @ chart_jacs  # (k, p, d)
    svs = np.linalg.svd(composed, compute_uv=False)
    ranks = np.array([_numerical_rank(sv) for sv in svs])
    if not np.all(ranks == ranks[0]):
        lo = int(np.argmin(ranks))
        hi = int(np.argmax(ranks))
        raise ConstantRankError(
            f"rank of the map varies on stratum {stratum.name!r}: "
            f"rank {ranks[lo]} at {pts[lo].tolist()} vs rank {ranks[hi]} at {pts[hi].tolist()}"
        )
    r = int(ranks[0])
    min_kept = float(np.min(svs[:, r - 1])) if r > 0 else 0.0
    max_dropped = float(np.max(svs[:, r:])) if r < svs.shape[1] else 0.0
    return RankCertificate(
        stratum=stratum.name,
        rank=r,
        samples=samples,
        seed=seed,
        chart_points=pts,
        min_kept_sv=min_kept,
        max_dropped_sv=max_dropped,
    )


@dataclass(frozen=True)
class StratifiedMapContext:
    """A map f together with per-stratum constant-rank certificates.

    Immutable after construction; owner of induced-foliation queries.
    The two available leaf-tangent computations (ambient kernel
    intersection, pushed-forward chart kernel) are always cross-checked
    against each other.
    """

    f: SmoothMap
    prestratification: Prestratification
    ranks: dict[str, RankCertificate]

    @staticmethod
    def build(
        f: SmoothMap,
        prestratification: Prestratification,
        samples: int = 60,
        seed: int = 0,
    ) -> "StratifiedMapContext":
        if f.n != prestratification.ambient:
            raise ValueError("map and prestratification have different ambient dimensions")
        ranks = {
            s.name: validate_constant_rank(f, s, samples=samples, seed=seed)
            for s in prestratification.strata
        }
        return StratifiedMapContext(f=f, prestratification=prestratification, ranks=ranks)

    def stratum(self, name: str) -> Stratum:
        return self.prestratification.stratum(name)

    def rank(self, name: str) -> int:
        return self.ranks[name].rank

    def leaf_dim(self, name: str) -> int:
        s = self.stratum(name)
        return s.dim - self.rank(name)

    def leaf_tangent(self, stratum: Stratum | str, u) -> Subspace:
        """Tangent space of the induced-foliation leaf through psi(u).

        The constant-rank certificate pins the leaf dimension at
        d - rank, so both computations are rank-constrained (a
        tolerance-based cut degenerates arbitrarily close to a fault):

        (a) the d - rank directions of the stratum tangent space closest
            to ker df at the ambient point (principal vectors);
        (b) the kernel of d(f o psi) forced to corank d - rank, pushed
            forward through dpsi.

        The two routes are independent and must agree to 1e-6.
        """
        s = self.stratum(stratum) if isinstance(stratum, str) else stratum
        u = np.asarray(u, dtype=float)
        point, chart_jac = s.chart.value_and_jacobian(u)
        tangent = span_of(list(chart_jac.T), n=s.ambient, rtol=IMMERSION_RTOL)
        if tangent.dim != s.dim:
            raise ImmersionError(f"chart of {s.name!r} loses rank at {u.tolist()}")
        leaf_dim = s.dim - self.rank(s.name)
        if leaf_dim == 0:
            return Subspace.zero(s.ambient)
        _, f_jac = self.f.value_and_jacobian(point, check_domain=False)

        # (a) principal directions of the tangent space against ker df
        ker_ambient = kernel(f_jac)
        if ker_ambient.dim < leaf_dim:
            raise NumericalInconsistencyError(
                f"ker df at {point.tolist()} has dimension {ker_ambient.dim} < {leaf_dim}"
            )
        m = ker_ambient.basis.T @ tangent.basis
        _, _, vt = np.linalg.svd(m, full_matrices=True)
        ambient_route = Subspace(tangent.basis @ vt.T[:, :leaf_dim])

        # (b) corank-constrained chart kernel, pushed forward
        _, _, vt_c = np.linalg.svd(f_jac @ chart_jac, full_matrices=True)
        pushed = chart_jac @ vt_c.T[:, s.dim - leaf_dim :]
        chart_route = span_of(list(pushed.T), n=s.ambient)
        if chart_route.dim != leaf_dim:
            raise NumericalInconsistencyError(
                f"chart-kernel route on {s.name!r} at {u.tolist()} gives dimension "
                f"{chart_route.dim}, expected {leaf_dim}"
            )
        angle = grassmann_distance(ambient_route, chart_route)
        if angle > 1e-6:
            raise NumericalInconsistencyError(
                f"leaf tangent routes disagree on {s.name!r} at {u.tolist()} "
                f"(angle {angle:.2e})"
            )
        return ambient_route


# ---------------------------------------------------------------------------
# Approach plans and arcs


@dataclass(frozen=True)
class ApproachPlan:
    """How to march sample sequences toward an incidence point.

    ``ratio`` is the geometric step; arcs run u_i = u0 + ratio^i * dir
    for i = 1..terms over a direction set made of any explicit
    directions, the chart-coordinate axis directions, and seeded random
    unit directions, capped at ``total_directions``.
    """

    ratio: float = 0.7
    terms: int = 60
    explicit_directions: tuple[tuple[float, ...], ...] = ()
    total_directions: int = 8
    window: int = 5
    angle_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie strictly inside (0, 1)")
        if self.terms < self.window:
            raise ValueError("term count must be at least the Cauchy window")
        if self.window < 2:
            raise ValueError("window must be >= 2")

    def directions(self, dim: int) -> list[np.ndarray]:
        dirs = [np.asarray(d, dtype=float) for d in self.explicit_directions]
        for d in dirs:
            if d.shape != (dim,):
                raise ValueError(f"explicit direction {d.tolist()} is not {dim}-dimensional")
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = 1.0
            dirs.append(e.copy())
            dirs.append(-e)
        rng = rng_for(self.seed, "arc-directions")
        while len(dirs) < self.total_directions:
            v = rng.standard_normal(dim)
            dirs.append(v / np.linalg.norm(v))
        return [d / max(np.linalg.norm(d), 1e-300) for d in dirs[: max(self.total_directions, 1)]]


@dataclass(frozen=True)
class Arc:
    direction: tuple[float, ...]
    chart_points: np.ndarray  # (k, d)
    points: np.ndarray  # (k, n)


def approach_sequence(
    prestratification: Prestratification,
    stratum: Stratum | str,
    y,
    plan: ApproachPlan | None = None,
    seed: int = 0,
) -> list[Arc]:
    """Geometric arcs in ``stratum`` whose images converge to y.

    The base chart point u0 is located on the closure of the chart
    domain; every surviving arc has strictly decreasing distances to y
    ending below APPROACH_TOL.  Directions whose arcs leave the domain
    or fail to approach are dropped; losing all of them is an error.
    """
    s = prestratification.stratum(stratum) if isinstance(stratum, str) else stratum
    plan = plan or ApproachPlan()
    y = np.asarray(y, dtype=float)
    u0, dist = s.locate(y, closure=True, seed=seed)
    if dist > 1e-7:
        raise IncidenceError(
            f"{np.asarray(y).tolist()} is not on the closure of {s.name!r} (distance {dist:.2e})"
        )
    arcs: list[Arc] = []
    failures: list[str] = []
    powers = plan.ratio ** np.arange(1, plan.terms + 1)
    for dvec in plan.directions(s.dim):
        chart_pts = u0[None, :] + powers[:, None] * dvec[None, :]
        inside = s.chart.in_domain(chart_pts)
        kept = chart_pts[inside]
        if len(kept) < max(plan.window, 2):
            failures.append(f"direction {np.round(dvec, 6).tolist()}: leaves the domain")
            continue
        pts = s.chart(kept)
        dists = np.linalg.norm(pts - y, axis=1)
        if not (np.all(np.diff(dists) < 0.0) and dists[-1] < APPROACH_TOL):
            failures.append(
                f"direction {np.round(dvec, 6).tolist()}: does not approach y "
                f"(final distance {dists[-1]:.2e})"
            )
            continue
        arcs.append(Arc(direction=tuple(dvec), chart_points=kept, points=pts))
    if not arcs:
        raise IncidenceError(
            f"no approach arc toward {y.tolist()} on {s.name!r}: " + "; ".join(failures)
        )
    return arcs


# ---------------------------------------------------------------------------
# Prestratification validation


@dataclass(frozen=True)
class FrontierProbe:
    stratum: str
    status: str  # 'satisfied' | 'violated' | 'undetermined'
    detail: str


@dataclass(frozen=True)
class PrestratificationReport:
    valid: bool
    samples: int
    seed: int
    immersion_ok: tuple[str, ...]
    incidences_confirmed: int
    frontier: tuple[FrontierProbe, ...]
    frontier_status: str

    def frontier_for(self, name: str) -> str:
        for probe in self.frontier:
            if probe.stratum == name:
                return probe.status
        raise KeyError(name)


def validate_prestratification(
    prestratification: Prestratification,
    samples: int = 40,
    seed: int = 0,
    frontier_probe: bool = True,
) -> PrestratificationReport:
    """Sampled validation: immersions, disjointness, incidences, frontier.

    Disjointness and incidence violations raise; the frontier condition
    is only probed (a prestratification need not satisfy it) and its
    status is reported as satisfied / violated / undetermined.
    """
    P = prestratification
    sampled: dict[str, np.ndarray] = {}
    for s in P.strata:
        rng = rng_for(seed, "validate", s.name)
        pts = s.sample_chart_points(samples, rng)
        sampled[s.name] = pts
        jacs = s.chart.jacobian(pts)
        svs = np.linalg.svd(jacs, compute_uv=False)
        ranks = np.array([_numerical_rank(sv) for sv in svs])
        if not np.all(ranks == s.dim):
            bad = int(np.argmax(ranks != s.dim))
            raise ImmersionError(
                f"chart of {s.name!r} has rank {ranks[bad]} < {s.dim} at {pts[bad].tolist()}"
            )

    # overlap: a sampled point of one stratum claimed by another
    for a in P.strata:
        images = a.chart(sampled[a.name])
        for b in P.strata:
            if b.name == a.name:
                continue
            for p in images[: min(len(images), 20)]:
                try:
                    _, dist = b.locate(p, closure=False, seed=seed)
                except LocateError:
                    continue
                if dist < ON_STRATUM_TOL:
                    raise OverlapError(
                        f"point {p.tolist()} of stratum {a.name!r} also lies on {b.name!r}"
                    )

    confirmed = 0
    for inc in P.incidences:
        y_stratum = P.stratum(inc.y)
        _, dist = y_stratum.locate(np.asarray(inc.point), closure=False, seed=seed)
        if dist > ON_STRATUM_TOL:
            raise IncidenceError(
                f"declared incidence point {list(inc.point)} is not on {inc.y!r} "
                f"(distance {dist:.2e})"
            )
        approach_sequence(P, inc.x, inc.point, seed=seed)  # raises if unreachable
        confirmed += 1

    probes: list[FrontierProbe] = []
    if frontier_probe:
        for s in P.strata:
            probes.append(_probe_frontier(P, s, sampled[s.name], seed))
    statuses = {p.status for p in probes}
    if "violated" in statuses:
        frontier_status = "violated"
    elif "satisfied" in statuses:
        frontier_status = "satisfied"
    else:
        frontier_status = "undetermined"
    return PrestratificationReport(
        valid=True,
        samples=samples,
        seed=seed,
        immersion_ok=tuple(s.name for s in P.strata),
        incidences_confirmed=confirmed,
        frontier=tuple(probes),
        frontier_status=frontier_status,
    )


def _probe_frontier(
    P: Prestratification, s: Stratum, interior: np.ndarray, seed: int
) -> FrontierProbe:
    """Walk interior samples to the predicate boundary and match the
    resulting frontier points against the other strata.

    The probe only decides coverage: every reachable frontier point must
    lie on some other stratum.  A stratum without domain predicates has
    no boundary to walk toward and comes out undetermined.
    """
    if not s.chart.domain:
        return FrontierProbe(s.name, "undetermined", "no domain predicates to probe")
    pred_maps = [
        SmoothMap(n=s.dim, components=(pred,)) for pred in s.chart.domain
    ]
    candidates: list[np.ndarray] = []
    for pred in pred_maps:
        for u in interior[:8]:
            hit = _walk_to_boundary(pred, u)
            if hit is not None:
                candidates.append(hit)
    if not candidates:
        return FrontierProbe(s.name, "undetermined", "no reachable predicate boundary")
    claimants: set[str] = set()
    for u_star in candidates:
        p_star = np.asarray(s.chart(u_star, check_domain=False), dtype=float)
        claimed = None
        for other in P.strata:
            if other.name == s.name:
                continue
            try:
                _, dist = other.locate(p_star, closure=False, seed=seed)
            except LocateError:
                continue
            if dist < 1e-6:
                claimed = other.name
                break
        if claimed is None:
            return FrontierProbe(
                s.name,
                "violated",
                f"frontier point {np.round(p_star, 9).tolist()} lies on no other stratum",
            )
        claimants.add(claimed)
    return FrontierProbe(
        s.name, "satisfied", f"frontier samples matched by {sorted(claimants)}"
    )


def _walk_to_boundary(pred: SmoothMap, u: np.ndarray, t_max: float = 8.0) -> np.ndarray | None:
    """March from an interior point against the predicate gradient until
    the predicate crosses zero; bisect the crossing."""
    val, jac = pred.value_and_jacobian(u)
    grad = jac[0]
    norm = np.linalg.norm(grad)
    if norm < 1e-12:
        return None
    direction = -grad / norm
    lo, hi = 0.0, None
    t = min(1.0, float(val[0]) / norm + 1e-3)
    while t <= t_max:
        if pred(u + t * direction)[0] <= 0.0:
            hi = t
            break
        lo = t
        t *= 2.0
    if hi is None:
        return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if pred(u + mid * direction)[0] > 0.0:
            lo = mid
        else:
            hi = mid
    # return the inside endpoint: the chart stays evaluable there and the
    # bracket is far tighter than any matching tolerance downstream
    return u + lo * direction
