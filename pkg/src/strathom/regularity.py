"""Regularity checkers at declared incidence points.

Four conditions are decided for a stratum pair (X, Y) at a boundary
point y: Whitney "a", the foliated condition "af", the test-submanifold
condition "tf", and the retraction condition "afs".  Checkers sample
finitely many approach arcs (or shrinking radii), so a positive outcome
is always "holds-on-samples": failures are certificates, holds are
evidence.  Arcs whose tangent sequences do not settle in the
Grassmannian yield "inconclusive" rather than being silently dropped.

Every verdict carries the full numeric evidence trail (arcs, limit
subspace, residual angles, witness vector) so a stored fault can be
re-checked offline.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dsl import Add, Expr, Mul, Num, SmoothMap, Sub, Var
from .grassmann import (
    RTOL,
    Subspace,
    SubspaceSequence,
    grassmann_limit,
    span_of,
    subspace_sum,
)
from .seeds import rng_for
from .strata import (
    ApproachPlan,
    Arc,
    StratifiedMapContext,
    Stratum,
    approach_sequence,
)

__all__ = [
    "Status",
    "TransversalityResult",
    "transverse_at",
    "ArcEvidence",
    "FaultWitness",
    "RegularityVerdict",
    "PairVerdict",
    "RadialPlan",
    "PreconditionError",
    "AffineSurface",
    "ChartSurface",
    "orthogonal_retraction",
    "random_test_surface",
    "check_af_at",
    "check_whitney_a_at",
    "check_af_pair",
    "check_tf_at",
    "check_afs_at",
]


class PreconditionError(Exception):
    """The hypothesis of the condition being checked is not satisfied."""


class Status(str, enum.Enum):
    HOLDS = "holds-on-samples"
    FAILS = "fails-with-witness"
    INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# Transversality predicate


@dataclass(frozen=True)
class TransversalityResult:
    transverse: bool
    defect: int  # ambient dim minus dim of the sum
    margin: float  # smallest singular value of the stacked bases


def transverse_at(image: Subspace, leaf: Subspace, n: int) -> TransversalityResult:
    """Does image + leaf span R^n?  Defect counts the missing dimensions."""
    if image.n != n or leaf.n != n:
        raise ValueError("ambient dimension mismatch")
    stacked = np.hstack([image.basis, leaf.basis])
    if stacked.shape[1] < n:
        total = subspace_sum(image, leaf)
        return TransversalityResult(False, n - total.dim, 0.0)
    sv = np.linalg.svd(stacked, compute_uv=False)
    cut = max(RTOL * float(sv[0]), 1e-12) if sv.size else 0.0
    rank = int(np.count_nonzero(sv > cut))
    margin = float(sv[n - 1]) if sv.size >= n else 0.0
    return TransversalityResult(rank == n, n - rank, margin)


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class ArcEvidence:
    direction: tuple[float, ...]
    chart_points: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    tangents: tuple[Subspace, ...] = field(repr=False)
    converged: bool
    limit: Subspace | None
    residual: float
    history: tuple[float, ...] = field(repr=False)
    contains_required: bool | None
    worst_angle: float | None


@dataclass(frozen=True)
class FaultWitness:
    point: tuple[float, ...]
    vector: tuple[float, ...]  # unit vector of the required subspace missed by the limit
    angle: float
    limit: Subspace
    required: Subspace
    arc: ArcEvidence


@dataclass(frozen=True)
class RegularityVerdict:
    condition: str  # 'a' | 'af' | 'tf' | 'afs'
    x: str
    y: str
    point: tuple[float, ...]
    status: Status
    required: Subspace | None = None
    arcs: tuple[ArcEvidence, ...] = ()
    witness: FaultWitness | None = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PairVerdict:
    x: str
    y: str
    regular: bool
    vacuous: bool
    verdicts: tuple[RegularityVerdict, ...]
    note: str = ""


# ---------------------------------------------------------------------------
# Limit checkers: Whitney (a) and the foliated condition


def _limit_verdict(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    plan: ApproachPlan,
    condition: str,
    tangent_of,
    required: Subspace,
    seed: int,
) -> RegularityVerdict:
    """Shared arc pipeline: march arcs, take Grassmann limits, test
    containment of the required subspace in each limit."""
    arcs = approach_sequence(ctx.prestratification, x, point, plan, seed=seed)
    evidence: list[ArcEvidence] = []
    witness: FaultWitness | None = None
    for arc in arcs:
        tangents = tuple(tangent_of(arc.chart_points[i]) for i in range(len(arc.chart_points)))
        tags = tuple(str(np.round(u, 12).tolist()) for u in arc.chart_points)
        lim = grassmann_limit(SubspaceSequence(tangents, tags), plan.window, plan.angle_tol)
        if not lim.converged:
            evidence.append(
                ArcEvidence(
                    arc.direction, arc.chart_points, arc.points, tangents,
                    False, None, lim.residual, lim.history, None, None,
                )
            )
            continue
        containment = lim.limit.contains(required, plan.angle_tol)
        evidence.append(
            ArcEvidence(
                arc.direction, arc.chart_points, arc.points, tangents,
                True, lim.limit, lim.residual, lim.history,
                containment.ok, containment.worst_angle,
            )
        )
        if not containment.ok and witness is None:
            witness = FaultWitness(
                point=tuple(np.asarray(point, dtype=float)),
                vector=tuple(containment.worst_vector),
                angle=containment.worst_angle,
                limit=lim.limit,
                required=required,
                arc=evidence[-1],
            )
    if witness is not None:
        status = Status.FAILS
    elif any(not e.converged for e in evidence):
        status = Status.INCONCLUSIVE
    else:
        status = Status.HOLDS
    return RegularityVerdict(
        condition=condition,
        x=x,
        y=y,
        point=tuple(np.asarray(point, dtype=float)),
        status=status,
        required=required,
        arcs=tuple(evidence),
        witness=witness,
        detail={"arcs_total": len(evidence), "arcs_converged": sum(e.converged for e in evidence)},
    )


def _base_chart_point(ctx: StratifiedMapContext, y: str, point, seed: int) -> np.ndarray:
    stratum = ctx.stratum(y)
    u, dist = stratum.locate(np.asarray(point, dtype=float), closure=False, seed=seed)
    if dist > 1e-8:
        raise PreconditionError(
            f"point {np.asarray(point).tolist()} does not lie on stratum {y!r} "
            f"(distance {dist:.2e})"
        )
    return u


def check_af_at(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    plan: ApproachPlan | None = None,
    seed: int = 0,
) -> RegularityVerdict:
    """Foliated regularity of X over Y at a declared incidence point.

    Along every approach arc the leaf tangents of X must settle to a
    limit containing the leaf tangent of Y at the point.
    """
    plan = plan or ApproachPlan()
    uy = _base_chart_point(ctx, y, point, seed)
    required = ctx.leaf_tangent(y, uy)
    sx = ctx.stratum(x)
    return _limit_verdict(
        ctx, x, y, point, plan, "af",
        lambda u: ctx.leaf_tangent(sx, u), required, seed,
    )


def check_whitney_a_at(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    plan: ApproachPlan | None = None,
    seed: int = 0,
) -> RegularityVerdict:
    """Whitney condition: same pipeline on full stratum tangent spaces."""
    plan = plan or ApproachPlan()
    uy = _base_chart_point(ctx, y, point, seed)
    sy = ctx.stratum(y)
    sx = ctx.stratum(x)
    required = _stratum_tangent(sy, uy)
    return _limit_verdict(
        ctx, x, y, point, plan, "a",
        lambda u: _stratum_tangent(sx, u), required, seed,
    )


def _stratum_tangent(stratum: Stratum, u) -> Subspace:
    jac = stratum.chart.jacobian(u)
    return span_of(list(jac.T), n=stratum.ambient)


def check_af_pair(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    plan: ApproachPlan | None = None,
    seed: int = 0,
) -> PairVerdict:
    """Both directions of the pair over all declared incidence points."""
    verdicts: list[RegularityVerdict] = []
    for inc in ctx.prestratification.incidences:
        if {inc.x, inc.y} == {x, y} or (inc.x == inc.y and inc.x in (x, y)):
            verdicts.append(check_af_at(ctx, inc.x, inc.y, inc.point, plan, seed=seed))
    if not verdicts:
        return PairVerdict(
            x=x, y=y, regular=True, vacuous=True, verdicts=(),
            note="no incidences declared for this pair",
        )
    regular = all(v.status == Status.HOLDS for v in verdicts)
    return PairVerdict(x=x, y=y, regular=regular, vacuous=False, verdicts=tuple(verdicts))


# ---------------------------------------------------------------------------
# Test surfaces for the (t_f) checker


@dataclass(frozen=True)
class AffineSurface:
    """Affine test submanifold through a base point."""

    base: np.ndarray
    space: Subspace

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))

    @property
    def n(self) -> int:
        return self.space.n

    def tangent_at_center(self) -> Subspace:
        return self.space

    def project(self, points: np.ndarray) -> tuple[np.ndarray, list[Subspace]]:
        pts = np.atleast_2d(points)
        q = self.base + self.space.project(pts - self.base)
        return q, [self.space] * len(pts)


@dataclass(frozen=True)
class ChartSurface:
    """Chart-backed test submanifold with Gauss-Newton projection."""

    chart: SmoothMap
    center_preimage: np.ndarray
    box: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "center_preimage", np.asarray(self.center_preimage, dtype=float)
        )

    @property
    def n(self) -> int:
        return self.chart.m

    def tangent_at_center(self) -> Subspace:
        jac = self.chart.jacobian(self.center_preimage, check_domain=False)
        return span_of(list(jac.T), n=self.n)

    def project(self, points: np.ndarray) -> tuple[np.ndarray, list[Subspace]]:
        pts = np.atleast_2d(points)
        box = np.asarray(self.box)
        w = np.tile(self.center_preimage, (len(pts), 1))
        for _ in range(50):
            vals, jacs = self.chart.value_and_jacobian(w, check_domain=False)
            step = np.linalg.pinv(jacs) @ (pts - vals)[:, :, None]
            w = np.clip(w + step[:, :, 0], box[:, 0], box[:, 1])
        vals, jacs = self.chart.value_and_jacobian(w, check_domain=False)
        tangents = [span_of(list(j.T), n=self.n) for j in jacs]
        return vals, tangents


def random_test_surface(
    ctx: StratifiedMapContext, y: str, point, seed: int, dim: int | None = None
) -> AffineSurface:
    """Seeded affine submanifold through the point, transverse to the
    Y-leaf there (the hypothesis every tf test surface must satisfy)."""
    uy = _base_chart_point(ctx, y, point, seed)
    leaf = ctx.leaf_tangent(y, uy)
    n = ctx.prestratification.ambient
    want = dim if dim is not None else n - leaf.dim
    if want < n - leaf.dim:
        raise ValueError("surface dimension too small to be transverse to the leaf")
    rng = rng_for(seed, "test-surface", y)
    for _ in range(50):
        space = span_of(list(rng.standard_normal((want, n))), n=n)
        if space.dim != want:
            continue
        if transverse_at(space, leaf, n).transverse:
            return AffineSurface(base=np.asarray(point, dtype=float), space=space)
    raise PreconditionError("could not draw a transverse test surface")


# ---------------------------------------------------------------------------
# Radial sampling plans


@dataclass(frozen=True)
class RadialPlan:
    r0: float = 0.5
    ratio: float = 0.5
    count: int = 10
    samples: int = 200

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie strictly inside (0, 1)")
        if self.count < 1 or self.samples < 1:
            raise ValueError("count and samples must be positive")

    def radii(self) -> np.ndarray:
        return self.r0 * self.ratio ** np.arange(self.count)


def _samples_in_ball(
    stratum: Stratum, u0: np.ndarray, center: np.ndarray, radius: float,
    count: int, rng: np.random.Generator,
) -> np.ndarray:
    """Chart points of the stratum whose images lie within the ball."""
    d = stratum.dim
    draws = rng.uniform(-1.5, 1.5, size=(count * 6, d)) * radius + u0
    inside = stratum.chart.in_domain(draws)
    draws = draws[inside]
    if len(draws) == 0:
        return np.zeros((0, d))
    pts = stratum.chart(draws)
    near = np.linalg.norm(pts - center, axis=1) <= radius
    return draws[near][:count]


def _find_intersections(
    stratum: Stratum,
    surface,
    center: np.ndarray,
    radius: float,
    seeds_u: np.ndarray,
    tol: float = 1e-9,
    iters: int = 60,
):
    """Alternating projections from chart seeds onto surface-stratum
    intersection points inside the ball.

    Returns unique chart points, their images, and the matching surface
    tangents.  Seeds that stall at positive distance are discarded: they
    witness no intersection.
    """
    if len(seeds_u) == 0:
        return np.zeros((0, stratum.dim)), np.zeros((0, stratum.ambient)), []
    box = np.asarray(stratum.sample_box)
    lo, hi = box[:, 0] + 1e-12, box[:, 1] - 1e-12
    u = np.clip(seeds_u, lo, hi)
    for _ in range(iters):
        vals, jacs = stratum.chart.value_and_jacobian(u, check_domain=False)
        q, _ = surface.project(vals)
        step = np.linalg.pinv(jacs) @ (q - vals)[:, :, None]
        u = np.clip(u + step[:, :, 0], lo, hi)
    vals = stratum.chart(u, check_domain=False)
    q, _ = surface.project(vals)
    resid = np.linalg.norm(vals - q, axis=1)
    margins = stratum.domain_margins(u)
    # strict positivity only: intersection points may hug the domain
    # boundary arbitrarily closely (that is what faults look like)
    interior = np.all(margins > 0.0, axis=1) if margins.size else np.ones(len(u), bool)
    dist_center = np.linalg.norm(vals - center, axis=1)
    # the incidence point itself belongs to the base stratum, not to X;
    # solutions indistinguishable from it are boundary-limit artifacts,
    # not intersection points
    keep = (resid < tol) & interior & (dist_center <= radius) & (dist_center > 1e-7)
    u = u[keep]
    if len(u) == 0:
        return np.zeros((0, stratum.dim)), np.zeros((0, stratum.ambient)), []
    # collapse numerically identical solutions
    _, idx = np.unique(np.round(u, 7), axis=0, return_index=True)
    u = u[np.sort(idx)]
    vals = stratum.chart(u, check_domain=False)
    q, tangents = surface.project(vals)
    return u, vals, tangents


def check_tf_at(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    surface,
    plan: RadialPlan | None = None,
    seed: int = 0,
) -> RegularityVerdict:
    """Test-submanifold condition at shrinking radii.

    The surface must be transverse to the Y-leaf through the point (the
    hypothesis of the condition; violating it is an error, not a fault).
    At each radius, intersection points of the surface with X inside the
    ball are found and transversality to the X-leaves is tested there; a
    radius with no bad point certifies the condition at that scale,
    while a bad point at every radius is a fault with the witness
    sequence.
    """
    plan = plan or RadialPlan()
    n = ctx.prestratification.ambient
    center = np.asarray(point, dtype=float)
    uy = _base_chart_point(ctx, y, point, seed)
    leaf_y = ctx.leaf_tangent(y, uy)
    t_surface = surface.tangent_at_center()
    pre = transverse_at(t_surface, leaf_y, n)
    if not pre.transverse:
        raise PreconditionError(
            f"test submanifold is not transverse to the Y-leaf at {center.tolist()} "
            f"(defect {pre.defect})"
        )
    sx = ctx.stratum(x)
    u0, _ = sx.locate(center, closure=True, seed=seed)
    radii_detail: list[dict] = []
    witnesses: list[tuple[float, np.ndarray, int]] = []
    clean_radius: float | None = None
    for j, r in enumerate(plan.radii()):
        rng = rng_for(seed, "tf", x, y, str(j))
        seeds_u = _samples_in_ball(sx, u0, center, float(r), plan.samples, rng)
        u_hits, p_hits, tangents = _find_intersections(sx, surface, center, float(r), seeds_u)
        bad_point = None
        bad_defect = 0
        for u_hit, p_hit, t_s in zip(u_hits, p_hits, tangents):
            leaf_x = ctx.leaf_tangent(sx, u_hit)
            res = transverse_at(t_s, leaf_x, n)
            if not res.transverse:
                bad_point = p_hit
                bad_defect = res.defect
                break
        radii_detail.append(
            {
                "radius": float(r),
                "samples": int(len(seeds_u)),
                "intersections": int(len(u_hits)),
                "nontransverse": bad_point is not None,
            }
        )
        if bad_point is None:
            if clean_radius is None:
                clean_radius = float(r)
        else:
            witnesses.append((float(r), bad_point, bad_defect))
    if clean_radius is not None:
        status = Status.HOLDS
        witness = None
    else:
        status = Status.FAILS
        r_w, p_w, defect = witnesses[-1]
        witness = FaultWitness(
            point=tuple(p_w),
            vector=tuple(np.zeros(n)),
            angle=float("nan"),
            limit=Subspace.zero(n),
            required=leaf_y,
            arc=ArcEvidence(
                direction=(),
                chart_points=np.zeros((0, sx.dim)),
                points=np.array([w[1] for w in witnesses]),
                tangents=(),
                converged=True,
                limit=None,
                residual=0.0,
                history=(),
                contains_required=False,
                worst_angle=None,
            ),
        )
    return RegularityVerdict(
        condition="tf",
        x=x,
        y=y,
        point=tuple(center),
        status=status,
        required=leaf_y,
        witness=witness,
        detail={"radii": radii_detail, "clean_radius": clean_radius},
    )


# ---------------------------------------------------------------------------
# Retraction condition


def orthogonal_retraction(point, space: Subspace) -> SmoothMap:
    """Affine orthogonal projection onto point + space, as an expression map.

    The default local retraction onto a leaf: first-order model of the
    leaf through the point.
    """
    y = np.asarray(point, dtype=float)
    n = space.n
    proj = space.basis @ space.basis.T
    comps: list[Expr] = []
    for i in range(n):
        expr: Expr = Num(float(y[i]))
        for j in range(n):
            c = float(proj[i, j])
            if c == 0.0:
                continue
            expr = Add(expr, Mul(Num(c), Sub(Var(j), Num(float(y[j])))))
        comps.append(expr)
    return SmoothMap(n=n, components=tuple(comps))


def _sample_leaf_points(
    ctx: StratifiedMapContext, y: str, uy: np.ndarray, count: int, scale: float, seed: int
) -> np.ndarray:
    """Points on the actual leaf through psi(uy): stay on the stratum and
    on the fiber of f, nudged along the leaf-tangent directions."""
    sy = ctx.stratum(y)
    base_point = np.asarray(sy.chart(uy), dtype=float)
    leaf = ctx.leaf_tangent(y, uy)
    if leaf.dim == 0:
        return np.tile(base_point, (count, 1))
    rng = rng_for(seed, "leaf-samples", y)
    offsets = rng.standard_normal((count, leaf.dim))
    offsets *= scale / np.maximum(np.linalg.norm(offsets, axis=1, keepdims=True), 1e-300)
    targets = base_point + offsets @ leaf.basis.T
    f_ref = np.asarray(ctx.f(base_point, check_domain=False), dtype=float)
    kappa = 1.0e3
    u = np.tile(uy, (count, 1))
    for _ in range(60):
        vals, cjacs = sy.chart.value_and_jacobian(u, check_domain=False)
        fvals, fjacs = ctx.f.value_and_jacobian(vals, check_domain=False)
        res = np.concatenate([kappa * (fvals - f_ref), vals - targets], axis=1)
        jac = np.concatenate([kappa * (fjacs @ cjacs), cjacs], axis=1)
        step = np.linalg.pinv(jac) @ res[:, :, None]
        u = u - step[:, :, 0]
    pts = sy.chart(u, check_domain=False)
    fvals = ctx.f(pts, check_domain=False)
    ok = np.linalg.norm(fvals - f_ref, axis=1) < 1e-9
    return pts[ok]


def _validate_retraction(
    ctx: StratifiedMapContext, y: str, uy: np.ndarray, retraction: SmoothMap, seed: int
) -> None:
    sy = ctx.stratum(y)
    base_point = np.asarray(sy.chart(uy), dtype=float)
    n = retraction.n
    rng = rng_for(seed, "retraction", y)
    nearby = base_point + 0.3 * rng.standard_normal((12, n))
    once = retraction(nearby, check_domain=False)
    twice = retraction(once, check_domain=False)
    if np.max(np.linalg.norm(twice - once, axis=1)) > 1e-8:
        raise PreconditionError("retraction is not idempotent near the point")
    leaf_pts = _sample_leaf_points(ctx, y, uy, count=8, scale=1e-5, seed=seed)
    if len(leaf_pts):
        fixed = retraction(leaf_pts, check_domain=False)
        drift = np.max(np.linalg.norm(fixed - leaf_pts, axis=1))
        if drift > 1e-8:
            raise PreconditionError(
                f"retraction moves sampled leaf points by {drift:.2e} (> 1e-8)"
            )


def check_afs_at(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    retraction: SmoothMap | None = None,
    plan: RadialPlan | None = None,
    seed: int = 0,
) -> RegularityVerdict:
    """Retraction condition at shrinking radii.

    The retraction (default: orthogonal projection onto the affine
    tangent of the Y-leaf) restricted to X must be a submersion onto the
    leaf on every X-leaf near the point: the differential applied to the
    X-leaf tangents must keep full rank equal to the Y-leaf dimension.
    """
    plan = plan or RadialPlan()
    n = ctx.prestratification.ambient
    center = np.asarray(point, dtype=float)
    uy = _base_chart_point(ctx, y, point, seed)
    leaf_y = ctx.leaf_tangent(y, uy)
    s_req = leaf_y.dim
    if retraction is None:
        retraction = orthogonal_retraction(center, leaf_y)
    if retraction.n != n or retraction.m != n:
        raise PreconditionError("retraction must map the ambient space to itself")
    _validate_retraction(ctx, y, uy, retraction, seed)
    sx = ctx.stratum(x)
    u0, _ = sx.locate(center, closure=True, seed=seed)
    radii_detail: list[dict] = []
    witnesses: list[tuple[float, np.ndarray, int]] = []
    clean_radius: float | None = None
    for j, r in enumerate(plan.radii()):
        rng = rng_for(seed, "afs", x, y, str(j))
        samples_u = _samples_in_ball(sx, u0, center, float(r), plan.samples, rng)
        bad_point = None
        bad_rank = -1
        for u in samples_u:
            if s_req == 0:
                break  # rank-0 requirement is vacuous
            leaf_x = ctx.leaf_tangent(sx, u)
            p = np.asarray(sx.chart(u), dtype=float)
            jac = retraction.jacobian(p, check_domain=False)
            pushed = jac @ leaf_x.basis
            sv = np.linalg.svd(pushed, compute_uv=False) if pushed.size else np.zeros(0)
            cut = max(RTOL * float(sv[0]), 1e-12) if sv.size else 0.0
            rank = int(np.count_nonzero(sv > cut))
            if rank < s_req:
                bad_point = p
                bad_rank = rank
                break
        radii_detail.append(
            {
                "radius": float(r),
                "samples": int(len(samples_u)),
                "rank_drop": bad_point is not None,
            }
        )
        if bad_point is None:
            if clean_radius is None:
                clean_radius = float(r)
        else:
            witnesses.append((float(r), bad_point, bad_rank))
    if clean_radius is not None:
        status = Status.HOLDS
        witness = None
    else:
        status = Status.FAILS
        _, p_w, rank_w = witnesses[-1]
        witness = FaultWitness(
            point=tuple(p_w),
            vector=tuple(np.zeros(n)),
            angle=float("nan"),
            limit=Subspace.zero(n),
            required=leaf_y,
            arc=ArcEvidence(
                direction=(),
                chart_points=np.zeros((0, sx.dim)),
                points=np.array([w[1] for w in witnesses]),
                tangents=(),
                converged=True,
                limit=None,
                residual=0.0,
                history=(),
                contains_required=False,
                worst_angle=None,
            ),
        )
    return RegularityVerdict(
        condition="afs",
        x=x,
        y=y,
        point=tuple(center),
        status=status,
        required=leaf_y,
        witness=witness,
        detail={
            "radii": radii_detail,
            "clean_radius": clean_radius,
            "required_rank": s_req,
        },
    )
