"""Explicit constructions: smooth step, rank-drop maps, destabilizers,
and the test-submanifold witness for a foliated fault.

These are the working parts behind the instability experiments: a
bijective self-map of R^n whose rank drops to r at exactly one point, a
complement subspace that is transverse to a leaf but not to a limit of
leaves, a sequence of maps converging to a transverse base map while
each member is non-transverse at a fault sample, and a sampled sheet
that is transverse to the base leaf yet tangent to the approaching
foliation along an arc.

Each construction verifies its own defining identities numerically
after building; a failed verification is an error, never a silent
degradation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dsl import Add, Call, Expr, Mul, Num, SmoothMap, Sub, Var, _bump_value_and_slope
from .grassmann import Subspace, grassmann_distance, span_of, subspace_sum
from .regularity import FaultWitness, TransversalityResult, transverse_at
from .seeds import rng_for
from .strata import StratifiedMapContext

__all__ = [
    "ConstructionError",
    "bump",
    "bump_slope",
    "RankDropMap",
    "rank_drop_map",
    "frame_for_image",
    "choose_complement_H",
    "least_rotation",
    "PerturbedMap",
    "DestabilizerEntry",
    "DestabilizerSequence",
    "destabilizing_sequence",
    "SampledSheet",
    "tf_witness",
]


class ConstructionError(Exception):
    pass


# ---------------------------------------------------------------------------
# Smooth step


def bump(a):
    """Smooth step: 0 for a <= 0, 1 for a >= 1, strictly increasing between.

    Realized as phi(a) / (phi(a) + phi(1 - a)) with phi(t) = exp(-1/t)
    for t > 0 and 0 otherwise; symmetric about 1/2.  Scalar in, scalar
    out; arrays broadcast.
    """
    arr = np.asarray(a, dtype=float)
    val = _bump_value_and_slope(np.atleast_1d(arr))[0]
    return float(val[0]) if arr.ndim == 0 else val.reshape(arr.shape)


def bump_slope(a):
    """Derivative of :func:`bump`; vanishes outside (0, 1), positive inside."""
    arr = np.asarray(a, dtype=float)
    slope = _bump_value_and_slope(np.atleast_1d(arr))[1]
    return float(slope[0]) if arr.ndim == 0 else slope.reshape(arr.shape)


# ---------------------------------------------------------------------------
# Rank-drop map


def _nsum(terms: list[Expr]) -> Expr:
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


@dataclass(frozen=True)
class RankDropMap:
    """Bijective self-map of R^n: rank r at the center, rank n elsewhere,
    identity outside the closed ball of the given radius.

    In centered frame coordinates a = F^T (z - c) / R the map is
    (a_1, ..., a_r, a_{r+1} s(|a|^2), ..., a_n s(|a|^2)) with s the
    smooth step, mapped back by z = c + R F a'.  The frame's first r
    columns span the image of the differential at the center.
    """

    n: int
    r: int
    center: np.ndarray
    radius: float
    frame: np.ndarray = field(repr=False)
    map: SmoothMap = field(repr=False)

    def __call__(self, z, check_domain: bool = False) -> np.ndarray:
        return self.map(z, check_domain=False)

    def jacobian(self, z, check_domain: bool = False) -> np.ndarray:
        return self.map.jacobian(z, check_domain=False)

    def value_and_jacobian(self, z, check_domain: bool = False):
        return self.map.value_and_jacobian(z, check_domain=False)

    def jacobian_at_center(self) -> np.ndarray:
        d = np.zeros(self.n)
        d[: self.r] = 1.0
        return self.frame @ np.diag(d) @ self.frame.T

    def image_at_center(self) -> Subspace:
        return Subspace(self.frame[:, : self.r])

    def to_expression_source(self) -> str:
        return self.map.to_source()


def frame_for_image(image: Subspace) -> np.ndarray:
    """Orthogonal matrix whose leading columns span the given subspace."""
    comp = image.orthogonal_complement()
    return np.hstack([image.basis, comp.basis])


def rank_drop_map(
    n: int,
    r: int,
    center=None,
    radius: float = 1.0,
    frame: np.ndarray | None = None,
) -> RankDropMap:
    """Build the rank-drop self-map of R^n (needs n >= 2, 1 <= r < n)."""
    if n < 2:
        raise ValueError("ambient dimension must be at least 2")
    if not 1 <= r < n:
        raise ValueError("rank must satisfy 1 <= r < n")
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    if frame is None:
        frame = np.eye(n)
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (n, n) or np.max(np.abs(frame.T @ frame - np.eye(n))) > 1e-10:
        raise ValueError("frame must be an n x n orthogonal matrix")

    inv_r = 1.0 / radius
    coords: list[Expr] = []
    for j in range(n):
        terms = [
            Mul(Num(float(frame[k, j] * inv_r)), Sub(Var(k), Num(float(c[k]))))
            for k in range(n)
            if frame[k, j] != 0.0
        ]
        coords.append(_nsum(terms) if terms else Num(0.0))
    norm_sq = _nsum([Mul(a, a) for a in coords])
    step = Call("bump", (norm_sq,))
    images: list[Expr] = [
        coords[j] if j < r else Mul(coords[j], step) for j in range(n)
    ]
    comps: list[Expr] = []
    for i in range(n):
        terms: list[Expr] = [Num(float(c[i]))]
        for j in range(n):
            if frame[i, j] != 0.0:
                terms.append(Mul(Num(float(frame[i, j] * radius)), images[j]))
        comps.append(_nsum(terms))
    smap = SmoothMap(n=n, components=tuple(comps))

    built = RankDropMap(n=n, r=r, center=c, radius=radius, frame=frame, map=smap)
    _verify_rank_drop(built)
    return built


def _verify_rank_drop(m: RankDropMap) -> None:
    jac = m.jacobian(m.center)
    sv = np.linalg.svd(jac, compute_uv=False)
    if not (np.all(sv[: m.r] > 0.5) and np.all(sv[m.r :] < 1e-12)):
        raise ConstructionError(f"center rank is not {m.r}: singular values {sv}")
    outside = m.center + 1.0001 * m.radius * np.eye(m.n)[0]
    if np.max(np.abs(m(outside) - outside)) > 1e-12:
        raise ConstructionError("map is not the identity just outside the ball")


# ---------------------------------------------------------------------------
# Complement choice


def choose_complement_H(
    tau: Subspace, leaf_y: Subspace, v, n: int, tol: float = 1e-6
) -> Subspace:
    """Complement H of the base leaf whose sum with the limit subspace
    falls short of the ambient space.

    Defining properties (verified after building): H (+) leaf_y spans
    R^n with trivial intersection, while H + tau does not span.  Built
    directly: w is the unit component of v off tau; H is the orthogonal
    complement of span{w} (+) (leaf_y intersected with w-perp), so H is
    perpendicular to w along with tau, which caps the sum, while the
    leaf keeps its w-component and completes the direct sum.  A bounded
    seeded search backs up the construction if verification fails.
    """
    v = np.asarray(v, dtype=float)
    vnorm = np.linalg.norm(v)
    if vnorm < tol:
        raise ValueError("witness vector must be nonzero")
    v = v / vnorm
    if not leaf_y.contains(span_of([v], n=n), tol=1e-6).ok:
        raise ValueError("witness vector must lie in the base leaf tangent")
    resid = v - tau.project(v)
    rnorm = np.linalg.norm(resid)
    if rnorm < tol:
        raise ValueError(
            "witness vector lies in the limit subspace: no complement can "
            "separate them (there is no fault to exploit)"
        )
    w = resid / rnorm
    s = leaf_y.dim
    # leaf_y intersect w-perp, exactly: leaf directions orthogonal to w
    coeff = leaf_y.basis.T @ w
    if s:
        _, _, vt = np.linalg.svd(coeff[None, :], full_matrices=True)
        inner = leaf_y.basis @ vt.T[:, 1:]
    else:
        inner = np.zeros((n, 0))
    blocked = np.hstack([w[:, None], inner])
    u, _, _ = np.linalg.svd(blocked, full_matrices=True)
    h = Subspace(u[:, blocked.shape[1] :])
    if _complement_ok(h, tau, leaf_y, n):
        return h
    # degenerate geometry within tolerance: bounded seeded search
    rng = rng_for(0, "complement-search")
    for _ in range(200):
        cand = span_of(list(rng.standard_normal((n - s, n))), n=n)
        if cand.dim == n - s and _complement_ok(cand, tau, leaf_y, n):
            return cand
    raise ConstructionError(
        "no complement found: "
        f"dim(H+leaf)={subspace_sum(h, leaf_y).dim}, dim(H+tau)={subspace_sum(h, tau).dim}"
    )


def _complement_ok(h: Subspace, tau: Subspace, leaf_y: Subspace, n: int) -> bool:
    return (
        h.dim == n - leaf_y.dim
        and subspace_sum(h, leaf_y).dim == n
        and subspace_sum(h, tau).dim < n
    )


# ---------------------------------------------------------------------------
# Destabilizer


def least_rotation(w_from: np.ndarray, w_to: np.ndarray) -> np.ndarray:
    """Rotation of R^n carrying one unit vector to another, acting only
    in their common plane."""
    n = w_from.size
    c = float(np.dot(w_from, w_to))
    if c > 1.0 - 1e-14:
        return np.eye(n)
    perp = w_to - c * w_from
    pn = np.linalg.norm(perp)
    if pn < 1e-14:  # antipodal: rotate through an arbitrary companion plane
        perp = np.eye(n)[int(np.argmin(np.abs(w_from)))] - w_from * w_from[
            int(np.argmin(np.abs(w_from)))
        ]
        pn = np.linalg.norm(perp)
    u2 = perp / pn
    s = float(np.sqrt(max(0.0, 1.0 - c * c)))
    u1 = w_from
    return (
        np.eye(n)
        + (c - 1.0) * (np.outer(u1, u1) + np.outer(u2, u2))
        + s * (np.outer(u2, u1) - np.outer(u1, u2))
    )


class PerturbedMap:
    """Numeric map g_i: the base map plus a localized correction that
    moves the center value to a fault sample and rotates the center
    differential image.

    g_i(z) = g(z) + cut(|z-y|/rho) * [(x_i - g(y)) + (R - I) Dg_y (z-y)]
    with cut a smooth cutoff that is 1 near 0 and 0 beyond rho.
    """

    def __init__(self, base, y: np.ndarray, radius: float, shift: np.ndarray, rot: np.ndarray):
        self.base = base
        self.y = np.asarray(y, dtype=float)
        self.radius = float(radius)
        self.shift = np.asarray(shift, dtype=float)
        self.rot = np.asarray(rot, dtype=float)
        self.n = self.y.size
        self.m = self.n
        self._dgy = np.asarray(base.jacobian(self.y), dtype=float)
        self._lin = (self.rot - np.eye(self.n)) @ self._dgy

    def _cut(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # 1 for t <= 1/2, 0 for t >= 1
        val, slope = _bump_value_and_slope(2.0 * (1.0 - t))
        return val, -2.0 * slope

    def correction(self, z) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(z, dtype=float))
        d = pts - self.y
        t = np.linalg.norm(d, axis=1) / self.radius
        beta, _ = self._cut(t)
        return beta[:, None] * (self.shift + d @ self._lin.T)

    def __call__(self, z, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(z, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        out = self.base(pts, check_domain=False) + self.correction(pts)
        return out[0] if single else out

    def jacobian(self, z, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(z, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        base_jac = self.base.jacobian(pts, check_domain=False)
        if base_jac.ndim == 2:
            base_jac = base_jac[None, :, :]
        d = pts - self.y
        norms = np.linalg.norm(d, axis=1)
        t = norms / self.radius
        beta, dbeta = self._cut(t)
        inner = self.shift + d @ self._lin.T
        grad_t = np.zeros_like(d)
        pos = norms > 1e-300
        grad_t[pos] = d[pos] / (norms[pos, None] * self.radius)
        jac = (
            base_jac
            + beta[:, None, None] * self._lin[None, :, :]
            + (dbeta[:, None] * inner)[:, :, None] * grad_t[:, None, :]
        )
        return jac[0] if single else jac


@dataclass(frozen=True)
class DestabilizerEntry:
    index: int
    point: np.ndarray  # x_i, the fault sample hit by the center
    leaf: Subspace  # leaf tangent of the approaching stratum at x_i
    h_i: Subspace  # rotated complement, non-spanning with the leaf
    map: PerturbedMap
    c1_distance: float
    transversality: TransversalityResult  # of (h_i, leaf): must be non-transverse


@dataclass(frozen=True)
class DestabilizerSequence:
    base: RankDropMap
    y: np.ndarray
    radius: float
    entries: tuple[DestabilizerEntry, ...]


def destabilizing_sequence(
    base: RankDropMap,
    witness: FaultWitness,
    radius: float = 1.0,
    count: int = 20,
    seed: int = 0,
    c1_samples: int = 10_000,
) -> DestabilizerSequence:
    """Maps g_i converging to the base in sampled C^1 distance, each
    non-transverse to the approaching foliation at a fault sample.

    The i-th map sends the fault point to the i-th arc sample x_i and
    rotates the center image onto a complement H_i that fails to span
    with the leaf at x_i (verified per entry).  The C^1 distance to the
    base on the localization ball is measured as a sampled sup and must
    decrease strictly along the sequence.
    """
    y = np.asarray(witness.point, dtype=float)
    n = y.size
    arc = witness.arc
    if len(arc.points) < count:
        raise ValueError(f"witness arc has only {len(arc.points)} samples, need {count}")
    h = base.image_at_center()
    v = np.asarray(witness.vector, dtype=float)
    resid = v - witness.limit.project(v)
    rnorm = np.linalg.norm(resid)
    if rnorm < 1e-9:
        raise ConstructionError("witness vector does not leave the limit subspace")
    w = resid / rnorm
    if np.max(np.abs(h.basis.T @ w)) > 1e-9:
        raise ConstructionError("base image is not orthogonal to the separating vector")

    rng = rng_for(seed, "c1-samples")
    ball = y + radius * rng.uniform(-1.0, 1.0, size=(c1_samples, n))
    entries: list[DestabilizerEntry] = []
    base_vals = base(ball)
    base_jacs = base.jacobian(ball)
    for i in range(count):
        x_i = np.asarray(arc.points[i], dtype=float)
        if np.linalg.norm(x_i - y) < 1e-12:
            raise ValueError(f"arc sample {i} coincides with the fault point")
        leaf = arc.tangents[i]
        w_i_raw = w - leaf.project(w)
        w_i_norm = np.linalg.norm(w_i_raw)
        if w_i_norm < 0.1:
            raise ConstructionError(
                f"separating vector nearly lies in the leaf at sample {i}; "
                "the fault geometry is too degenerate for the rotation construction"
            )
        w_i = w_i_raw / w_i_norm
        rot = least_rotation(w, w_i)
        h_i = Subspace(rot @ h.basis)
        res = transverse_at(h_i, leaf, n)
        if res.transverse:
            h_i, res = _search_nonspanning(h_i, leaf, n, seed, i)
        gmap = PerturbedMap(base, y, radius, x_i - base(y), rot)
        # center value and center image must land exactly on the fault data
        if np.linalg.norm(gmap(y) - x_i) > 1e-10:
            raise ConstructionError(f"g_{i} misses its fault sample")
        img = span_of(list((rot @ base.jacobian_at_center()).T), n=n)
        if grassmann_distance(img, h_i) > 1e-8:
            raise ConstructionError(f"center image of g_{i} is not H_{i}")
        delta_vals = gmap(ball) - base_vals
        delta_jacs = gmap.jacobian(ball) - base_jacs
        sup_val = float(np.max(np.linalg.norm(delta_vals, axis=1)))
        sup_jac = float(np.max(np.linalg.svd(delta_jacs, compute_uv=False)[:, 0]))
        entries.append(
            DestabilizerEntry(
                index=i + 1,
                point=x_i,
                leaf=leaf,
                h_i=h_i,
                map=gmap,
                c1_distance=sup_val + sup_jac,
                transversality=res,
            )
        )
    dists = [e.c1_distance for e in entries]
    if not all(b < a for a, b in zip(dists, dists[1:])):
        raise ConstructionError("sampled C^1 distances are not strictly decreasing")
    return DestabilizerSequence(base=base, y=y, radius=radius, entries=tuple(entries))


def _search_nonspanning(
    h_i: Subspace, leaf: Subspace, n: int, seed: int, index: int
) -> tuple[Subspace, TransversalityResult]:
    rng = rng_for(seed, "h-search", str(index))
    for _ in range(100):
        jitter = 1e-3 * rng.standard_normal((n, h_i.dim))
        cand = span_of(list((h_i.basis + jitter).T), n=n)
        if cand.dim != h_i.dim:
            continue
        res = transverse_at(cand, leaf, n)
        if not res.transverse:
            return cand, res
    raise ConstructionError(
        f"could not find a non-spanning complement at arc sample {index}"
    )


# ---------------------------------------------------------------------------
# Test-submanifold witness sheet


@dataclass(frozen=True)
class SampledSheet:
    """Codimension-one sheet swept along an arc: at each arc sample a
    plane of dimension n-2 spans the directions that stay inside the
    approaching foliation's normal slice, extended by reflection through
    the terminal normal hyperplane.

    The sheet is a sampled object (frames at discrete arc parameters
    with nearest-patch projection); it serializes to frame lists rather
    than expression text.
    """

    center: np.ndarray
    center_tangent: Subspace
    centers: np.ndarray = field(repr=False)  # (K, n) patch base points
    frames: np.ndarray = field(repr=False)  # (K, n, n-2) plane directions
    arc_dirs: np.ndarray = field(repr=False)  # (K, n) unit arc tangents
    ts: np.ndarray = field(repr=False)  # (K,) signed arc parameters
    extent: float
    containment_angles: np.ndarray = field(repr=False)  # per positive sample

    @property
    def n(self) -> int:
        return self.center.size

    def tangent_at_center(self) -> Subspace:
        return self.center_tangent

    def patch_tangent(self, k: int) -> Subspace:
        return span_of(
            list(self.frames[k].T) + [self.arc_dirs[k]], n=self.n
        )

    def project(self, points: np.ndarray) -> tuple[np.ndarray, list[Subspace]]:
        pts = np.atleast_2d(points)
        delta = pts[:, None, :] - self.centers[None, :, :]  # (P, K, n)
        coords = np.einsum("pkn,knq->pkq", delta, self.frames)
        coords = np.clip(coords, -self.extent, self.extent)
        q = self.centers[None, :, :] + np.einsum("pkq,knq->pkn", coords, self.frames)
        dists = np.linalg.norm(pts[:, None, :] - q, axis=2)
        best = np.argmin(dists, axis=1)
        out = q[np.arange(len(pts)), best]
        tangents = [self.patch_tangent(int(k)) for k in best]
        return out, tangents

    def to_json(self) -> dict:
        return {
            "center": self.center.tolist(),
            "center_tangent": self.center_tangent.to_json(),
            "ts": self.ts.tolist(),
            "centers": self.centers.tolist(),
            "frames": [f.T.tolist() for f in self.frames],
            "arc_dirs": self.arc_dirs.tolist(),
            "extent": self.extent,
        }


def tf_witness(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    arc: SmoothMap,
    v,
    t0: float = 0.05,
    ratio: float = 0.5,
    count: int = 14,
    extent: float = 0.35,
    tol: float = 1e-6,
) -> SampledSheet:
    """Sheet transverse to the base leaf at the point but tangent to the
    approaching foliation along the arc.

    ``arc`` is a chart curve t -> chart of X, with images converging to
    the point as t -> 0+ and leaf tangents settling to a limit that
    misses ``v`` (the fault data).  At each sampled t the sheet's plane
    is assembled inside the normal slice of the arc: the part of the
    leaf tangent lying in the slice, completed by the directions
    orthogonal to both that part and the projected witness vector.
    Frames are carried along the arc by projection and the sheet is
    extended by reflection through the terminal normal hyperplane.
    """
    sx = ctx.stratum(x)
    sy = ctx.stratum(y)
    n = ctx.prestratification.ambient
    center = np.asarray(point, dtype=float)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    uy, _ = sy.locate(center, closure=False)
    leaf_y = ctx.leaf_tangent(sy, uy)
    if not leaf_y.contains(span_of([v], n=n), tol=1e-6).ok:
        raise ConstructionError("witness vector is not tangent to the base leaf")
    if arc.n != 1 or arc.m != sx.dim:
        raise ConstructionError("arc must be a curve into the chart of the approaching stratum")

    ts = t0 * ratio ** np.arange(count)
    leafs: list[Subspace] = []
    p_dims: list[int] = []
    centers: list[np.ndarray] = []
    arc_dirs: list[np.ndarray] = []
    sigma_bases: list[np.ndarray] = []
    for k, t in enumerate(ts):
        u, du = arc.value_and_jacobian(np.array([t]))
        if not sx.chart.in_domain(u):
            raise ConstructionError(f"arc leaves the chart domain at t={t}")
        alpha, chart_jac = sx.chart.value_and_jacobian(u)
        vel = chart_jac @ du[:, 0]
        speed = np.linalg.norm(vel)
        if speed < 1e-14:
            raise ConstructionError(f"arc velocity vanishes at t={t}")
        a_hat = vel / speed
        leaf = ctx.leaf_tangent(sx, u)
        leafs.append(leaf)
        # P_t: the part of the leaf tangent inside the normal slice of the arc
        align = a_hat @ leaf.basis
        if leaf.dim and np.max(np.abs(align)) > 1e-8:
            _, _, vt = np.linalg.svd(align[None, :], full_matrices=True)
            p_basis = leaf.basis @ vt.T[:, 1:]
        else:
            p_basis = leaf.basis.copy()
        p_dims.append(p_basis.shape[1])
        if p_dims[0] != p_dims[-1]:
            raise ConstructionError(
                f"slice dimension jumps from {p_dims[0]} to {p_dims[-1]} at t={t}"
            )
        v_t = v - np.dot(v, a_hat) * a_hat
        vt_norm = np.linalg.norm(v_t)
        if vt_norm < 1e-10:
            raise ConstructionError(
                f"witness vector is swallowed by the arc direction at t={t}"
            )
        v_t = v_t / vt_norm
        # sigma(t): P_t plus the complement of P_t (+) <v_t> inside the slice
        blocked = np.hstack([a_hat[:, None], p_basis, v_t[:, None]])
        u_full, _, _ = np.linalg.svd(blocked, full_matrices=True)
        comp = u_full[:, blocked.shape[1] :]
        sigma = np.hstack([p_basis, comp])
        if sigma.shape[1] != n - 2:
            raise ConstructionError(
                f"sheet plane at t={t} has dimension {sigma.shape[1]}, expected {n - 2}"
            )
        centers.append(np.asarray(alpha, dtype=float))
        arc_dirs.append(a_hat)
        sigma_bases.append(sigma)

    # frame continuity: carry the previous frame onto each new plane
    frames = [sigma_bases[0]]
    for sigma in sigma_bases[1:]:
        m = sigma.T @ frames[-1]
        uu, _, vvt = np.linalg.svd(m)
        frames.append(sigma @ (uu @ vvt))

    # the limit of the leaf tangents must miss v (the fault hypothesis)
    tau = leafs[-1]
    if np.linalg.norm(v - tau.project(v)) < 1e-3:
        raise ConstructionError(
            "witness vector is captured by the limiting leaf tangent; "
            "no fault to exploit"
        )

    containment = np.array(
        [
            span_of(list(frames[k].T) + [arc_dirs[k]], n=n)
            .contains(leafs[k], tol=np.pi)
            .worst_angle
            for k in range(count)
        ]
    )
    if np.max(containment) > tol:
        raise ConstructionError(
            f"leaf tangents escape the sheet (worst angle {np.max(containment):.2e}); "
            "the arc does not hug the foliation"
        )

    # reflect through the terminal normal hyperplane to cross the point
    a0 = arc_dirs[-1]
    refl = np.eye(n) - 2.0 * np.outer(a0, a0)
    mir_centers = center + (np.array(centers) - center) @ refl.T
    mir_frames = np.einsum("ij,kjq->kiq", refl, np.array(frames))
    mir_dirs = np.array(arc_dirs) @ refl.T

    all_ts = np.concatenate([ts, [0.0], -ts])
    all_centers = np.concatenate([np.array(centers), center[None, :], mir_centers])
    center_frame = frames[-1]
    all_frames = np.concatenate([np.array(frames), center_frame[None, :, :], mir_frames])
    all_dirs = np.concatenate([np.array(arc_dirs), a0[None, :], mir_dirs])
    order = np.argsort(-all_ts)
    center_tangent = span_of(list(center_frame.T) + [a0], n=n)

    sheet = SampledSheet(
        center=center,
        center_tangent=center_tangent,
        centers=all_centers[order],
        frames=all_frames[order],
        arc_dirs=all_dirs[order],
        ts=all_ts[order],
        extent=extent,
        containment_angles=containment,
    )
    pre = transverse_at(center_tangent, leaf_y, n)
    # a sliver of margin at the finite smallest t means the configuration
    # degenerates in the limit (the witness vector drifts into the arc
    # direction); demand honest separation, not a rank-test scrape
    if not pre.transverse or pre.margin < 1e-3:
        raise ConstructionError(
            "sheet is tangent to the base leaf at the point (defect "
            f"{pre.defect}, margin {pre.margin:.2e}); choose an arc whose "
            "terminal direction carries the leaf direction"
        )
    return sheet
