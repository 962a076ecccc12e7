"""Perturbation experiments on gallery scenes.

Two phenomena at desk scale:

* stability: over a regular foliated prestratification, a map that is
  transverse on a compact sample grid stays transverse under every
  sufficiently small C^1 perturbation; a calibrated size is found by
  bisection and certified by a seeded trial batch;
* instability: at a foliated fault, an explicitly constructed sequence
  of maps converges to a transverse base map in sampled C^1 distance
  while every member is non-transverse at a fault sample.

The non-genericity scenes run a third kind of trial: perturbed maps are
searched for an unavoidable tangency witness (a zero of the vertical
slope, or a fold point landing on the foliated circle).

Transversality on samples is decided with an explicit margin (the
smallest singular value of the stacked differential-plus-leaf matrix).
Exact rank at finitely many sample points would almost surely call
everything transverse; the margin is the honest sampled analogue.

All trials derive their randomness from a single seed and replay
bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constructions import (
    DestabilizerSequence,
    choose_complement_H,
    destabilizing_sequence,
    frame_for_image,
    rank_drop_map,
)
from .dsl import _bump_value_and_slope, parse_map
from .regularity import PreconditionError, Status, check_af_at, transverse_at
from .scene import Scene
from .seeds import rng_for
from .strata import StratifiedMapContext, Stratum

__all__ = [
    "PerturbationField",
    "PerturbedTrialMap",
    "StabilityReport",
    "InstabilityReport",
    "NongenericityReport",
    "grid_points",
    "seeded_full_rank_map",
    "make_perturbation",
    "transversality_margin",
    "stability_trial",
    "calibrate_epsilon",
    "stability_sweep",
    "sweep_csv_rows",
    "instability_demo",
    "nongenericity_demo",
]

MARGIN_TOL = 5e-2  # relative transversality margin threshold
PROXIMITY = 0.1  # images closer than this to a stratum are tested against it


def grid_points(box, dims) -> np.ndarray:
    axes = [np.linspace(lo, hi, k) for (lo, hi), k in zip(box, dims)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


# ---------------------------------------------------------------------------
# Maps and perturbation fields


class AffineMap:
    """Numeric affine map w -> A w + b (the seeded transverse base map)."""

    def __init__(self, matrix: np.ndarray, offset: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=float)
        self.offset = np.asarray(offset, dtype=float)
        self.m, self.n = self.matrix.shape[0], self.matrix.shape[1]

    def __call__(self, w, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        single = arr.ndim == 1
        out = np.atleast_2d(arr) @ self.matrix.T + self.offset
        return out[0] if single else out

    def jacobian(self, w, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        if arr.ndim == 1:
            return self.matrix.copy()
        return np.broadcast_to(self.matrix, (arr.shape[0],) + self.matrix.shape).copy()


def seeded_full_rank_map(n: int, seed: int, min_sv: float = 0.35) -> AffineMap:
    """Seeded affine self-map of R^n with all singular values >= min_sv;
    full ambient rank makes it transverse to every foliated stratum."""
    rng = rng_for(seed, "base-map")
    for _ in range(100):
        a = rng.standard_normal((n, n)) / np.sqrt(n)
        if np.linalg.svd(a, compute_uv=False)[-1] >= min_sv:
            return AffineMap(a, 0.05 * rng.standard_normal(n))
    raise RuntimeError("could not draw a well-conditioned base map")


class PerturbationField:
    """Finite sum of smooth localized humps with random offsets and
    linear parts; C^1 size is controlled by a single scale factor.

    On a circle domain the humps and linear parts are built from
    periodic quantities so the perturbed map stays a map of the circle.
    """

    def __init__(self, centers, radii, offsets, linears, topology: str = "line"):
        self.centers = np.asarray(centers, dtype=float)  # (B, m)
        self.radii = np.asarray(radii, dtype=float)  # (B,)
        self.offsets = np.asarray(offsets, dtype=float)  # (B, n)
        self.linears = np.asarray(linears, dtype=float)  # (B, n, m)
        self.topology = topology
        self.scale = 1.0
        self.m = self.centers.shape[1]
        self.n = self.offsets.shape[1]

    def _humps(self, w: np.ndarray):
        """Per-hump profile values and gradients at points (k, m)."""
        if self.topology == "circle":
            # squared chordal distance on the circle, periodic in w
            diff = w[:, None, 0] - self.centers[None, :, 0]
            d = (2.0 - 2.0 * np.cos(diff)) / self.radii[None, :] ** 2
            grad = (2.0 * np.sin(diff) / self.radii[None, :] ** 2)[:, :, None]
            disp = np.sin(diff)[:, :, None]  # periodic displacement
            disp_jac = np.cos(diff)[:, :, None, None]
        else:
            diff = w[:, None, :] - self.centers[None, :, :]
            d = np.sum(diff**2, axis=2) / self.radii[None, :] ** 2
            grad = 2.0 * diff / self.radii[None, :, None] ** 2
            disp = diff
            disp_jac = np.broadcast_to(
                np.eye(self.m), (w.shape[0], len(self.radii), self.m, self.m)
            )
        val, slope = _bump_value_and_slope(1.0 - d)
        dval = -slope[:, :, None] * grad  # (k, B, m)
        return val, dval, disp, disp_jac

    def __call__(self, w, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        val, _, disp, _ = self._humps(pts)
        payload = self.offsets[None, :, :] + np.einsum(
            "bnm,kbm->kbn", self.linears, disp
        )
        out = self.scale * np.sum(val[:, :, None] * payload, axis=1)
        return out[0] if single else out

    def jacobian(self, w, check_domain: bool = False) -> np.ndarray:
        arr = np.asarray(w, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        val, dval, disp, disp_jac = self._humps(pts)
        payload = self.offsets[None, :, :] + np.einsum(
            "bnm,kbm->kbn", self.linears, disp
        )
        # d/dw [val_b * payload_b] = payload_b (x) dval_b + val_b * L_b * d(disp_b)
        term1 = np.einsum("kbn,kbm->knm", payload, dval)
        term2 = np.einsum("kb,kbnm->knm", val, np.einsum("bnu,kbum->kbnm", self.linears, disp_jac))
        jac = self.scale * (term1 + term2)
        return jac[0] if single else jac

    def sampled_c1_norm(self, sample: np.ndarray) -> float:
        vals = self(sample)
        jacs = self.jacobian(sample)
        vnorm = float(np.max(np.linalg.norm(vals, axis=1)))
        jnorm = float(np.max(np.linalg.svd(jacs, compute_uv=False)[:, 0]))
        return vnorm + jnorm


class PerturbedTrialMap:
    """Base map plus perturbation field, exposing values and Jacobians."""

    def __init__(self, base, delta: PerturbationField):
        self.base = base
        self.delta = delta
        self.m = delta.m
        self.n = delta.n

    def __call__(self, w, check_domain: bool = False) -> np.ndarray:
        return self.base(w, check_domain=False) + self.delta(w)

    def jacobian(self, w, check_domain: bool = False) -> np.ndarray:
        return self.base.jacobian(w, check_domain=False) + self.delta.jacobian(w)


def make_perturbation(
    ambient: int,
    domain_dim: int,
    k_box,
    rng: np.random.Generator,
    bumps: int = 4,
    topology: str = "line",
) -> PerturbationField:
    box = np.asarray(k_box, dtype=float)
    widths = box[:, 1] - box[:, 0]
    centers = rng.uniform(box[:, 0], box[:, 1], size=(bumps, domain_dim))
    radii = rng.uniform(0.3, 1.0, size=bumps) * float(np.max(widths)) / 2.0
    offsets = rng.standard_normal((bumps, ambient))
    linears = rng.standard_normal((bumps, ambient, domain_dim))
    return PerturbationField(centers, radii, offsets, linears, topology=topology)


def _scaled_perturbation(
    ambient: int,
    domain_dim: int,
    k_box,
    eps: float,
    seed: int,
    trial: int,
    bumps: int,
    topology: str = "line",
) -> PerturbationField:
    rng = rng_for(seed, "perturbation", str(trial))
    delta = make_perturbation(ambient, domain_dim, k_box, rng, bumps=bumps, topology=topology)
    sample = rng_for(seed, "c1-sample").uniform(
        np.asarray(k_box)[:, 0], np.asarray(k_box)[:, 1], size=(1000, domain_dim)
    )
    raw = delta.sampled_c1_norm(sample)
    if raw <= 0.0:
        raise RuntimeError("degenerate perturbation draw")
    delta.scale = eps / raw
    return delta


# ---------------------------------------------------------------------------
# Sampled transversality


def _nearest_chart_points(stratum: Stratum, points: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched point location: chart coordinates and distances of the
    nearest stratum point for each query (closure sense)."""
    box = np.asarray(stratum.sample_box)
    k = len(points)
    starts: list[np.ndarray] = []
    if stratum.inverse_hint is not None:
        starts.append(np.asarray(stratum.inverse_hint(points, check_domain=False), dtype=float))
        starts.append(np.tile(box.mean(axis=1), (k, 1)))
    else:
        starts.append(np.tile(box.mean(axis=1), (k, 1)))
        rng = rng_for(seed, "nearest", stratum.name)
        for _ in range(3):
            starts.append(rng.uniform(box[:, 0], box[:, 1], size=(k, stratum.dim)))
    lo = box[:, 0] + 1e-12
    hi = box[:, 1] - 1e-12
    best_u = None
    best_d = np.full(k, np.inf)
    for u0 in starts:
        u = np.clip(u0, lo, hi)
        for _ in range(40):
            vals, jacs = stratum.chart.value_and_jacobian(u, check_domain=False)
            step = np.linalg.pinv(jacs) @ (points - vals)[:, :, None]
            u = np.clip(u + step[:, :, 0], lo, hi)
            if np.max(np.abs(step)) < 1e-12:
                break
        vals = stratum.chart(u, check_domain=False)
        margins = stratum.domain_margins(u)
        admissible = np.all(margins >= -1e-8, axis=1)
        d = np.where(admissible, np.linalg.norm(vals - points, axis=1), np.inf)
        if best_u is None:
            best_u, best_d = u, d
        else:
            better = d < best_d
            best_u[better] = u[better]
            best_d[better] = d[better]
    return best_u, best_d


def _leaf_bases_batch(ctx: StratifiedMapContext, stratum: Stratum, chart_points: np.ndarray) -> np.ndarray:
    """Leaf-tangent bases at many chart points in one batched pass.

    Chart-kernel route with the corank pinned by the stratum's rank
    certificate (the checkers run the slower cross-checked version; the
    experiment loop takes the certified shortcut).
    """
    leaf_dim = stratum.dim - ctx.rank(stratum.name)
    k = len(chart_points)
    if leaf_dim == 0:
        return np.zeros((k, stratum.ambient, 0))
    vals, cjacs = stratum.chart.value_and_jacobian(chart_points, check_domain=False)
    _, fjacs = ctx.f.value_and_jacobian(vals, check_domain=False)
    _, _, vt = np.linalg.svd(fjacs @ cjacs)
    kernel_cols = np.swapaxes(vt[:, stratum.dim - leaf_dim :, :], 1, 2)
    pushed = cjacs @ kernel_cols  # (k, n, leaf_dim)
    q, _ = np.linalg.qr(pushed)
    return q


def transversality_margin(
    ctx: StratifiedMapContext, trial_map, k_points: np.ndarray, seed: int,
    proximity: float = PROXIMITY,
) -> tuple[float, np.ndarray]:
    """Smallest transversality margin of the map over the sample grid.

    For each grid point whose image passes within ``proximity`` of a
    stratum, the stacked matrix [Dh | leaf basis] must have full row
    rank; the margin is the ratio of its n-th to its largest singular
    value (scale-invariant: exact rank at finitely many sample points is
    almost surely full, so nearness to degeneracy is what gets
    measured).  Points whose images stay clear of every stratum impose
    nothing.
    """
    n = ctx.prestratification.ambient
    images = trial_map(k_points)
    jacs = trial_map.jacobian(k_points)
    worst = np.inf
    worst_point = k_points[0]
    for stratum in ctx.prestratification.strata:
        u, d = _nearest_chart_points(stratum, images, seed)
        near = np.nonzero(d < proximity)[0]
        if near.size == 0:
            continue
        leaf_bases = _leaf_bases_batch(ctx, stratum, u[near])
        stacked = np.concatenate([jacs[near], leaf_bases], axis=2)
        sv = np.linalg.svd(stacked, compute_uv=False)
        if sv.shape[1] < n:
            margins = np.zeros(len(near))
        else:
            margins = np.where(sv[:, 0] > 0, sv[:, n - 1] / np.maximum(sv[:, 0], 1e-300), 0.0)
        idx = int(np.argmin(margins))
        if margins[idx] < worst:
            worst = float(margins[idx])
            worst_point = k_points[near[idx]]
    return (worst if np.isfinite(worst) else np.inf), worst_point


# ---------------------------------------------------------------------------
# Stability


@dataclass(frozen=True)
class StabilityReport:
    eps: float
    trials: int
    seed: int
    outcomes: tuple[bool, ...]
    min_margins: tuple[float, ...]
    fraction: float | None
    k_count: int
    margin_tol: float
    base_margin: float

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "trials": self.trials,
            "seed": self.seed,
            "fraction": self.fraction,
            "outcomes": [int(o) for o in self.outcomes],
            "min_margins": list(self.min_margins),
            "k_count": self.k_count,
            "margin_tol": self.margin_tol,
            "base_margin": self.base_margin,
        }

    def csv_rows(self) -> list[tuple]:
        return [
            (i, self.eps, int(ok)) for i, ok in enumerate(self.outcomes)
        ]


def stability_trial(
    ctx: StratifiedMapContext,
    base_map,
    k_points: np.ndarray,
    eps: float,
    trials: int,
    seed: int = 0,
    bumps: int = 4,
    margin_tol: float = MARGIN_TOL,
) -> StabilityReport:
    """Perturb a transverse base map ``trials`` times at C^1 size eps and
    count how many stay transverse on the grid."""
    base_margin, where = transversality_margin(ctx, base_map, k_points, seed)
    if base_margin < margin_tol:
        raise PreconditionError(
            f"base map is not transverse on the grid (margin {base_margin:.2e} "
            f"at {np.asarray(where).tolist()})"
        )
    if trials == 0:
        return StabilityReport(
            eps=eps, trials=0, seed=seed, outcomes=(), min_margins=(),
            fraction=None, k_count=len(k_points), margin_tol=margin_tol,
            base_margin=base_margin,
        )
    outcomes: list[bool] = []
    margins: list[float] = []
    m = k_points.shape[1]
    for t in range(trials):
        delta = _scaled_perturbation(ctx.prestratification.ambient, m,
                                     list(zip(k_points.min(0), k_points.max(0))),
                                     eps, seed, t, bumps)
        h = PerturbedTrialMap(base_map, delta)
        margin, _ = transversality_margin(ctx, h, k_points, seed)
        outcomes.append(margin >= margin_tol)
        margins.append(margin)
    return StabilityReport(
        eps=eps,
        trials=trials,
        seed=seed,
        outcomes=tuple(outcomes),
        min_margins=tuple(margins),
        fraction=sum(outcomes) / trials,
        k_count=len(k_points),
        margin_tol=margin_tol,
        base_margin=base_margin,
    )


def calibrate_epsilon(
    ctx: StratifiedMapContext,
    base_map,
    k_points: np.ndarray,
    seed: int = 0,
    probe_trials: int = 20,
    rounds: int = 10,
    bumps: int = 4,
    certify_trials: int = 0,
) -> float:
    """Bisect for a perturbation size with full persistence.

    Doubles upward until some probe trial fails (or a cap is hit), then
    bisects on the probe batch.  With ``certify_trials`` the returned
    size is additionally halved until every trial of the larger batch
    persists, so the certificate is not an artifact of a lucky probe.
    """
    base_margin, _ = transversality_margin(ctx, base_map, k_points, seed)
    lo = 0.0
    hi = max(base_margin / 4.0, 1e-4)
    m = k_points.shape[1]
    box = list(zip(k_points.min(0), k_points.max(0)))

    def all_pass(eps: float, trials: int) -> bool:
        # lazy variant of stability_trial: bail at the first failed trial
        for t in range(trials):
            delta = _scaled_perturbation(
                ctx.prestratification.ambient, m, box, eps, seed, t, bumps
            )
            margin, _ = transversality_margin(ctx, PerturbedTrialMap(base_map, delta), k_points, seed)
            if margin < MARGIN_TOL:
                return False
        return True

    for _ in range(12):
        if not all_pass(hi, probe_trials):
            break
        lo = hi
        hi *= 2.0
        if hi > 100.0 * base_margin:
            break
    for _ in range(rounds):
        mid = 0.5 * (lo + hi)
        if all_pass(mid, probe_trials):
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        raise RuntimeError("no positive perturbation size persisted; grid too hostile")
    if certify_trials:
        for _ in range(20):
            if all_pass(lo, certify_trials):
                return lo
            lo *= 0.5
        raise RuntimeError("calibration failed to certify a positive size")
    return lo


def stability_sweep(
    ctx: StratifiedMapContext,
    base_map,
    k_points: np.ndarray,
    eps_values,
    trials: int,
    seed: int = 0,
    bumps: int = 4,
) -> list[StabilityReport]:
    """Same trial seeds re-scaled across a sweep of perturbation sizes."""
    return [
        stability_trial(ctx, base_map, k_points, float(eps), trials, seed=seed, bumps=bumps)
        for eps in eps_values
    ]


def sweep_csv_rows(reports: list[StabilityReport]) -> list[tuple]:
    """Flattened (trial, epsilon, transverse) rows of a sweep, for plotting."""
    return [row for report in reports for row in report.csv_rows()]


# ---------------------------------------------------------------------------
# Instability


@dataclass(frozen=True)
class InstabilityReport:
    count: int
    seed: int
    base_transverse_margin: float
    rows: tuple[dict, ...]  # per i: index, c1_distance, defect, |x_i - y|
    sequence: DestabilizerSequence = field(repr=False)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "base_transverse_margin": self.base_transverse_margin,
            "rows": list(self.rows),
        }

    def csv_rows(self) -> list[tuple]:
        return [(r["index"], r["c1_distance"], 0) for r in self.rows]


def instability_demo(
    ctx: StratifiedMapContext,
    x: str,
    y: str,
    point,
    count: int = 20,
    radius: float = 1.0,
    seed: int = 0,
) -> InstabilityReport:
    """Destabilizer pipeline at a foliated fault.

    Requires a fails-with-witness verdict at the incidence; builds the
    complement, the rank-drop base map (transverse: complement plus the
    base leaf spans), and the converging sequence of non-transverse
    maps, then tabulates per-index certificates.
    """
    verdict = check_af_at(ctx, x, y, point, seed=seed)
    if verdict.status is not Status.FAILS:
        raise PreconditionError(
            f"no fault witness: condition af is {verdict.status.value} at {list(point)}"
        )
    w = verdict.witness
    n = ctx.prestratification.ambient
    h = choose_complement_H(w.limit, w.required, np.asarray(w.vector), n)
    base = rank_drop_map(
        n, n - w.required.dim, center=np.asarray(point, dtype=float),
        radius=radius, frame=frame_for_image(h),
    )
    base_res = transverse_at(base.image_at_center(), w.required, n)
    if not base_res.transverse:
        raise PreconditionError("complement construction lost transversality to the base leaf")
    seq = destabilizing_sequence(base, w, radius=radius, count=count, seed=seed)
    rows = tuple(
        {
            "index": e.index,
            "c1_distance": e.c1_distance,
            "defect": e.transversality.defect,
            "distance_to_point": float(np.linalg.norm(e.point - np.asarray(point))),
        }
        for e in seq.entries
    )
    return InstabilityReport(
        count=count,
        seed=seed,
        base_transverse_margin=base_res.margin,
        rows=rows,
        sequence=seq,
    )


# ---------------------------------------------------------------------------
# Non-genericity scenes


@dataclass(frozen=True)
class NongenericityReport:
    eps: float
    trials: int
    seed: int
    witnesses: tuple[dict, ...]  # one per trial that stayed non-transverse
    transverse_fraction: float

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "trials": self.trials,
            "seed": self.seed,
            "transverse_fraction": self.transverse_fraction,
            "witnesses": list(self.witnesses),
        }

    def csv_rows(self) -> list[tuple]:
        found = {w["trial"] for w in self.witnesses}
        return [(t, self.eps, int(t not in found)) for t in range(self.trials)]


def _slope_zero_witness(h, box, grid: int, wrap: bool) -> dict | None:
    """Sign change of the vertical slope along a 1-D domain."""
    ts = np.linspace(box[0][0], box[0][1], grid)[:, None]
    jac = h.jacobian(ts)
    slope = jac[:, 1, 0]
    values = slope if not wrap else np.append(slope, slope[0])
    for i in range(len(values) - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0 or a * b < 0.0:
            t = float(ts[i % len(ts), 0])
            return {"t": t, "slope": float(a)}
    return None


def _fold_on_circle_witness(h, box, grid_dims, seed: int) -> dict | None:
    """Newton solve for det Dh = 0 on the unit circle image."""

    def f_of(w: np.ndarray) -> np.ndarray:
        jac = h.jacobian(w)
        det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
        vals = h(w)
        return np.stack([det, np.sum(vals**2, axis=1) - 1.0], axis=1)

    seeds = grid_points(box, grid_dims)
    scores = np.linalg.norm(f_of(seeds), axis=1)
    order = np.argsort(scores)[:8]
    w = seeds[order]
    step_h = 1e-6
    for _ in range(60):
        f0 = f_of(w)
        jac_f = np.zeros((len(w), 2, 2))
        for j in range(2):
            dw = np.zeros(2)
            dw[j] = step_h
            jac_f[:, :, j] = (f_of(w + dw) - f_of(w - dw)) / (2 * step_h)
        try:
            step = np.linalg.solve(jac_f, f0[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            return None
        w = w - np.clip(step, -0.2, 0.2)
    residual = np.linalg.norm(f_of(w), axis=1)
    best = int(np.argmin(residual))
    if residual[best] < 1e-9:
        return {"w": w[best].tolist(), "residual": float(residual[best])}
    return None


def nongenericity_demo(scene: Scene, eps: float | None = None, trials: int | None = None,
                       seed: int = 0) -> NongenericityReport:
    """Perturb the scene's map and hunt for the unavoidable tangency.

    Every trial that yields a witness is confirmed non-transverse; the
    reported fraction of trials made transverse by perturbation is
    expected to be zero on these scenes.
    """
    exp = scene.experiments or {}
    if exp.get("mode") != "nongeneric":
        raise PreconditionError("scene has no non-genericity experiment block")
    g = parse_map(exp["g"], exp["g_dim"])
    box = exp["k_box"]
    topology = exp.get("domain_topology", "line")
    eps = float(exp.get("eps", 0.05)) if eps is None else eps
    trials = int(exp.get("trials", 50)) if trials is None else trials
    witnesses: list[dict] = []
    for t in range(trials):
        delta = _scaled_perturbation(
            scene.ambient, g.n, box, eps, seed, t,
            bumps=int(exp.get("bumps", 3)), topology="circle" if topology == "circle" else "line",
        )
        h = PerturbedTrialMap(g, delta)
        if topology in ("line", "circle"):
            w = _slope_zero_witness(h, box, int(exp["grid"][0]), wrap=(topology == "circle"))
        else:
            w = _fold_on_circle_witness(h, box, exp["grid"], seed)
        if w is not None:
            w["trial"] = t
            witnesses.append(w)
    fraction = (trials - len(witnesses)) / trials if trials else 0.0
    return NongenericityReport(
        eps=eps, trials=trials, seed=seed,
        witnesses=tuple(witnesses), transverse_fraction=fraction,
    )
