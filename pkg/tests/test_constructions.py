import numpy as np
import pytest

from strathom.constructions import (
    ConstructionError,
    bump,
    bump_slope,
    choose_complement_H,
    destabilizing_sequence,
    frame_for_image,
    least_rotation,
    rank_drop_map,
    tf_witness,
)
from strathom.dsl import parse_map
from strathom.grassmann import Subspace, grassmann_distance, span_of, subspace_sum
from strathom.regularity import Status, check_af_at, transverse_at

ORIGIN = (0.0, 0.0, 0.0)


def span3(*vectors):
    return span_of(list(vectors), n=3)


@pytest.fixture(scope="module")
def shelf_fault(gallery_ctx):
    _, scene, ctx = gallery_ctx("parabola-shelf")
    verdict = check_af_at(ctx, "S1", "S2", ORIGIN, seed=0)
    assert verdict.status is Status.FAILS
    return scene, ctx, verdict.witness


class TestBump:
    def test_saturation(self):
        assert bump(-1.0) == 0.0
        assert bump(2.0) == 1.0
        assert bump(0.0) == 0.0
        assert bump(1.0) == 1.0

    def test_midpoint(self):
        assert bump(0.5) == pytest.approx(0.5)

    def test_positive_slope_inside(self):
        assert bump_slope(0.5) > 0
        # finite-difference oracle
        h = 1e-7
        fd = (bump(0.5 + h) - bump(0.5 - h)) / (2 * h)
        assert bump_slope(0.5) == pytest.approx(fd, rel=1e-6)

    def test_slope_vanishes_outside(self):
        assert bump_slope(-0.3) == 0.0
        assert bump_slope(1.7) == 0.0

    def test_monotone_on_a_grid(self):
        xs = np.linspace(-0.5, 1.5, 101)
        vals = bump(xs)
        assert np.all(np.diff(vals) >= 0)
        assert np.all((vals >= 0) & (vals <= 1))


class TestRankDropMap:
    def test_two_dimensional_normal_form(self):
        m = rank_drop_map(2, 1)
        assert m.jacobian(np.zeros(2)) == pytest.approx(np.diag([1.0, 0.0]))
        # identity outside the unit ball
        assert m([0.8, 0.8]) == pytest.approx([0.8, 0.8])
        assert m([2.0, -1.0]) == pytest.approx([2.0, -1.0])

    def test_rank_recovers_away_from_center(self):
        m = rank_drop_map(2, 1)
        sv = np.linalg.svd(m.jacobian([0.4, 0.35]), compute_uv=False)
        assert sv[-1] > 1e-12  # both directions survive

    @pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (3, 2), (5, 3)])
    def test_center_rank_with_clean_gap(self, n, r):
        m = rank_drop_map(n, r)
        sv = np.linalg.svd(m.jacobian(np.zeros(n)), compute_uv=False)
        assert np.all(sv[:r] > 0.9)
        assert np.all(sv[r:] < 1e-12)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            rank_drop_map(1, 1)
        with pytest.raises(ValueError):
            rank_drop_map(3, 3)
        with pytest.raises(ValueError):
            rank_drop_map(3, 0)

    def test_frame_steers_center_image(self):
        h = span3([0, 1, 0])
        m = rank_drop_map(3, 1, frame=frame_for_image(h))
        img = span_of(list(m.jacobian(np.zeros(3)).T), n=3)
        assert grassmann_distance(img, h) < 1e-12

    def test_off_center_and_scaled(self):
        c = np.array([1.0, -2.0])
        m = rank_drop_map(2, 1, center=c, radius=0.5)
        assert m.jacobian(c) == pytest.approx(np.diag([1.0, 0.0]))
        far = c + np.array([0.51, 0.0])
        assert m(far) == pytest.approx(far)

    def test_exports_to_expression_text(self):
        m = rank_drop_map(3, 2, center=[0.1, 0.0, -0.2], radius=0.7)
        reparsed = parse_map(m.to_expression_source(), 3)
        pts = np.array([[0.15, 0.1, -0.1], [0.9, 0.9, 0.9], [0.1, 0.0, -0.2]])
        assert np.allclose(reparsed(pts), m(pts), atol=1e-14)
        assert np.allclose(reparsed.jacobian(pts), m.jacobian(pts), atol=1e-12)

    def test_injectivity_on_seeded_pairs(self):
        m = rank_drop_map(2, 1)
        rng = np.random.default_rng(11)
        p = rng.uniform(-1.2, 1.2, size=(20_000, 2))
        q = rng.uniform(-1.2, 1.2, size=(20_000, 2))
        separated = np.linalg.norm(p - q, axis=1) > 1e-6
        images_apart = np.linalg.norm(m(p) - m(q), axis=1) > 1e-9
        assert np.all(images_apart[separated])

    def test_surjectivity_by_root_finding(self):
        m = rank_drop_map(2, 1)
        rng = np.random.default_rng(13)
        targets = rng.uniform(-0.9, 0.9, size=(50, 2))
        z = targets.copy()
        for _ in range(200):
            vals, jacs = m.value_and_jacobian(z)
            step = np.linalg.solve(jacs + 1e-12 * np.eye(2), (vals - targets)[:, :, None])
            z = z - np.clip(step[:, :, 0], -0.2, 0.2)
        assert np.max(np.linalg.norm(m(z) - targets, axis=1)) < 1e-9


class TestChooseComplement:
    def test_shelf_fault_configuration(self):
        leaf_y = span3([1, 0, 0], [0, 0, 1])
        tau = span3([1, 0, 0])
        h = choose_complement_H(tau, leaf_y, np.array([0.0, 0.0, 1.0]), 3)
        assert h.dim == 1
        assert subspace_sum(h, leaf_y).dim == 3
        assert subspace_sum(h, tau).dim == 2

    def test_plane_with_trivial_limit(self):
        leaf_y = span_of([[1, 0]], n=2)
        tau = Subspace.zero(2)
        h = choose_complement_H(tau, leaf_y, np.array([1.0, 0.0]), 2)
        assert h.dim == 1
        assert subspace_sum(h, leaf_y).dim == 2
        assert subspace_sum(h, tau).dim == 1  # falls short of the plane

    def test_no_fault_no_complement(self):
        leaf_y = span3([1, 0, 0])
        tau = span3([1, 0, 0], [0, 1, 0])  # contains the leaf
        with pytest.raises(ValueError, match="no fault"):
            choose_complement_H(tau, leaf_y, np.array([1.0, 0.0, 0.0]), 3)

    def test_witness_vector_must_be_in_leaf(self):
        with pytest.raises(ValueError, match="leaf"):
            choose_complement_H(span3([1, 0, 0]), span3([0, 1, 0]), np.array([0.0, 0.0, 1.0]), 3)

    def test_random_configurations_verify(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(3, 7))
            s = int(rng.integers(1, n))
            leaf = span_of(list(rng.standard_normal((s, n))), n=n)
            v = leaf.basis @ rng.standard_normal(s)
            v /= np.linalg.norm(v)
            kt = int(rng.integers(0, n - 1))
            tau = span_of(list(rng.standard_normal((kt, n))), n=n) if kt else Subspace.zero(n)
            if np.linalg.norm(v - tau.project(v)) < 1e-3:
                continue
            h = choose_complement_H(tau, leaf, v, n)
            assert h.dim == n - s
            assert subspace_sum(h, leaf).dim == n
            assert subspace_sum(h, tau).dim < n


class TestLeastRotation:
    def test_carries_vector(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.standard_normal(4)
            b = rng.standard_normal(4)
            a /= np.linalg.norm(a)
            b /= np.linalg.norm(b)
            rot = least_rotation(a, b)
            assert rot @ a == pytest.approx(b, abs=1e-12)
            assert rot.T @ rot == pytest.approx(np.eye(4), abs=1e-12)

    def test_identity_when_aligned(self):
        a = np.array([1.0, 0.0])
        assert least_rotation(a, a) == pytest.approx(np.eye(2))


class TestDestabilizer:
    def test_entries_certify_the_construction(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        h = choose_complement_H(witness.limit, witness.required, np.array(witness.vector), 3)
        base = rank_drop_map(3, 1, center=np.array(witness.point), frame=frame_for_image(h))
        seq = destabilizing_sequence(base, witness, radius=1.0, count=10, seed=0, c1_samples=2000)
        assert len(seq.entries) == 10
        for e in seq.entries:
            # center hits the fault sample and the rotated complement
            assert np.linalg.norm(e.map(np.array(witness.point)) - e.point) < 1e-10
            img = span_of(list(e.map.jacobian(np.array(witness.point)).T), n=3)
            assert grassmann_distance(img, e.h_i) < 1e-8
            # the non-spanning certificate
            assert not e.transversality.transverse
            assert e.transversality.defect >= 1
        dists = [e.c1_distance for e in seq.entries]
        assert all(b < a for a, b in zip(dists, dists[1:]))

    def test_base_is_transverse_where_sequence_is_not(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        h = choose_complement_H(witness.limit, witness.required, np.array(witness.vector), 3)
        base = rank_drop_map(3, 1, center=np.array(witness.point), frame=frame_for_image(h))
        assert transverse_at(base.image_at_center(), witness.required, 3).transverse
        seq = destabilizing_sequence(base, witness, radius=1.0, count=5, seed=0, c1_samples=1000)
        for e in seq.entries:
            assert not transverse_at(
                span_of(list(e.map.jacobian(np.array(witness.point)).T), n=3), e.leaf, 3
            ).transverse

    def test_perturbed_map_jacobian_matches_finite_differences(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        h = choose_complement_H(witness.limit, witness.required, np.array(witness.vector), 3)
        base = rank_drop_map(3, 1, center=np.array(witness.point), frame=frame_for_image(h))
        seq = destabilizing_sequence(base, witness, radius=1.0, count=3, seed=0, c1_samples=500)
        gmap = seq.entries[0].map
        rng = np.random.default_rng(7)
        for z in rng.uniform(-0.9, 0.9, size=(5, 3)):
            jac = gmap.jacobian(z)
            fd = np.stack(
                [(gmap(z + 1e-6 * e) - gmap(z - 1e-6 * e)) / 2e-6 for e in np.eye(3)], axis=1
            )
            assert np.max(np.abs(jac - fd)) < 1e-7

    def test_degenerate_arc_sample_rejected(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        h = choose_complement_H(witness.limit, witness.required, np.array(witness.vector), 3)
        base = rank_drop_map(3, 1, center=np.array(witness.point), frame=frame_for_image(h))
        with pytest.raises(ValueError, match="arc"):
            destabilizing_sequence(base, witness, count=10_000, seed=0)

    def test_deterministic_given_seed(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        h = choose_complement_H(witness.limit, witness.required, np.array(witness.vector), 3)
        base = rank_drop_map(3, 1, center=np.array(witness.point), frame=frame_for_image(h))
        a = destabilizing_sequence(base, witness, count=4, seed=9, c1_samples=500)
        b = destabilizing_sequence(base, witness, count=4, seed=9, c1_samples=500)
        assert [e.c1_distance for e in a.entries] == [e.c1_distance for e in b.entries]


class TestWitnessSheet:
    def test_shelf_sheet_certificates(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        wit = scene.raw["witness"]
        arc = parse_map(wit["arc"], 1)
        sheet = tf_witness(
            ctx, "S1", "S2", ORIGIN, arc, np.array(witness.vector),
            t0=wit["t0"], ratio=wit["ratio"], count=wit["count"],
        )
        # tangent to the approaching foliation along the arc...
        assert np.max(sheet.containment_angles) < 1e-6
        # ...but transverse to the base leaf at the point
        uy, _ = ctx.stratum("S2").locate(np.zeros(3))
        leaf_y = ctx.leaf_tangent("S2", uy)
        assert transverse_at(sheet.tangent_at_center(), leaf_y, 3).transverse

    def test_straight_arc_degenerates(self, shelf_fault):
        # marching straight down the parabola swallows the witness vector
        scene, ctx, witness = shelf_fault
        arc = parse_map("0, -x1", 1)
        with pytest.raises(ConstructionError):
            tf_witness(ctx, "S1", "S2", ORIGIN, arc, np.array(witness.vector))

    def test_vector_outside_leaf_rejected(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        wit = scene.raw["witness"]
        arc = parse_map(wit["arc"], 1)
        with pytest.raises(ConstructionError, match="not tangent"):
            tf_witness(ctx, "S1", "S2", ORIGIN, arc, np.array([0.0, 1.0, 0.0]))

    def test_no_fault_no_witness(self, gallery_ctx):
        # on the regular constant-map shelf the leaf limit captures
        # every candidate vector
        _, scene, ctx = gallery_ctx("parabola-shelf-constant")
        arc = parse_map("x1, -x1^7", 1)
        with pytest.raises(ConstructionError, match="captured|swallowed"):
            tf_witness(ctx, "S1", "S2", ORIGIN, arc, np.array([0.0, 0.0, 1.0]))

    def test_projection_returns_nearest_patch(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        wit = scene.raw["witness"]
        arc = parse_map(wit["arc"], 1)
        sheet = tf_witness(
            ctx, "S1", "S2", ORIGIN, arc, np.array(witness.vector),
            t0=wit["t0"], ratio=wit["ratio"], count=wit["count"],
        )
        # patch centers project to themselves
        q, tangents = sheet.project(sheet.centers[:4])
        assert np.max(np.linalg.norm(q - sheet.centers[:4], axis=1)) < 1e-12
        assert all(t.dim == 2 for t in tangents)

    def test_serializes_to_frames(self, shelf_fault):
        scene, ctx, witness = shelf_fault
        wit = scene.raw["witness"]
        arc = parse_map(wit["arc"], 1)
        sheet = tf_witness(
            ctx, "S1", "S2", ORIGIN, arc, np.array(witness.vector),
            t0=wit["t0"], ratio=wit["ratio"], count=wit["count"],
        )
        data = sheet.to_json()
        assert len(data["centers"]) == len(data["frames"]) == len(data["ts"])
        assert data["center"] == [0.0, 0.0, 0.0]
