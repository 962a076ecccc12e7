"""Built-in scenes with known verdicts.

Each entry bundles a scene, a description of the phenomenon it
exhibits, and the expected checker outcomes (golden statuses).  The
first five entries are regularity scenes for a stratum pair at the
origin-side incidence point; the remaining three are transversality
scenes: maps into a foliated target that are non-transverse and stay so
under small perturbations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scene import Scene, scene_from_dict

PI = 3.141592653589793
TWO_PI = 6.283185307179586

__all__ = ["GalleryEntry", "gallery", "gallery_entry", "gallery_names", "blowup_scene"]


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    scene_dict: dict = field(repr=False)
    # golden statuses: (condition, x, y) -> 'holds-on-samples' | 'fails-with-witness'
    expected_verdicts: dict = field(default_factory=dict)
    # for transversality scenes: expected fraction of perturbed maps that
    # become transverse (0.0 = the defect cannot be perturbed away)
    expected_transverse_fraction: float | None = None

    def scene(self) -> Scene:
        return scene_from_dict(self.scene_dict)


def _halfplane(name="S1"):
    return {
        "name": name,
        "dim": 2,
        "chart": "x1, x2, 0",
        "domain": ["x2"],
        "inverse": "x1, x2",
        "sample_box": [[-1.0, 1.0], [0.0, 1.0]],
    }


def _shelf(name="S1"):
    return {
        "name": name,
        "dim": 2,
        "chart": "x1, x2^2, x2",
        "domain": ["-x2"],
        "inverse": "x1, x3",
        "sample_box": [[-1.0, 1.0], [-1.0, 0.0]],
    }


def _floor_plane(name="S2"):
    return {
        "name": name,
        "dim": 2,
        "chart": "x1, 0, x2",
        "inverse": "x1, x3",
        "sample_box": [[-1.0, 1.0], [-1.0, 1.0]],
    }


def _origin_incidence():
    return [{"x": "S1", "y": "S2", "point": [0.0, 0.0, 0.0]}]


def _entries() -> list[GalleryEntry]:
    entries = []

    entries.append(
        GalleryEntry(
            name="parallel-planes",
            description=(
                "Open half-plane over the full plane it borders along the first "
                "axis.  The half-plane tangent never picks up the third axis "
                "direction, so the plain tangent condition fails on the axis; "
                "the height-sum map refines both strata into lines parallel to "
                "the first axis and the foliated condition holds."
            ),
            scene_dict={
                "name": "parallel-planes",
                "ambient_dim": 3,
                "map": "y + z",
                "strata": [_halfplane(), _floor_plane()],
                "incidences": _origin_incidence(),
                "experiments": {
                    "mode": "stability",
                    "k_box": [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]],
                    "grid": [6, 6, 6],
                    "trials": 200,
                    "bumps": 4,
                },
            },
            expected_verdicts={
                ("a", "S1", "S2"): "fails-with-witness",
                ("af", "S1", "S2"): "holds-on-samples",
            },
        )
    )

    entries.append(
        GalleryEntry(
            name="parabola-shelf",
            description=(
                "Parabolic shelf curving down onto the plane.  Its tangent "
                "flattens onto the plane along the axis, so the plain tangent "
                "condition holds; but the height map foliates the shelf into "
                "lines whose limit misses the plane's two-dimensional leaf, a "
                "fault with a right-angle witness."
            ),
            scene_dict={
                "name": "parabola-shelf",
                "ambient_dim": 3,
                "map": "y",
                "strata": [_shelf(), _floor_plane()],
                "incidences": _origin_incidence(),
                "witness": {"arc": "x1, -x1^7", "t0": 0.05, "ratio": 0.5, "count": 14},
                "experiments": {"mode": "instability", "count": 20, "radius": 1.0},
            },
            expected_verdicts={
                ("a", "S1", "S2"): "holds-on-samples",
                ("af", "S1", "S2"): "fails-with-witness",
            },
        )
    )

    entries.append(
        GalleryEntry(
            name="parallel-planes-constant",
            description=(
                "The parallel-planes geometry under a constant map: every "
                "stratum is a single leaf, so the foliated condition reduces "
                "to the plain tangent condition and fails with it."
            ),
            scene_dict={
                "name": "parallel-planes-constant",
                "ambient_dim": 3,
                "map": "0",
                "strata": [_halfplane(), _floor_plane()],
                "incidences": _origin_incidence(),
            },
            expected_verdicts={
                ("a", "S1", "S2"): "fails-with-witness",
                ("af", "S1", "S2"): "fails-with-witness",
            },
        )
    )

    entries.append(
        GalleryEntry(
            name="parabola-shelf-constant",
            description=(
                "The parabola-shelf geometry under a constant map: leaves are "
                "whole strata, the foliated condition coincides with the plain "
                "tangent condition and both hold."
            ),
            scene_dict={
                "name": "parabola-shelf-constant",
                "ambient_dim": 3,
                "map": "0",
                "strata": [_shelf(), _floor_plane()],
                "incidences": _origin_incidence(),
            },
            expected_verdicts={
                ("a", "S1", "S2"): "holds-on-samples",
                ("af", "S1", "S2"): "holds-on-samples",
            },
        )
    )

    entries.append(blowup_scene())

    entries.append(
        GalleryEntry(
            name="circle-into-plane",
            description=(
                "A circle mapped into the plane foliated by horizontal lines. "
                "The vertical component of the tangent integrates to zero "
                "around the loop, so it vanishes somewhere, for this map and "
                "for every small perturbation of it: non-transversality that "
                "cannot be perturbed away."
            ),
            scene_dict={
                "name": "circle-into-plane",
                "ambient_dim": 2,
                "map": "x2",
                "strata": [
                    {
                        "name": "plane",
                        "dim": 2,
                        "chart": "x1, x2",
                        "inverse": "x1, x2",
                        "sample_box": [[-2.0, 2.0], [-2.0, 2.0]],
                    }
                ],
                "experiments": {
                    "mode": "nongeneric",
                    "g": "cos(x1), sin(x1)",
                    "g_dim": 1,
                    "k_box": [[-PI, PI]],
                    "grid": [241],
                    "domain_topology": "circle",
                    "eps": 0.05,
                    "trials": 50,
                },
            },
            expected_transverse_fraction=0.0,
        )
    )

    entries.append(
        GalleryEntry(
            name="cubic-graph",
            description=(
                "The graph of a cubic with a hump, mapped into the plane "
                "foliated by horizontal lines.  The vertical slope changes "
                "sign across the hump, so it has a zero, and any small "
                "perturbation keeps one: a persistent tangency."
            ),
            scene_dict={
                "name": "cubic-graph",
                "ambient_dim": 2,
                "map": "x2",
                "strata": [
                    {
                        "name": "plane",
                        "dim": 2,
                        "chart": "x1, x2",
                        "inverse": "x1, x2",
                        "sample_box": [[-2.0, 2.0], [-2.0, 2.0]],
                    }
                ],
                "experiments": {
                    "mode": "nongeneric",
                    "g": "x1, x1^3 - x1",
                    "g_dim": 1,
                    "k_box": [[-1.5, 1.5]],
                    "grid": [241],
                    "domain_topology": "line",
                    "eps": 0.05,
                    "trials": 50,
                },
            },
            expected_transverse_fraction=0.0,
        )
    )

    entries.append(
        GalleryEntry(
            name="sphere-disc",
            description=(
                "A sphere projected onto a disc that only partially covers a "
                "circle foliated by its points.  The fold of the projection "
                "crosses the circle; wherever it does, the rank needed for "
                "transversality to a point-leaf is missing, and small "
                "perturbations only move the fold."
            ),
            scene_dict={
                "name": "sphere-disc",
                "ambient_dim": 2,
                "map": "x1, x2",
                "strata": [
                    {
                        "name": "circle",
                        "dim": 1,
                        "chart": "cos(x1), sin(x1)",
                        "domain": ["x1", str(TWO_PI) + " - x1"],
                        "sample_box": [[0.1, 6.1]],
                    }
                ],
                "experiments": {
                    "mode": "nongeneric",
                    "g": "0.6*cos(x1)*cos(x2) + 0.6, 0.6*sin(x1)*cos(x2)",
                    "g_dim": 2,
                    "k_box": [[0.8, 1.5], [-0.3, 0.3]],
                    "grid": [25, 25],
                    "domain_topology": "fold",
                    "eps": 0.02,
                    "trials": 50,
                },
            },
            expected_transverse_fraction=0.0,
        )
    )

    return entries


def blowup_scene() -> GalleryEntry:
    """Twisted band collapsing onto the plane through its center circle.

    The band is the half-twisted strip embedded in R^3; the collapse map
    sends a band point to (radius - 1, height), which is injective off
    the center circle and constant on it.  The circle stratum is a
    single leaf while the band's leaves are points, so limits of band
    leaves are zero-dimensional and can never contain the circle
    direction: the foliated condition fails at every circle point, while
    the plain tangent condition holds.  The band chart runs the core
    angle twice, using the half-twist identification to reach both sides
    of the circle; one open ray of the band is left uncovered.
    """
    band_chart = (
        "(1 + x2*cos(x1))*cos(2*x1), (1 + x2*cos(x1))*sin(2*x1), x2*sin(x1)"
    )
    return GalleryEntry(
        name="blowup",
        description=(
            "Half-twisted band over its center circle, collapsed to the "
            "plane.  Leaves of the band are points; the only leaf of the "
            "circle is the circle itself.  Limits of point-leaves are "
            "zero-dimensional, so the foliated condition fails along the "
            "circle even though the plain tangent condition holds: a fault "
            "invisible to embedding-based probes."
        ),
        scene_dict={
            "name": "blowup",
            "ambient_dim": 3,
            "map": "sqrt(x1^2 + x2^2) - 1, x3",
            "strata": [
                {
                    "name": "X",
                    "dim": 1,
                    "chart": "cos(2*x1), sin(2*x1), 0",
                    "domain": ["x1", str(PI) + " - x1"],
                    "sample_box": [[0.1, 3.0]],
                },
                {
                    "name": "Y",
                    "dim": 2,
                    "chart": band_chart,
                    "domain": ["x1", str(TWO_PI) + " - x1", "x2", "0.5 - x2"],
                    "sample_box": [[0.1, 6.1], [0.0, 0.45]],
                },
            ],
            "incidences": [{"x": "Y", "y": "X", "point": [-1.0, 0.0, 0.0]}],
        },
        expected_verdicts={
            ("a", "Y", "X"): "holds-on-samples",
            ("af", "Y", "X"): "fails-with-witness",
        },
    )


_GALLERY: list[GalleryEntry] | None = None


def gallery() -> list[GalleryEntry]:
    global _GALLERY
    if _GALLERY is None:
        _GALLERY = _entries()
    return list(_GALLERY)


def gallery_names() -> list[str]:
    return [e.name for e in gallery()]


def gallery_entry(name: str) -> GalleryEntry:
    for e in gallery():
        if e.name == name:
            return e
    raise KeyError(f"no gallery entry named {name!r}")
