import pytest

from strathom.dsl import parse_map
from strathom.gallery import gallery_entry
from strathom.strata import Incidence, Prestratification, StratifiedMapContext, Stratum

_CACHE: dict = {}


@pytest.fixture(scope="session")
def gallery_ctx():
    """Cached (entry, scene, context) triples for gallery scenes."""

    def get(name: str):
        if name not in _CACHE:
            entry = gallery_entry(name)
            scene = entry.scene()
            _CACHE[name] = (entry, scene, scene.build_context(seed=0))
        return _CACHE[name]

    return get


@pytest.fixture(scope="session")
def lines_in_r3_ctx():
    """Half-plane over a line, with a full-rank stratifying map: every
    leaf is a point, so leaf-based conditions hold vacuously."""
    halfplane = Stratum(
        name="X",
        chart=parse_map("x1, x2, 0", 2, domain=("x2",)),
        inverse_hint=parse_map("x1, x2", 3),
        sample_box=((-1.0, 1.0), (0.0, 1.0)),
    )
    line = Stratum(
        name="Y",
        chart=parse_map("x1, 0, 0", 1),
        inverse_hint=parse_map("x1", 3),
        sample_box=((-1.0, 1.0),),
    )
    prestrat = Prestratification(
        ambient=3,
        strata=(halfplane, line),
        incidences=(Incidence("X", "Y", (0.0, 0.0, 0.0)),),
    )
    return StratifiedMapContext.build(parse_map("x, y", 3), prestrat, seed=0)
