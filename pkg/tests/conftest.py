import pytest

from fbelos import construct, preset

# cubic(2, -1.5) is convex near x = 1, so its scaled copy rises above the
# upper arc: it exercises every tangent-line property but cannot nest.
PRESET_SPECS = [
    ("arbelos", ()),
    ("parbelos", ()),
    ("parabola", (2,)),
    ("sine", ()),
    ("cubic", (2, -1.5)),
]

_profiles = {}
_figures = {}


def get_profile(name, params=()):
    key = (name, tuple(params))
    if key not in _profiles:
        _profiles[key] = preset(name, params)
    return _profiles[key]


def get_figure(name, params, p):
    key = (name, tuple(params), p)
    if key not in _figures:
        _figures[key] = construct(get_profile(name, params), p,
                                  require_nesting=False)
    return _figures[key]


@pytest.fixture(scope="session")
def arbelos():
    return get_profile("arbelos")


@pytest.fixture(scope="session")
def parbelos():
    return get_profile("parbelos")


@pytest.fixture(scope="session")
def sine():
    return get_profile("sine")


@pytest.fixture(scope="session")
def cubic():
    return get_profile("cubic", (2, -1.5))


@pytest.fixture(scope="session")
def parabola2():
    return get_profile("parabola", (2,))
