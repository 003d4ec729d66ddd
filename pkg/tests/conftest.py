import pytest
from hypothesis import settings
from hypothesis import strategies as st

from taf.cantor import CantorSpace, Tail
from taf.supernat import SequenceProfile

settings.register_profile("taf", max_examples=60, deadline=None)
settings.load_profile("taf")

CYCLES = [(2,), (3,), (6,), (2, 3)]


def space_of(r, s, r_pre=(), s_pre=()):
    return CantorSpace(SequenceProfile(tuple(r_pre), tuple(r)), SequenceProfile(tuple(s_pre), tuple(s)))


@pytest.fixture
def s22():
    return space_of((2,), (2,))


@pytest.fixture
def s23():
    return space_of((2,), (3,))


profiles = st.builds(
    SequenceProfile,
    st.lists(st.integers(1, 6), max_size=3).map(tuple),
    st.lists(st.integers(2, 6), min_size=1, max_size=3).map(tuple),
)

spaces = st.builds(CantorSpace, profiles, profiles)


@st.composite
def points(draw, space, tail=None, max_support=4):
    nl = draw(st.integers(0, max_support))
    nr = draw(st.integers(0, max_support))
    left = [draw(st.integers(1, space.s.term(i))) for i in range(1, nl + 1)]
    right = [draw(st.integers(1, space.r.term(k))) for k in range(1, nr + 1)]
    tail = tail if tail is not None else draw(st.sampled_from(list(Tail)))
    return space.point(left, right, tail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
