import hypothesis.strategies as st
from hypothesis import settings

from monotone_infer.core.logic import Cube, State, Var

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def partial_cubes(draw, n, copy=0, min_size=0):
    idx = draw(st.lists(st.integers(0, n - 1), unique=True, min_size=min(min_size, n), max_size=n))
    return Cube.from_mapping({Var(i, copy): draw(st.booleans()) for i in idx})


@st.composite
def dnfs(draw, n, max_terms=4):
    return draw(st.lists(partial_cubes(n), min_size=0, max_size=max_terms))


def states(n):
    return st.lists(st.booleans(), min_size=n, max_size=n).map(State)
