import numpy as np
import pytest
from hypothesis import strategies as st

from pdrank.rankmatrix import Orientation, RankMatrix
from pdrank.report import load_nfl

NFL_ORDER = (
    "Andrew Luck", "Aaron Rodgers", "Peyton Manning", "Tom Brady", "Tony Romo", "Drew Brees",
    "Ben Roethlisberger", "Ryan Tannehill", "Matthew Stafford", "Mark Sanchez", "Russell Wilson",
    "Philip Rivers", "Cam Newton", "Eli Manning", "Matt Ryan", "Joe Flacco", "Alex Smith",
    "Colin Kaepernick", "Andy Dalton", "Jay Cutler", "Josh McCown", "Drew Stanton",
    "Teddy Bridgewater", "Brian Hoyer",
)


@pytest.fixture(scope="session")
def nfl():
    return load_nfl()


@pytest.fixture
def toy3():
    """Three entities, two higher-is-better ballots (1,2,3) and (2,1,3)."""
    return RankMatrix.from_rows(["a", "b", "c"], [[1, 2], [2, 1], [3, 3]], Orientation.HIGHER_IS_BETTER)


def by_name(matrix, values):
    return {e: v for e, v in zip(matrix.entities, values)}


@st.composite
def complete_matrices(draw, n_range=(3, 8), m_range=(1, 9), orientation=None):
    """Random complete matrices whose columns are permutations of 1..N."""
    n = draw(st.integers(*n_range))
    m = draw(st.integers(*m_range))
    cols = [draw(st.permutations(range(1, n + 1))) for _ in range(m)]
    if orientation is None:
        orientation = draw(st.sampled_from(list(Orientation)))
    values = np.array(cols, dtype=float).T
    return RankMatrix(tuple(f"e{i}" for i in range(n)), values, orientation)


@st.composite
def matrices_with_missing(draw, n_range=(2, 7), m_range=(2, 8)):
    """Random matrices with missing cells in which every pair still overlaps."""
    base = draw(complete_matrices(n_range, m_range))
    n, m = base.values.shape
    mask = np.array(draw(st.lists(st.booleans(), min_size=n * m, max_size=n * m))).reshape(n, m)
    obs = ~mask
    obs[:, 0] = True  # every pair overlaps in the first column
    obs[np.arange(m) % n, np.arange(m)] = True  # no empty column
    values = np.where(obs, base.values, np.nan)
    # Re-number the observed entries of each column 1..#observed.
    for j in range(m):
        keep = obs[:, j]
        values[keep, j] = np.argsort(np.argsort(values[keep, j])) + 1
    return RankMatrix(base.entities, values, base.orientation)
