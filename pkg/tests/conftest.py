import pytest
from hypothesis import strategies as st

from entagg import FeatureAllocation, Partitioning, SampleSet

Z1 = [[1, 3, 6, 7], [2], [4, 5]]
Z2 = [[1, 3, 6], [2, 7], [4, 5]]
Z3 = [[1, 2, 3, 6, 7], [4, 5]]


@pytest.fixture
def e3():
    return SampleSet.of_partitionings([Z1, Z2, Z3])


@pytest.fixture
def z1():
    return Partitioning(tuple(map(tuple, Z1)), 7)


@st.composite
def partitionings(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Partitioning.from_labels(labels)


@st.composite
def feature_allocations(draw, min_n=1, max_n=10, max_blocks=6):
    n = draw(st.integers(min_n, max_n))
    blocks = draw(
        st.lists(
            st.sets(st.integers(1, n), min_size=1, max_size=n).map(tuple),
            min_size=0,
            max_size=max_blocks,
        )
    )
    return FeatureAllocation(tuple(blocks), n)


@st.composite
def sample_sets(draw, min_n=2, max_n=8, max_t=5, kind=None):
    n = draw(st.integers(min_n, max_n))
    T = draw(st.integers(1, max_t))
    kind = kind or draw(st.sampled_from(["partitioning", "feature-allocation"]))
    samples = []
    for _ in range(T):
        if kind == "partitioning":
            labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
            samples.append(Partitioning.from_labels(labels))
        else:
            blocks = draw(
                st.lists(st.sets(st.integers(1, n), min_size=1).map(tuple), max_size=5)
            )
            samples.append(FeatureAllocation(tuple(blocks), n))
    return SampleSet(tuple(samples))


_acceptance: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        _acceptance[name] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        status, secs = _acceptance[name]
        number = name.split("_")[2]
        title = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({secs:.2f}s)")
