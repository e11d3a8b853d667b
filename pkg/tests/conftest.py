import itertools
import random

import pytest

from putwinners.core import Profile

A, B, C, D = range(4)


def mcgarvey(m, margins):
    """Profile whose pairwise margins equal ``margins`` ({(a, b): w}, w odd).

    One base vote fixes every margin to +-1; each further pair of votes
    ``a b rest`` / ``reversed(rest) a b`` moves only the (a, b) margin by 2.
    """
    base = tuple(range(m))
    votes = [base]
    for (a, b), w in margins.items():
        s = 1 if base.index(a) < base.index(b) else -1
        steps = (w - s) // 2
        if (w - s) % 2:
            raise ValueError("margins must all be odd")
        hi, lo = (a, b) if steps > 0 else (b, a)
        rest = [x for x in range(m) if x not in (a, b)]
        for _ in range(abs(steps)):
            votes.append((hi, lo, *rest))
            votes.append((*reversed(rest), hi, lo))
    return Profile.from_rankings(votes, m)


@pytest.fixture
def cycle3():
    """A > B > C, B > C > A, C > A > B."""
    return Profile.from_rankings([(A, B, C), (B, C, A), (C, A, B)], 3, ("A", "B", "C"))


@pytest.fixture
def tie_ab():
    """2 x A>B>C, 1 x B>A>C, 1 x C>B>A."""
    return Profile(3, ((2, (A, B, C)), (1, (B, A, C)), (1, (C, B, A))), ("A", "B", "C"))


@pytest.fixture
def unique_a():
    """2 x A>B>C, 2 x B>A>C, 1 x C>A>B: C goes first, then A beats B 3-2."""
    return Profile(3, ((2, (A, B, C)), (2, (B, A, C)), (1, (C, A, B))), ("A", "B", "C"))


@pytest.fixture
def transitive():
    """Margins 0>1 (5), 0>2 (3), 1>2 (1), 0>3 (7), 1>3 (9), 2>3 (11): distinct weights."""
    return mcgarvey(4, {(0, 1): 5, (0, 2): 3, (1, 2): 1, (0, 3): 7, (1, 3): 9, (2, 3): 11})


@pytest.fixture
def example_two():
    """Heavy tier {(D,C), (C,A), (B,A)} at 3, then {(C,B), (B,D), (D,A)} at 1."""
    return mcgarvey(4, {(D, C): 3, (C, A): 3, (B, A): 3, (C, B): 1, (B, D): 1, (D, A): 1})


def random_profiles(count, m_range, n_range, seed, complete=True):
    rnd = random.Random(seed)
    out = []
    for _ in range(count):
        m = rnd.randint(*m_range)
        n = rnd.randint(*n_range)
        votes = []
        for _ in range(n):
            r = list(range(m))
            rnd.shuffle(r)
            if not complete:
                r = r[:rnd.randint(1, m)]
            votes.append(tuple(r))
        out.append(Profile.from_rankings(votes, m))
    return out


def all_orders(m):
    return itertools.permutations(range(m))


# -- acceptance summary ------------------------------------------------------------

_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().user_properties.append(("criterion", marker.args[0]))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    title = props.get("criterion")
    if title is None:
        return
    if report.failed:
        _ACCEPTANCE[title] = "FAIL"
    elif report.skipped:
        _ACCEPTANCE.setdefault(title, "SKIP")
    elif report.when == "call" and title not in _ACCEPTANCE:
        note = props.get("note")
        _ACCEPTANCE[title] = "PASS" + (f" ({note})" if note else "")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for title in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{title}: {_ACCEPTANCE[title]}")
