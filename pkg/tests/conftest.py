import math
import sys

from hypothesis import settings, strategies as st

from whittle_kf.moebius import ArmParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

binary_words = st.text(alphabet="01", max_size=12)


@st.composite
def arm_params(draw, beta=None, weight=1.0, cost=0.0, a_min=0.0):
    # a is either exactly 0 or not absurdly small
    a = draw(st.one_of(st.just(0.0), st.floats(max(a_min, 1e-3), 2.0))) if a_min == 0 else draw(st.floats(a_min, 2.0))
    b = a + draw(st.floats(0.05, 4.0))
    if beta is None:
        beta = draw(st.floats(0.1, 0.95))
    return ArmParams(a, b, weight, cost, beta)


def approx(x, y, rel=1e-9, abs_=1e-12):
    return math.isclose(x, y, rel_tol=rel, abs_tol=abs_)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
