import random

from hypothesis import strategies as st

from efl.calculus import lf
from efl.syntax import At, BOT, FBox, Implies, KBox, Nominal, Prop, UniformSubstitution

PROPS = ("p", "q")
NOMS = ("n", "m")


def formulas(props=PROPS, noms=NOMS, max_leaves=8):
    """Hypothesis strategy over core (desugared) formulas."""
    leaf = st.one_of(
        st.sampled_from([Prop(p) for p in props]),
        st.sampled_from([Nominal(n) for n in noms]),
        st.just(BOT),
    )

    def grow(sub):
        return st.one_of(
            st.builds(Implies, sub, sub),
            st.builds(At, st.sampled_from(noms), sub),
            st.builds(FBox, sub),
            st.builds(KBox, sub),
        )

    return st.recursive(leaf, grow, max_leaves=max_leaves)


def random_formula(rng: random.Random, size: int, props=PROPS, noms=NOMS):
    """Plain-random counterpart for loops that must not depend on hypothesis."""
    if size <= 1:
        pick = rng.randrange(len(props) + len(noms) + 1)
        if pick < len(props):
            return Prop(props[pick])
        if pick < len(props) + len(noms):
            return Nominal(noms[pick - len(props)])
        return BOT
    kind = rng.choice(["imp", "imp", "at", "F", "box"])
    if kind == "imp":
        a = rng.randint(1, max(1, size - 2))
        return Implies(random_formula(rng, a, props, noms), random_formula(rng, max(1, size - 1 - a), props, noms))
    if kind == "at":
        return At(rng.choice(noms), random_formula(rng, size - 1, props, noms))
    if kind == "F":
        return FBox(random_formula(rng, size - 1, props, noms))
    return KBox(random_formula(rng, size - 1, props, noms))


def random_lf(rng, tree):
    label = rng.choice(sorted(tree.labels))
    return lf(label, At(rng.choice("nmk"), random_formula(rng, rng.randint(1, 4))))


def random_sigma(rng):
    props = {x: random_formula(rng, rng.randint(1, 4)) for x in ("p", "q") if rng.random() < 0.6}
    noms = {x: rng.choice("nmkj") for x in ("n", "m", "k") if rng.random() < 0.5}
    return UniformSubstitution(props, noms)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.report_lines():
            terminalreporter.write_line(line)
