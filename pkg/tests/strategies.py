"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from omegaseq.terms import ONE, Add, All, Meet, Mul, Neg, Sequent, Succ, Var, atom, eq

names = st.sampled_from(["p", "q", "r"])
variables = st.sampled_from(["x", "y", "a"])

terms = st.recursive(
    st.one_of(st.just(ONE), variables.map(Var)),
    lambda t: st.one_of(
        t.map(Succ),
        st.tuples(t, t).map(lambda ab: Add(*ab)),
        st.tuples(t, t).map(lambda ab: Mul(*ab)),
    ),
    max_leaves=5,
)

primes = st.one_of(names.map(atom), st.tuples(terms, terms).map(lambda st_: eq(*st_)))

formulas = st.recursive(
    primes,
    lambda f: st.one_of(
        st.tuples(f, f).map(lambda ab: Meet(*ab)),
        f.map(Neg),
        st.tuples(variables, f).map(lambda vf: All(*vf)),
    ),
    max_leaves=6,
)

closed_named = st.recursive(
    st.sampled_from(["p", "q"]).map(atom),
    lambda f: st.one_of(
        st.tuples(f, f).map(lambda ab: Meet(*ab)),
        f.map(Neg),
        f.map(lambda g: All("x", g)),
    ),
    max_leaves=5,
)

sequents = st.tuples(st.lists(formulas, max_size=3).map(tuple), st.one_of(st.none(), formulas)).map(
    lambda s: Sequent(*s)
)
