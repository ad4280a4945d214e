"""Slow reference semantics used as an oracle for the package's evaluators.

Written straight from the truth clauses with plain recursion and itertools;
it shares no code with efl.semantics or efl.oracle.
"""

from itertools import chain, combinations, product

from efl.semantics import Assignment, Model
from efl.syntax import At, Falsum, FBox, Implies, KBox, Nominal, Prop, symbols_of


def holds(M, w, a, phi):
    if isinstance(phi, Prop):
        return (w, a) in M.val.get(phi.name, ())
    if isinstance(phi, Nominal):
        return M.nominals[phi.name] == a
    if isinstance(phi, Falsum):
        return False
    if isinstance(phi, Implies):
        return (not holds(M, w, a, phi.lhs)) or holds(M, w, a, phi.rhs)
    if isinstance(phi, At):
        return holds(M, w, M.nominals[phi.nom], phi.body)
    if isinstance(phi, FBox):
        return all(holds(M, w, b, phi.body) for (x, b) in M.friend[w] if x == a)
    if isinstance(phi, KBox):
        return all(holds(M, v, a, phi.body) for (u, v) in M.R[a] if u == w)
    raise TypeError(phi)


def sequent_holds(M, f, S):
    def lab(x):
        return holds(M, f[x.label], M.nominals[x.nom], x.body)

    return not all(lab(x) for x in S.ant) or any(lab(x) for x in S.suc)


def _subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def _assignments(M, tree):
    labels = sorted(tree.labels)
    for ws in product(M.worlds, repeat=len(labels)):
        f = dict(zip(labels, ws))
        if all(lab.parent is None or (f[lab.parent], f[lab]) in M.R[M.nominals[lab.edge[0]]] for lab in labels):
            yield f


def all_models(nW, nA, props, noms):
    W, A = tuple(range(nW)), tuple(range(nA))
    wpairs = list(product(W, W))
    apairs = list(product(A, A))
    points = list(product(W, A))
    for Rs in product(*[list(_subsets(wpairs)) for _ in A]):
        for Fs in product(*[list(_subsets(apairs)) for _ in W]):
            for Vs in product(*[list(_subsets(points)) for _ in props]):
                for den in product(A, repeat=len(noms)):
                    yield Model(W, A, dict(zip(A, Rs)), dict(zip(W, Fs)), dict(zip(props, Vs)),
                                dict(zip(noms, den)))


def naive_countermodel(S, nW, nA, in_class=lambda M: True):
    """First (M, f) of exactly nW worlds and nA agents falsifying S, or None."""
    noms, props = set(S.tree.nominals()), set()
    for x in S.ant | S.suc:
        ns, ps = symbols_of(x.formula)
        noms |= ns
        props |= ps
    for M in all_models(nW, nA, sorted(props), sorted(noms)):
        if not in_class(M):
            continue
        for f in _assignments(M, S.tree):
            if not sequent_holds(M, f, S):
                return M, Assignment(f)
    return None
