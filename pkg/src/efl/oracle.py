"""Brute-force countermodel search over all small models, vectorized with numpy.

For each size (|W|, |A|) the search enumerates frames: one epistemic relation
per agent, one friendship relation per world and a denotation for every
nominal of the sequent.  All valuations of the sequent's propositions are
handled at once by bit-packing: the extension of a formula is an array of
shape (frames, W, A, words) of uint64 whose bit v says whether the formula
holds under valuation number v.

Relations the sequent cannot observe are not enumerated: without boxes and
with a single-label tree every agent gets the identity relation, and without
F every world gets the first in-class friendship relation.  The first
nominal's denotation is fixed to the first agent; agent renaming is an
isomorphism, so this loses no countermodel.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .calculus import TreeSequent
from .frames import FrameClassSpec
from .semantics import Assignment, Model
from .syntax import At, Falsum, FBox, Formula, Implies, KBox, Nominal, Prop, subformulas

CHUNK = 1 << 14
ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


def _all_relations(n: int) -> np.ndarray:
    """All n x n boolean matrices, shape (2**(n*n), n, n)."""
    k = n * n
    idx = np.arange(1 << k, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(k)) & 1
    return bits.astype(bool).reshape(-1, n, n)


def _box_filter(rels: np.ndarray, box: str) -> np.ndarray:
    if box == "K":
        return rels
    n = rels.shape[1]
    eye = np.eye(n, dtype=bool)
    refl = np.all(rels[:, eye], axis=1)
    comp = np.einsum("rij,rjk->rik", rels.astype(np.int64), rels.astype(np.int64)) > 0
    trans = np.all(~comp | rels, axis=(1, 2))
    keep = refl & trans
    if box == "S5":
        keep &= np.all(rels == rels.transpose(0, 2, 1), axis=(1, 2))
    return rels[keep]


def _theta_filter(rels: np.ndarray, spec: FrameClassSpec) -> np.ndarray:
    if not spec.theta:
        return rels
    agents = range(rels.shape[1])
    keep = []
    for r in rels:
        pairs = {(int(i), int(j)) for i, j in zip(*np.nonzero(r))}
        keep.append(all(t.holds(agents, pairs) for t in spec.theta))
    return rels[np.array(keep, dtype=bool)]


def _product_table(count: int, copies: int) -> np.ndarray:
    """Rows enumerate ``copies`` independent choices from range(count), last column fastest."""
    if copies == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(count)] * copies, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _prop_masks(nprops: int, cells: int) -> tuple[np.ndarray, int]:
    """masks[k, c, word]: bit v set iff valuation v makes prop k true at cell c."""
    nbits = 1 << (nprops * cells)
    nwords = max(1, (nbits + 63) // 64)
    v = np.arange(nwords * 64, dtype=np.uint64)
    masks = np.zeros((nprops, cells, nwords), dtype=np.uint64)
    weights = np.uint64(1) << (np.arange(64, dtype=np.uint64))
    for k in range(nprops):
        for c in range(cells):
            bit = (v >> np.uint64(k * cells + c)) & np.uint64(1)
            bit[nbits:] = 0
            masks[k, c] = (bit.reshape(nwords, 64) * weights).sum(axis=1, dtype=np.uint64)
    return masks, nbits


class _Space:
    def __init__(self, S: TreeSequent, nW: int, nA: int, spec: FrameClassSpec):
        self.S = S
        self.nW, self.nA = nW, nA
        subs = set()
        for x in S.ant | S.suc:
            subs.update(subformulas(x.formula))
        has_box = any(isinstance(f, KBox) for f in subs) or len(S.tree) > 1
        has_f = any(isinstance(f, FBox) for f in subs)
        self.props = sorted({f.name for f in subs if isinstance(f, Prop)})
        self.noms = sorted(S.nominals())

        rels_w = _box_filter(_all_relations(nW), spec.box)
        if not has_box:
            rels_w = np.eye(nW, dtype=bool)[None]
        rels_a = _theta_filter(_all_relations(nA), spec)
        if not has_f:
            rels_a = rels_a[:1]
        self.rels_w, self.rels_a = rels_w, rels_a
        self.r_idx = _product_table(len(rels_w), nA)
        self.f_idx = _product_table(len(rels_a), nW)
        d = _product_table(nA, len(self.noms))
        if len(self.noms):
            d = d[d[:, 0] == 0]
        self.d_idx = d
        self.masks, self.nbits = _prop_masks(len(self.props), nW * nA)
        self.nwords = self.masks.shape[2]
        last = self.nbits - 64 * (self.nwords - 1)
        self.tail = np.full(self.nwords, ONES, dtype=np.uint64)
        if last < 64:
            self.tail[-1] = np.uint64((1 << last) - 1)
        self.shape = (len(self.r_idx), len(self.f_idx), len(self.d_idx))
        empty = len(rels_a) == 0 or len(rels_w) == 0
        self.total = 0 if empty else int(np.prod(self.shape))

    def batch(self, start: int, stop: int):
        flat = np.arange(start, stop, dtype=np.int64)
        ri, fi, di = np.unravel_index(flat, self.shape)
        R = self.rels_w[self.r_idx[ri]]  # B x A x W x W
        F = self.rels_a[self.f_idx[fi]]  # B x W x A x A
        D = {n: self.d_idx[di, k] for k, n in enumerate(self.noms)}
        return R, F, D


def _evaluate(phi: Formula, sp: _Space, R, F, D, cache) -> np.ndarray:
    """Bit-packed extension of *phi*: shape B x W x A x words."""
    hit = cache.get(phi)
    if hit is not None:
        return hit
    B = R.shape[0]
    nW, nA, nw = sp.nW, sp.nA, sp.nwords
    if isinstance(phi, Nominal):
        eq = np.arange(nA)[None, :] == D[phi.name][:, None]  # B x A
        out = np.where(eq[:, None, :, None], ONES, np.uint64(0))
        out = np.broadcast_to(out, (B, nW, nA, nw))
    elif isinstance(phi, Prop):
        k = sp.props.index(phi.name)
        out = np.broadcast_to(sp.masks[k].reshape(nW, nA, nw)[None], (B, nW, nA, nw))
    elif isinstance(phi, Falsum):
        out = np.zeros((1, nW, nA, nw), dtype=np.uint64)
        out = np.broadcast_to(out, (B, nW, nA, nw))
    elif isinstance(phi, Implies):
        out = ~_evaluate(phi.lhs, sp, R, F, D, cache) | _evaluate(phi.rhs, sp, R, F, D, cache)
    elif isinstance(phi, At):
        body = _evaluate(phi.body, sp, R, F, D, cache)
        idx = np.broadcast_to(D[phi.nom][:, None, None, None], (B, nW, 1, nw))
        out = np.broadcast_to(np.take_along_axis(body, idx, axis=2), (B, nW, nA, nw))
    elif isinstance(phi, FBox):
        body = _evaluate(phi.body, sp, R, F, D, cache)
        # F[b, w, a, c]: c is a friend of a at w; need body at (w, c)
        vals = np.where(F[..., None], body[:, :, None, :, :], ONES)
        out = np.bitwise_and.reduce(vals, axis=3)
    elif isinstance(phi, KBox):
        body = _evaluate(phi.body, sp, R, F, D, cache)
        Rt = R.transpose(0, 2, 1, 3)  # b, w, a, v
        vals = np.where(Rt[..., None], body.transpose(0, 2, 1, 3)[:, None, :, :, :], ONES)
        out = np.bitwise_and.reduce(vals, axis=3)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    cache[phi] = out
    return out


def _falsify(sp: _Space, R, F, D):
    """Per frame in the batch: (found, assignment tuple index, valuation index)."""
    S = sp.S
    labels = sorted(S.tree.labels)
    pos = {lab: i for i, lab in enumerate(labels)}
    cache: dict = {}
    B = R.shape[0]
    vals = {x: _evaluate(x.formula, sp, R, F, D, cache)[:, :, 0, :] for x in S.ant | S.suc}  # B x W x words
    ar = np.arange(B)
    for t_i, tup in enumerate(product(range(sp.nW), repeat=len(labels))):
        ok = np.ones(B, dtype=bool)
        for lab in labels:
            p = lab.parent
            if p is not None:
                ok &= R[ar, D[lab.edge[0]], tup[pos[p]], tup[pos[lab]]]
        if not ok.any():
            continue
        bits = np.broadcast_to(sp.tail, (B, sp.nwords)).copy()
        bits[~ok] = 0
        for x in S.ant:
            bits &= vals[x][:, tup[pos[x.label]], :]
        for x in S.suc:
            bits &= ~vals[x][:, tup[pos[x.label]], :]
        hit = np.nonzero(bits.any(axis=1))[0]
        if len(hit):
            b = int(hit[0])
            words = bits[b]
            w = int(np.nonzero(words)[0][0])
            word = int(words[w])
            v = 64 * w + ((word & -word).bit_length() - 1)
            return b, t_i, v, labels
    return None


def _build(sp: _Space, flat_idx: int, tuple_idx: int, v: int, labels):
    ri, fi, di = np.unravel_index(flat_idx, sp.shape)
    W = [f"w{i}" for i in range(sp.nW)]
    A = [f"a{i}" for i in range(sp.nA)]
    R = {}
    for a in range(sp.nA):
        rel = sp.rels_w[sp.r_idx[ri, a]]
        R[A[a]] = [(W[i], W[j]) for i, j in zip(*np.nonzero(rel))]
    friend = {}
    for w in range(sp.nW):
        rel = sp.rels_a[sp.f_idx[fi, w]]
        friend[W[w]] = [(A[i], A[j]) for i, j in zip(*np.nonzero(rel))]
    cells = sp.nW * sp.nA
    val = {}
    for k, p in enumerate(sp.props):
        val[p] = [
            (W[c // sp.nA], A[c % sp.nA]) for c in range(cells) if (v >> (k * cells + c)) & 1
        ]
    noms = {n: A[int(sp.d_idx[di, k])] for k, n in enumerate(sp.noms)}
    M = Model(W, A, R, friend, val, noms)
    tup = next(t for i, t in enumerate(product(range(sp.nW), repeat=len(labels))) if i == tuple_idx)
    f = Assignment({lab: W[i] for lab, i in zip(labels, tup)})
    return M, f


def sizes(maxW: int, maxA: int):
    """Enumeration order of model sizes: by total size, then by world count."""
    return sorted(product(range(1, maxW + 1), range(1, maxA + 1)), key=lambda wa: (wa[0] + wa[1], wa[0]))


def find_countermodel(S: TreeSequent, maxW: int, maxA: int, spec: FrameClassSpec | None = None,
                      chunk: int = CHUNK):
    """Return the first in-class (Model, Assignment) falsifying *S*, or None."""
    if maxW < 1 or maxA < 1:
        raise ValueError("oracle bounds must be positive")
    spec = spec or FrameClassSpec()
    for nW, nA in sizes(maxW, maxA):
        sp = _Space(S, nW, nA, spec)
        step = max(1, chunk // sp.nwords)
        for start in range(0, sp.total, step):
            stop = min(sp.total, start + step)
            R, F, D = sp.batch(start, stop)
            res = _falsify(sp, R, F, D)
            if res is not None:
                b, t_i, v, labels = res
                return _build(sp, start + b, t_i, v, labels)
    return None


def is_valid_within(phi: Formula, maxW: int, maxA: int, spec: FrameClassSpec | None = None,
                    nom: str | None = None) -> bool:
    """True iff ``=> 0:@n phi`` has no countermodel within the bounds."""
    from .syntax import FreshNames, nominals_of

    n = nom or FreshNames(nominals_of(phi), prefix="o")()
    return find_countermodel(TreeSequent.of_formula(phi, n), maxW, maxA, spec) is None
