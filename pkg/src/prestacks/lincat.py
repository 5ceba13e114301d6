"""Finite k-linear categories with free hom modules, and their functors,
natural transformations and bimodules.

Morphisms are coordinate vectors over chosen hom bases; every axiom check is
an exhaustive exact comparison on basis elements, so validators are proofs at
fixture scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True)
class Mor:
    """A morphism in a fiber category: endpoints plus coordinates."""

    cat: "LinearCategory"
    src: str
    tgt: str
    coords: tuple

    def __post_init__(self):
        rank = len(self.cat.hom_basis(self.src, self.tgt))
        if len(self.coords) != rank:
            raise ValueError(
                "coordinate length %d != hom rank %d" % (len(self.coords), rank)
            )

    def is_zero(self):
        F = self.cat.field
        return all(F.is_zero(c) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, Mor):
            return NotImplemented
        if (self.cat, self.src, self.tgt) != (other.cat, other.src, other.tgt):
            return False
        F = self.cat.field
        return all(F.eq(a, b) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash((id(self.cat), self.src, self.tgt, self.coords))


class LinearCategory:
    """A k-linear category with a finite chosen basis for every hom module.

    Composition is stored as structure constants: for basis elements
    f in hom(A, B) and g in hom(B, C), ``comp[(A, B, C)][(gi, fi)]`` maps a
    result basis index to its coefficient.
    """

    def __init__(self, name, field, objects, hom_bases, comp, identities):
        self.name = name
        self.field = field
        self.objects = list(objects)
        self._hom = {k: list(v) for k, v in hom_bases.items()}  # (A,B) -> names
        self.comp = comp  # (A,B,C) -> {(gi,fi): {k: coeff}}
        self.identity_coords = identities  # A -> coord tuple over hom(A,A)

    def hom_basis(self, a, b):
        return self._hom.get((a, b), [])

    def rank(self, a, b):
        return len(self.hom_basis(a, b))

    def zero_mor(self, a, b):
        return Mor(self, a, b, tuple([self.field.zero] * self.rank(a, b)))

    def basis_mor(self, a, b, i):
        coords = [self.field.zero] * self.rank(a, b)
        coords[i] = self.field.one
        return Mor(self, a, b, tuple(coords))

    def identity(self, a):
        return Mor(self, a, a, tuple(self.identity_coords[a]))

    def scale(self, c, f):
        F = self.field
        return Mor(self, f.src, f.tgt, tuple(F.mul(c, x) for x in f.coords))

    def add(self, f, g):
        if (f.src, f.tgt) != (g.src, g.tgt):
            raise ValueError("cannot add morphisms with different endpoints")
        F = self.field
        return Mor(self, f.src, f.tgt, tuple(F.add(a, b) for a, b in zip(f.coords, g.coords)))

    def compose_basis(self, a, b, c, gi, fi):
        """Coefficients of (basis g_i) o (basis f_i) over hom(a, c)."""
        table = self.comp.get((a, b, c), {})
        return table.get((gi, fi), {})

    def compose(self, g, f):
        """The composite g o f (f first); bilinear in both arguments."""
        if g.cat is not self or f.cat is not self:
            raise ValueError("morphisms from another category")
        if f.tgt != g.src:
            raise ValueError("endpoints do not match: %s -> %s vs %s -> %s"
                             % (f.src, f.tgt, g.src, g.tgt))
        F = self.field
        out = [F.zero] * self.rank(f.src, g.tgt)
        for gi, gc in enumerate(g.coords):
            if F.is_zero(gc):
                continue
            for fi, fc in enumerate(f.coords):
                if F.is_zero(fc):
                    continue
                w = F.mul(gc, fc)
                for k, coeff in self.compose_basis(f.src, f.tgt, g.tgt, gi, fi).items():
                    out[k] = F.add(out[k], F.mul(w, coeff))
        return Mor(self, f.src, g.tgt, tuple(out))

    def invert(self, f):
        """Two-sided inverse of f, or None.  Solves small exact linear systems."""
        if f.src == f.tgt and f == self.identity(f.src):
            return f
        from .linalg import SparseMatrix
        F = self.field
        n = self.rank(f.tgt, f.src)
        if n == 0:
            return None
        # unknowns: coords of g in hom(tgt, src); demand g o f = id_src, f o g = id_tgt
        rows = self.rank(f.src, f.src) + self.rank(f.tgt, f.tgt)
        m = SparseMatrix(rows, n, F)
        rhs = [F.zero] * rows
        for k, c in enumerate(self.identity_coords[f.src]):
            rhs[k] = c
        off = self.rank(f.src, f.src)
        for k, c in enumerate(self.identity_coords[f.tgt]):
            rhs[off + k] = c
        for gi in range(n):
            g = self.basis_mor(f.tgt, f.src, gi)
            gf = self.compose(g, f)
            for k, c in enumerate(gf.coords):
                if not F.is_zero(c):
                    m.add_entry(k, gi, c)
            fg = self.compose(f, g)
            for k, c in enumerate(fg.coords):
                if not F.is_zero(c):
                    m.add_entry(off + k, gi, c)
        try:
            sol = m.solve(rhs)
        except ValueError:
            return None
        if sol is None:
            return None
        return Mor(self, f.tgt, f.src, tuple(sol))

    def validate(self):
        """None if linear-category axioms hold, else the first violation."""
        F = self.field
        for a in self.objects:
            if a not in self.identity_coords:
                return "object %s has no identity coordinates" % a
        for a, b in product(self.objects, repeat=2):
            for c in self.objects:
                for gi in range(self.rank(b, c)):
                    g = self.basis_mor(b, c, gi)
                    for fi in range(self.rank(a, b)):
                        f = self.basis_mor(a, b, fi)
                        self.compose(g, f)  # raises on malformed tables
        for a, b in product(self.objects, repeat=2):
            for fi in range(self.rank(a, b)):
                f = self.basis_mor(a, b, fi)
                if self.compose(f, self.identity(a)) != f:
                    return "right unit fails at %s->%s basis %d" % (a, b, fi)
                if self.compose(self.identity(b), f) != f:
                    return "left unit fails at %s->%s basis %d" % (a, b, fi)
        for a, b, c, d in product(self.objects, repeat=4):
            for fi in range(self.rank(a, b)):
                f = self.basis_mor(a, b, fi)
                for gi in range(self.rank(b, c)):
                    g = self.basis_mor(b, c, gi)
                    for hi in range(self.rank(c, d)):
                        h = self.basis_mor(c, d, hi)
                        if self.compose(self.compose(h, g), f) != self.compose(h, self.compose(g, f)):
                            return ("associativity fails at %s,%s,%s,%s (%d,%d,%d)"
                                    % (a, b, c, d, fi, gi, hi))
        return None

    def identity_basis_index(self, a):
        """Index i with 1_A = basis_i of hom(A,A), or None if not a basis vector."""
        F = self.field
        coords = self.identity_coords[a]
        hits = [i for i, c in enumerate(coords) if not F.is_zero(c)]
        if len(hits) == 1 and F.eq(coords[hits[0]], F.one):
            return hits[0]
        return None


class LinFunctor:
    """A k-linear functor between fiber categories, stored as an object map
    plus one matrix per hom pair (columns indexed by source basis)."""

    def __init__(self, src_cat, tgt_cat, obj_map, mats, name=""):
        self.src_cat = src_cat
        self.tgt_cat = tgt_cat
        self.obj_map = dict(obj_map)
        self.mats = mats  # (A,B) -> tuple of coord tuples, one per source basis elt
        self.name = name

    def on_obj(self, a):
        return self.obj_map[a]

    def column(self, a, b, i):
        return self.mats[(a, b)][i]

    def apply(self, f):
        if f.cat is not self.src_cat:
            raise ValueError("functor applied to foreign morphism")
        F = self.tgt_cat.field
        fa, fb = self.on_obj(f.src), self.on_obj(f.tgt)
        out = [F.zero] * self.tgt_cat.rank(fa, fb)
        cols = self.mats.get((f.src, f.tgt), ())
        for i, c in enumerate(f.coords):
            if F.is_zero(c):
                continue
            for k, v in enumerate(cols[i]):
                out[k] = F.add(out[k], F.mul(c, v))
        return Mor(self.tgt_cat, fa, fb, tuple(out))

    def validate(self):
        C, D = self.src_cat, self.tgt_cat
        for a in C.objects:
            if self.apply(C.identity(a)) != D.identity(self.on_obj(a)):
                return "functor does not preserve identity at %s" % a
        for a, b, c in product(C.objects, repeat=3):
            for fi in range(C.rank(a, b)):
                f = C.basis_mor(a, b, fi)
                for gi in range(C.rank(b, c)):
                    g = C.basis_mor(b, c, gi)
                    if self.apply(C.compose(g, f)) != D.compose(self.apply(g), self.apply(f)):
                        return ("functor does not preserve composition at "
                                "%s,%s,%s (%d,%d)" % (a, b, c, fi, gi))
        return None


def identity_functor(cat):
    mats = {}
    for (a, b), basis in cat._hom.items():
        n = len(basis)
        cols = []
        for i in range(n):
            col = [cat.field.zero] * n
            col[i] = cat.field.one
            cols.append(tuple(col))
        mats[(a, b)] = tuple(cols)
    return LinFunctor(cat, cat, {a: a for a in cat.objects}, mats, name="id")


def compose_functors(g, f):
    """The composite functor g o f (f applied first)."""
    if f.tgt_cat is not g.src_cat:
        raise ValueError("functors not composable")
    obj_map = {a: g.on_obj(f.on_obj(a)) for a in f.src_cat.objects}
    mats = {}
    for (a, b) in f.mats:
        cols = []
        for i in range(f.src_cat.rank(a, b)):
            m = g.apply(f.apply(f.src_cat.basis_mor(a, b, i)))
            cols.append(m.coords)
        mats[(a, b)] = tuple(cols)
    name = "%s.%s" % (g.name, f.name) if g.name and f.name else ""
    return LinFunctor(f.src_cat, g.tgt_cat, obj_map, mats, name=name)


def compose_functor_chain(functors, src_cat):
    """Fold a chain [F1, F2, ..., Fk] into F1 o F2 o ... o Fk (Fk first).

    An empty chain gives the identity functor of ``src_cat``.
    """
    if not functors:
        return identity_functor(src_cat)
    acc = functors[-1]
    for f in reversed(functors[:-1]):
        acc = compose_functors(f, acc)
    return acc


class NatTransform:
    """A natural transformation: per-object components between two functors."""

    def __init__(self, src_functor, tgt_functor, components):
        self.src_functor = src_functor
        self.tgt_functor = tgt_functor
        self.components = dict(components)  # object of source category -> Mor

    def at(self, a):
        return self.components[a]

    def validate(self):
        F, G = self.src_functor, self.tgt_functor
        C = F.src_cat
        for a in C.objects:
            comp = self.at(a)
            if comp.src != F.on_obj(a) or comp.tgt != G.on_obj(a):
                return "component at %s has wrong endpoints" % a
        D = F.tgt_cat
        for a, b in product(C.objects, repeat=2):
            for fi in range(C.rank(a, b)):
                f = C.basis_mor(a, b, fi)
                lhs = D.compose(G.apply(f), self.at(a))
                rhs = D.compose(self.at(b), F.apply(f))
                if lhs != rhs:
                    return "naturality fails at %s->%s basis %d" % (a, b, fi)
        return None

    def is_invertible(self):
        return all(self.components[a].cat.invert(self.components[a]) is not None
                   for a in self.components)

    def inverse(self):
        comps = {}
        for a, m in self.components.items():
            inv = m.cat.invert(m)
            if inv is None:
                raise ValueError("component at %s is not invertible" % a)
            comps[a] = inv
        return NatTransform(self.tgt_functor, self.src_functor, comps)

    def eq_components(self, other):
        keys = set(self.components)
        if keys != set(other.components):
            return False
        return all(self.components[a] == other.components[a] for a in keys)


def identity_transform(functor):
    comps = {a: functor.tgt_cat.identity(functor.on_obj(a))
             for a in functor.src_cat.objects}
    return NatTransform(functor, functor, comps)


def whisker(pre, t, post):
    """The natural transformation (post) o t o (pre).

    ``pre`` and ``post`` are functor chains in composition order (last entry
    applied first).  The component at A is post(t at pre(A)).
    """
    pre_f = compose_functor_chain(list(pre), t.src_functor.src_cat)
    post_f = compose_functor_chain(list(post), t.src_functor.tgt_cat)
    comps = {}
    for a in pre_f.src_cat.objects:
        comps[a] = post_f.apply(t.at(pre_f.on_obj(a)))
    src = compose_functors(post_f, compose_functors(t.src_functor, pre_f))
    tgt = compose_functors(post_f, compose_functors(t.tgt_functor, pre_f))
    return NatTransform(src, tgt, comps)


def compose_transforms(second, first):
    """Vertical composite: first then second (componentwise composition)."""
    comps = {}
    for a, m in first.components.items():
        comps[a] = m.cat.compose(second.at(a), m)
    return NatTransform(first.src_functor, second.tgt_functor, comps)


class Bimodule:
    """An explicit bimodule over a prestack: free modules M^U(B, A) with
    morphism actions and per-arrow restriction maps.

    Left action: by f: A -> A2, covariantly in the second slot.
    Right action: by g: B2 -> B, contravariantly in the first slot.
    Restriction along u: V -> U maps M^U(B, A) to M^V(u*B, u*A).
    """

    def __init__(self, prestack, bases, left, right, restr):
        self.prestack = prestack
        self.field = prestack.field
        self._bases = bases   # (U, B, A) -> list of names
        self._left = left     # (U, B, A, A2, fi, mi) -> {k: coeff}
        self._right = right   # (U, B, A, B2, gi, mi) -> {k: coeff}
        self._restr = restr   # (u, B, A) -> tuple of columns

    def basis(self, u_obj, b, a):
        return self._bases.get((u_obj, b, a), [])

    def rank(self, u_obj, b, a):
        return len(self.basis(u_obj, b, a))

    def zero(self, u_obj, b, a):
        return [self.field.zero] * self.rank(u_obj, b, a)

    def left_act(self, u_obj, b, f, vec):
        """f . vec for f: A -> A2 in the fiber over u_obj, vec in M(B, A)."""
        F = self.field
        out = [F.zero] * self.rank(u_obj, b, f.tgt)
        for fi, fc in enumerate(f.coords):
            if F.is_zero(fc):
                continue
            for mi, mc in enumerate(vec):
                if F.is_zero(mc):
                    continue
                w = F.mul(fc, mc)
                for k, coeff in self._left.get((u_obj, b, f.src, f.tgt, fi, mi), {}).items():
                    out[k] = F.add(out[k], F.mul(w, coeff))
        return out

    def right_act(self, u_obj, a, vec, b_old, g):
        """vec . g for g: B2 -> B, vec in M(B, A) with B = b_old."""
        F = self.field
        if g.tgt != b_old:
            raise ValueError("right action endpoint mismatch")
        out = [F.zero] * self.rank(u_obj, g.src, a)
        for gi, gc in enumerate(g.coords):
            if F.is_zero(gc):
                continue
            for mi, mc in enumerate(vec):
                if F.is_zero(mc):
                    continue
                w = F.mul(gc, mc)
                for k, coeff in self._right.get((u_obj, b_old, a, g.src, gi, mi), {}).items():
                    out[k] = F.add(out[k], F.mul(w, coeff))
        return out

    def restrict(self, u, b, a, vec):
        """M^u applied to vec in M^{tgt u}(B, A)."""
        F = self.field
        cols = self._restr[(u, b, a)]
        P = self.prestack
        V = P.base.src(u)
        fu = P.restriction(u)
        out = [F.zero] * self.rank(V, fu.on_obj(b), fu.on_obj(a))
        for mi, mc in enumerate(vec):
            if F.is_zero(mc):
                continue
            for k, v in enumerate(cols[mi]):
                out[k] = F.add(out[k], F.mul(mc, v))
        return out

    def validate(self):
        """Exhaustively check action and restriction coherence axioms."""
        P = self.prestack
        F = self.field
        for U in P.base.objects:
            cat = P.fiber(U)
            for b in cat.objects:
                for a in cat.objects:
                    n = self.rank(U, b, a)
                    for mi in range(n):
                        vec = self.zero(U, b, a)
                        vec[mi] = F.one
                        if self.left_act(U, b, cat.identity(a), vec) != vec:
                            return "left unit fails at %s M(%s,%s)[%d]" % (U, b, a, mi)
                        if self.right_act(U, a, vec, b, cat.identity(b)) != vec:
                            return "right unit fails at %s M(%s,%s)[%d]" % (U, b, a, mi)
            for b in cat.objects:
                for a in cat.objects:
                    for a2 in cat.objects:
                        for a3 in cat.objects:
                            for fi in range(cat.rank(a, a2)):
                                f = cat.basis_mor(a, a2, fi)
                                for gi in range(cat.rank(a2, a3)):
                                    g = cat.basis_mor(a2, a3, gi)
                                    for mi in range(self.rank(U, b, a)):
                                        vec = self.zero(U, b, a)
                                        vec[mi] = F.one
                                        two = self.left_act(U, b, g, self.left_act(U, b, f, vec))
                                        one = self.left_act(U, b, cat.compose(g, f), vec)
                                        if one != two:
                                            return "left associativity fails over %s" % U
            # left/right commute
            for b2 in cat.objects:
                for b in cat.objects:
                    for a in cat.objects:
                        for a2 in cat.objects:
                            for gi in range(cat.rank(b2, b)):
                                g = cat.basis_mor(b2, b, gi)
                                for fi in range(cat.rank(a, a2)):
                                    f = cat.basis_mor(a, a2, fi)
                                    for mi in range(self.rank(U, b, a)):
                                        vec = self.zero(U, b, a)
                                        vec[mi] = F.one
                                        lr = self.right_act(U, a2, self.left_act(U, b, f, vec), b, g)
                                        rl = self.left_act(U, b2, f, self.right_act(U, a, vec, b, g))
                                        if lr != rl:
                                            return "left/right actions do not commute over %s" % U
        # restriction coherence: left_act(c, M^v M^u x) == right_act(M^{uv} x, c)
        base = P.base
        for u in base.arrow_ids:
            for v in base.arrow_ids:
                if base.src(u) != base.tgt(v):
                    continue
                uv = base.then(v, u)
                U = base.tgt(u)
                W = base.src(v)
                fu, fv = P.restriction(u), P.restriction(v)
                fuv = P.restriction(uv)
                cat_u = P.fiber(U)
                tw = P.twist(v, u)
                for b in cat_u.objects:
                    for a in cat_u.objects:
                        for mi in range(self.rank(U, b, a)):
                            vec = self.zero(U, b, a)
                            vec[mi] = F.one
                            step = self.restrict(v, fu.on_obj(b), fu.on_obj(a), self.restrict(u, b, a, vec))
                            lhs = self.left_act(W, fv.on_obj(fu.on_obj(b)), tw.at(a), step)
                            rhs = self.right_act(W, fuv.on_obj(a), self.restrict(uv, b, a, vec),
                                                 fuv.on_obj(b), tw.at(b))
                            if lhs != rhs:
                                return "restriction coherence fails at (%s,%s) M(%s,%s)" % (u, v, b, a)
        return None


def diagonal_bimodule(prestack):
    """The bimodule M = A itself: hom modules with composition actions and
    restriction along the structure functors."""
    P = prestack
    F = P.field
    bases = {}
    left = {}
    right = {}
    restr = {}
    for U in P.base.objects:
        cat = P.fiber(U)
        for b in cat.objects:
            for a in cat.objects:
                bases[(U, b, a)] = list(cat.hom_basis(b, a))
        for b in cat.objects:
            for a in cat.objects:
                for a2 in cat.objects:
                    for fi in range(cat.rank(a, a2)):
                        for mi in range(cat.rank(b, a)):
                            tab = cat.compose_basis(b, a, a2, fi, mi)
                            if tab:
                                left[(U, b, a, a2, fi, mi)] = tab
                for b2 in cat.objects:
                    for gi in range(cat.rank(b2, b)):
                        for mi in range(cat.rank(b, a)):
                            tab = cat.compose_basis(b2, b, a, mi, gi)
                            if tab:
                                right[(U, b, a, b2, gi, mi)] = tab
    for u in P.base.arrow_ids:
        U = P.base.tgt(u)
        cat = P.fiber(U)
        fu = P.restriction(u)
        for b in cat.objects:
            for a in cat.objects:
                cols = []
                for mi in range(cat.rank(b, a)):
                    cols.append(fu.apply(cat.basis_mor(b, a, mi)).coords)
                restr[(u, b, a)] = tuple(cols)
    return Bimodule(P, bases, left, right, restr)
