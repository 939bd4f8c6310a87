"""Finite direct categories and diagrams of graded spaces or algebras.

Diagrams that the statements quantify over are contravariant on a direct
category I; internally every computation runs on a covariant diagram over
the opposite category, so limits, derived limits (via the cosimplicial
replacement restricted to nondegenerate chains), and the diagram-level
Andre-Quillen tables share one chain calculus.

The injectivity criterion checks, object by object, that the canonical map
to the matching limit over everything strictly below is surjective
degreewise.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import _kernels as K
from .errors import CrossCheckError, ValidationError
from .homalg import HochschildComplex
from .linalg import (
    BigradedTable,
    GradedMap,
    GradedVectorSpace,
    Subquotient,
)
from .monalg import AlgebraModule, MonomialAlgebra


class FiniteCategory:
    """Objects with a level function, non-identity arrows, composition table.

    ``comp[(f, g)]`` is the composite "g after f" for f: a -> b, g: b -> c.
    Identities are implicit.
    """

    def __init__(self, objects, arrows, comp=None):
        self.objects = {str(o): int(l) for o, l in dict(objects).items()}
        self.arrows = {str(f): (str(s), str(d)) for f, (s, d) in dict(arrows).items()}
        for f, (s, d) in self.arrows.items():
            if s not in self.objects or d not in self.objects:
                raise ValidationError(f"arrow {f!r} has unknown endpoint")
        self.comp = {(str(f), str(g)): str(h) for (f, g), h in dict(comp or {}).items()}

    # --- builders ------------------------------------------------------------

    @classmethod
    def arrow(cls):
        return cls({"0": 0, "1": 1}, {"f": ("0", "1")})

    @classmethod
    def span(cls):
        """x <- z -> y with the apex at level 0."""
        return cls({"z": 0, "x": 1, "y": 1}, {"a": ("z", "x"), "b": ("z", "y")})

    @classmethod
    def poset(cls, levels, relations):
        """Category of a poset: one arrow per strict relation.

        ``relations`` lists covering or general pairs (a, b) meaning a < b;
        arrows for all implied comparabilities and the full composition
        table are generated.
        """
        objs = {str(o): int(l) for o, l in dict(levels).items()}
        less = {o: set() for o in objs}
        for a, b in relations:
            less[str(a)].add(str(b))
        changed = True
        while changed:
            changed = False
            for a in objs:
                for b in list(less[a]):
                    for c in less[b]:
                        if c not in less[a]:
                            less[a].add(c)
                            changed = True
        arrows = {}
        for a in objs:
            for b in less[a]:
                if a == b:
                    raise ValidationError("poset relation a < a")
                arrows[f"{a}<{b}"] = (a, b)
        comp = {}
        for a in objs:
            for b in less[a]:
                for c in less[b]:
                    comp[(f"{a}<{b}", f"{b}<{c}")] = f"{a}<{c}"
        return cls(objs, arrows, comp)

    @classmethod
    def face_poset(cls, vertices, facets, include_empty=True):
        """Face poset of a simplicial complex, levels by cardinality."""
        verts = [str(v) for v in vertices]
        faces = set()
        if include_empty:
            faces.add(frozenset())
        for f in facets:
            f = frozenset(str(v) for v in f)
            if not f <= set(verts):
                raise ValidationError("facet uses unknown vertex")
            for r in range(1, len(f) + 1):
                for sub in itertools.combinations(sorted(f), r):
                    faces.add(frozenset(sub))
        def name(face):
            return "{" + ",".join(sorted(face)) + "}"
        levels = {name(f): len(f) for f in faces}
        relations = [
            (name(a), name(b))
            for a in faces
            for b in faces
            if a < b
        ]
        return cls.poset(levels, relations), {name(f): f for f in faces}

    @classmethod
    def from_json(cls, obj):
        objects = {o["id"]: o.get("lambda", 0) for o in obj["objects"]}
        arrows = {a["id"]: (a["src"], a["dst"]) for a in obj.get("arrows", [])}
        comp = {}
        for row in obj.get("compositions", []):
            comp[(row["first"], row["then"])] = row["equals"]
        cat = cls(objects, arrows, comp)
        if not comp:
            cat._autocomplete_poset_like()
        return cat

    def _autocomplete_poset_like(self):
        """Fill the composition table when arrows are unique per (src, dst)."""
        by_pair = {}
        for f, (s, d) in self.arrows.items():
            if (s, d) in by_pair:
                return  # ambiguous; leave table as given
            by_pair[(s, d)] = f
        for f, (a, b) in self.arrows.items():
            for g, (b2, c) in self.arrows.items():
                if b == b2:
                    h = by_pair.get((a, c))
                    if h is not None:
                        self.comp[(f, g)] = h

    # --- structure ------------------------------------------------------------

    def opposite(self) -> "FiniteCategory":
        arrows = {f: (d, s) for f, (s, d) in self.arrows.items()}
        comp = {(g, f): h for (f, g), h in self.comp.items()}
        return FiniteCategory(self.objects, arrows, comp)

    def compose(self, f, g):
        h = self.comp.get((f, g))
        if h is None:
            raise ValidationError(f"missing composite of {f!r} then {g!r}")
        return h

    def arrows_into(self, obj):
        return [f for f, (_, d) in self.arrows.items() if d == obj]

    def arrows_between(self, a, b):
        return [f for f, (s, d) in self.arrows.items() if s == a and d == b]

    def chains(self, s: int):
        """Nondegenerate chains: (start object, tuple of s composable arrows)."""
        if s == 0:
            return [(o, ()) for o in sorted(self.objects)]
        out = []
        for start, fs in self.chains(s - 1):
            end = self.arrows[fs[-1]][1] if fs else start
            for f, (src, dst) in sorted(self.arrows.items()):
                if src == end:
                    out.append((start, fs + (f,)))
        return out

    def chain_end(self, chain):
        start, fs = chain
        return self.arrows[fs[-1]][1] if fs else start


def validate_direct_category(I: FiniteCategory) -> dict:
    """Level function strictly increases along non-identity arrows, and the
    composition table is closed and associative."""
    violations = []
    for f, (s, d) in I.arrows.items():
        if I.objects[s] >= I.objects[d]:
            violations.append({"kind": "level", "arrow": f,
                               "detail": f"{s} (level {I.objects[s]}) -> {d} (level {I.objects[d]})"})
    for f, (a, b) in I.arrows.items():
        for g, (b2, c) in I.arrows.items():
            if b == b2 and (f, g) not in I.comp:
                violations.append({"kind": "closure", "arrow": f,
                                   "detail": f"no composite for {f} then {g}"})
    for (f, g), h in I.comp.items():
        sa, sb = I.arrows[f]
        ta, tb = I.arrows[g]
        if sb != ta or I.arrows[h] != (sa, tb):
            violations.append({"kind": "composition", "arrow": h,
                               "detail": f"{f};{g} = {h} has mismatched endpoints"})
    for (f, g) in list(I.comp):
        for h, (s3, d3) in I.arrows.items():
            if d3 == I.arrows[f][0] and (h, f) in I.comp:
                left = I.comp.get((I.comp[(h, f)], g))
                right = I.comp.get((h, I.comp[(f, g)]))
                if left != right:
                    violations.append({"kind": "associativity", "arrow": h,
                                       "detail": f"({h};{f});{g} != {h};({f};{g})"})
    return {"valid": not violations, "violations": violations}


# ---------------------------------------------------------------------------
# vector diagrams (covariant over their base)


class VectorDiagram:
    """Covariant functor from a finite category to graded vector spaces."""

    def __init__(self, base: FiniteCategory, values, maps, p: int, validate=True):
        self.base = base
        self.p = p
        self.values = {str(o): v for o, v in values.items()}
        self.maps = {str(f): m for f, m in maps.items()}
        if validate:
            self.validate()

    def value(self, obj) -> GradedVectorSpace:
        return self.values[obj]

    def map(self, f) -> GradedMap:
        return self.maps[f]

    def validate(self):
        for o in self.base.objects:
            if o not in self.values:
                raise ValidationError(f"no value for object {o!r}")
        for f, (s, d) in self.base.arrows.items():
            m = self.maps.get(f)
            if m is None:
                raise ValidationError(f"no map for arrow {f!r}")
            if m.degree != 0:
                raise ValidationError("diagram maps must have degree 0")
            if m.source != self.values[s] or m.target != self.values[d]:
                raise ValidationError(f"map for {f!r} has wrong endpoints")
        for (f, g), h in self.base.comp.items():
            if self.maps[g].compose(self.maps[f]) != self.maps[h]:
                raise ValidationError(f"functoriality fails on {f!r} then {g!r}")


def contravariant_diagram(I: FiniteCategory, values, maps, p) -> VectorDiagram:
    """Package a contravariant diagram on I as a covariant one on I^op.

    ``maps[f]`` for f: a -> b in I must be the map value(b) -> value(a).
    """
    return VectorDiagram(I.opposite(), values, maps, p)


def _limit_block(D: VectorDiagram, degree: int, objs=None, arrows=None):
    """Constraint matrix whose kernel is the limit in one degree."""
    objs = sorted(D.base.objects) if objs is None else list(objs)
    arrows = sorted(D.base.arrows) if arrows is None else list(arrows)
    offs = {}
    n = 0
    for o in objs:
        offs[o] = n
        n += D.value(o).dim(degree)
    rows = []
    for f in arrows:
        s, d = D.base.arrows[f]
        if s not in offs or d not in offs:
            continue
        block = D.map(f).block(degree)
        r = np.zeros((block.shape[0], n), dtype=np.int64)
        if block.size:
            r[:, offs[s]: offs[s] + block.shape[1]] = block
        for i in range(block.shape[0]):
            r[i, offs[d] + i] = (r[i, offs[d] + i] - 1) % D.p
        rows.append(r)
    mat = np.concatenate(rows, axis=0) if rows else np.zeros((0, n), dtype=np.int64)
    return mat, offs, n


def limit_dims(D: VectorDiagram, cap: int, with_basis: bool = False):
    """Degreewise limit of a covariant diagram (equalizer of all arrows)."""
    dims = {}
    basis = {}
    degrees = set()
    for v in D.values.values():
        degrees.update(v.degrees())
    for d in sorted(x for x in degrees if x <= cap):
        mat, offs, n = _limit_block(D, d)
        ker = K.nullspace(mat, D.p)
        if ker.shape[1]:
            dims[d] = ker.shape[1]
            basis[d] = (ker, offs)
    V = GradedVectorSpace(dims)
    return (V, basis) if with_basis else V


def derived_limit_dims(D: VectorDiagram, cap: int) -> BigradedTable:
    """Derived limits via the normalized cosimplicial replacement.

    Entry ``(s, t)`` is the dimension of the s-th derived limit in internal
    degree ``t``; for direct index categories the nondegenerate chain
    complex is finite, so no truncation in ``s`` is needed.
    """
    J = D.base
    max_chain = 0
    s = 0
    while J.chains(s + 1):
        s += 1
        max_chain = s
        if s > len(J.arrows):
            raise ValidationError("category has non-identity cycles")
    chainss = {s: J.chains(s) for s in range(max_chain + 2)}

    degrees = set()
    for v in D.values.values():
        degrees.update(v.degrees())

    entries = {}
    for t in sorted(x for x in degrees if x <= cap):
        spaces = {}
        for s, chains in chainss.items():
            offs = {}
            n = 0
            for c in chains:
                offs[c] = n
                n += D.value(J.chain_end(c)).dim(t)
            spaces[s] = (offs, n)
        mats = {}
        for s in range(max_chain + 1):
            src_offs, src_n = spaces[s]
            tgt_offs, tgt_n = spaces[s + 1]
            mat = np.zeros((tgt_n, src_n), dtype=np.int64)
            for c, off in tgt_offs.items():
                start, fs = c
                end = J.chain_end(c)
                dim_end = D.value(end).dim(t)
                if dim_end == 0:
                    continue
                # faces 0..s keep the last object
                for k in range(s + 1):
                    if k == 0:
                        sub = (J.arrows[fs[0]][1], fs[1:]) if fs else None
                    else:
                        merged = J.compose(fs[k - 1], fs[k])
                        sub = (start, fs[: k - 1] + (merged,) + fs[k + 1:])
                    if sub is None or sub not in src_offs:
                        continue
                    sgn = -1 if k % 2 else 1
                    for i in range(dim_end):
                        mat[off + i, src_offs[sub] + i] = (
                            mat[off + i, src_offs[sub] + i] + sgn
                        ) % D.p
                # last face applies the final map
                sub = (start, fs[:-1])
                if sub in src_offs:
                    block = D.map(fs[-1]).block(t)
                    sgn = -1 if (s + 1) % 2 else 1
                    if block.size:
                        sub_dim = block.shape[1]
                        for i in range(dim_end):
                            for j in range(sub_dim):
                                if block[i, j]:
                                    mat[off + i, src_offs[sub] + j] = (
                                        mat[off + i, src_offs[sub] + j]
                                        + sgn * int(block[i, j])
                                    ) % D.p
            mats[s] = mat
        for s in range(max_chain + 2):
            a = mats.get(s)
            b = mats.get(s - 1)
            if a is not None and b is not None and a.size and b.size:
                if ((a @ b) % D.p).any():
                    raise CrossCheckError("cosimplicial differential fails d*d = 0")
        for s in range(max_chain + 1):
            n = spaces[s][1]
            if n == 0:
                continue
            rank_out = K.rank(mats[s], D.p)
            rank_in = K.rank(mats[s - 1], D.p) if s > 0 else 0
            h = n - rank_out - rank_in
            if h < 0:
                raise CrossCheckError("negative derived-limit dimension")
            if h:
                entries[(s, t)] = h
    return BigradedTable(entries)


# ---------------------------------------------------------------------------
# injectivity criterion


def matching_surjectivity(I: FiniteCategory, D: VectorDiagram, obj, cap: int) -> dict:
    """Surjectivity of value(obj) -> lim over the matching category below.

    ``D`` is the covariant avatar over I^op of a contravariant diagram on
    the direct category I.  The matching category has one object per
    non-identity arrow ``g: j -> obj`` of I.
    """
    gs = [f for f in I.arrows_into(obj)]
    if not gs:
        return {"object": obj, "surjective": True, "degrees_checked": [], "vacuous": True}
    offs = {}
    n = 0
    results = []
    for d in range(cap + 1):
        offs.clear()
        n = 0
        for g in sorted(gs):
            offs[g] = n
            n += D.value(I.arrows[g][0]).dim(d)
        if n == 0:
            continue
        rows = []
        # limit constraints: for h: j -> j' with g' o h = g: F(h) x_{g'} = x_g
        for g in gs:
            j = I.arrows[g][0]
            for g2 in gs:
                j2 = I.arrows[g2][0]
                for h in I.arrows_between(j, j2):
                    if I.comp.get((h, g2)) != g:
                        continue
                    block = D.map(h).block(d)  # F(j') -> F(j) in the op encoding
                    r = np.zeros((block.shape[0], n), dtype=np.int64)
                    if block.size:
                        r[:, offs[g2]: offs[g2] + block.shape[1]] = block
                    for i in range(block.shape[0]):
                        r[i, offs[g] + i] = (r[i, offs[g] + i] - 1) % D.p
                    rows.append(r)
        cons = np.concatenate(rows, axis=0) if rows else np.zeros((0, n), dtype=np.int64)
        ker = K.nullspace(cons, D.p)
        if ker.shape[1] == 0:
            results.append((d, True))
            continue
        # cone map components F(obj) -> F(j) via D.map(g)
        src_dim = D.value(obj).dim(d)
        cone = np.zeros((n, src_dim), dtype=np.int64)
        for g in gs:
            block = D.map(g).block(d)
            if block.size:
                cone[offs[g]: offs[g] + block.shape[0], :] = block
        if cons.size and cone.size and ((cons @ cone) % D.p).any():
            raise CrossCheckError("cone map does not land in the matching limit")
        # image sits inside the limit, so surjectivity is a rank comparison
        results.append((d, K.rank(cone, D.p) == ker.shape[1]))
    failed = [d for d, ok in results if not ok]
    return {
        "object": obj,
        "surjective": not failed,
        "degrees_checked": [d for d, _ in results],
        "failed_degrees": failed,
        "vacuous": False,
    }


def injective_by_criterion(I: FiniteCategory, D: VectorDiagram, cap: int) -> dict:
    """Surjectivity onto the matching limit at every object implies the
    diagram is injective; reports per-object verdicts."""
    report = validate_direct_category(I)
    if not report["valid"]:
        raise ValidationError(f"base category is not direct: {report['violations']}")
    per_object = [matching_surjectivity(I, D, o, cap) for o in sorted(I.objects)]
    return {
        "injective": all(r["surjective"] for r in per_object),
        "objects": per_object,
    }


# ---------------------------------------------------------------------------
# algebra-valued diagrams


class AlgebraDiagram:
    """Covariant diagram of monomial algebras with generator-image maps."""

    def __init__(self, base: FiniteCategory, values, maps, p: int):
        self.base = base
        self.p = p
        self.values = {str(o): v for o, v in values.items()}
        self.maps = {}
        for f, images in maps.items():
            src = self.values[base.arrows[str(f)][0]]
            dst = self.values[base.arrows[str(f)][1]]
            imgs = {}
            sdeg = dict(src.generators)
            for name, _ in src.generators:
                if name not in images:
                    raise ValidationError(f"arrow {f!r}: missing image of {name!r}")
                expr = images[name]
                vec = dst.parse_element(expr) if isinstance(expr, str) else dict(expr)
                d = dst.element_degree(vec)
                if d is not None and d != sdeg[name]:
                    raise ValidationError(f"arrow {f!r}: image of {name!r} has wrong degree")
                imgs[name] = vec
            self.maps[str(f)] = imgs

    def image_of_monomial(self, f, mon) -> dict:
        src = self.values[self.base.arrows[f][0]]
        dst = self.values[self.base.arrows[f][1]]
        out = {dst.one(): 1}
        for (name, _), e in zip(src.generators, mon):
            img = self.maps[f][name]
            for _ in range(e):
                out = dst.mul_elements(out, img)
        return out

    def linearize(self, cap: int) -> VectorDiagram:
        """Matrices of the algebra maps on monomial bases, degree by degree."""
        spaces = {}
        for o, A in self.values.items():
            spaces[o] = GradedVectorSpace(
                {d: len(A.basis(d)) for d in range(cap + 1)},
                {d: tuple(A.monomial_str(m) for m in A.basis(d))
                 for d in range(cap + 1) if A.basis(d)},
            )
        maps = {}
        for f, (s, dte) in self.base.arrows.items():
            src, dst = self.values[s], self.values[dte]
            blocks = {}
            for d in range(cap + 1):
                sb, tb = src.basis(d), dst.basis(d)
                if not sb or not tb:
                    continue
                tidx = {m: i for i, m in enumerate(tb)}
                mat = np.zeros((len(tb), len(sb)), dtype=np.int64)
                for j, mon in enumerate(sb):
                    for mm, c in self.image_of_monomial(f, mon).items():
                        mat[tidx[mm], j] = c
                blocks[d] = mat
            maps[f] = GradedMap(spaces[s], spaces[dte], 0, blocks, self.p)
        return VectorDiagram(self.base, spaces, maps, self.p)


# ---------------------------------------------------------------------------
# diagram-level Andre-Quillen tables


class _AQLocal:
    """AQ^q spaces of one pair (exterior algebra, trivial odd module)."""

    def __init__(self, A: MonomialAlgebra, Mspace: GradedVectorSpace, q_max: int):
        self.A = A
        self.M = AlgebraModule.trivial(A, Mspace)
        self.q_max = q_max
        self.hc = HochschildComplex(A, self.M, q_max + 3)
        self._sub_cache = {}

    def der_basis(self, t: int):
        out = []
        for name, d in self.A.generators:
            for mi in range(self.M.space.dim(d + t)):
                out.append((name, d, mi))
        return out

    def subquotient(self, q: int, t: int) -> Subquotient:
        key = (q, t)
        if key not in self._sub_cache:
            d_out = self.hc.delta(q + 1, t)
            d_in = self.hc.delta(q, t)
            self._sub_cache[key] = Subquotient(d_out, d_in, self.A.p)
        return self._sub_cache[key]

    def dim(self, q: int, t: int) -> int:
        if q == 0:
            return len(self.der_basis(t))
        return self.subquotient(q, t).dim


def _exterior_from_space(p, V: GradedVectorSpace) -> MonomialAlgebra:
    gens = []
    for d in V.degrees():
        if d % 2 == 0 and p != 2:
            raise ValidationError("diagram AQ expects odd-degree algebra generators")
        for i in range(V.dim(d)):
            gens.append((f"e{d}_{i}", d))
    return MonomialAlgebra.exterior(p, gens)


def _algebra_map_elements(src_alg, dst_alg, block_by_degree, p):
    """Generator images in the target algebra from linear degreewise blocks."""
    images = {}
    by_degree_names = {}
    for name, d in dst_alg.generators:
        by_degree_names.setdefault(d, []).append(name)
    src_by_degree = {}
    for name, d in src_alg.generators:
        src_by_degree.setdefault(d, []).append(name)
    for d, names in src_by_degree.items():
        block = block_by_degree(d)
        for j, name in enumerate(names):
            vec = {}
            for i, tname in enumerate(by_degree_names.get(d, [])):
                c = int(block[i, j]) if block.size else 0
                if c:
                    vec[dst_alg.monomial_of(tname)] = c % p
            images[name] = vec
    return images


def _word_map_matrix(hc_src, hc_tgt, phi_images, tgt_alg, level, t, p):
    """Cochain-level restriction Hom(Abar_tgtalg...) along an algebra map.

    ``hc_src`` is the complex of the pair (A1, M); ``hc_tgt`` of (A0, M)
    with an algebra map phi: A0 -> A1 given by ``phi_images`` (monomial
    dicts in A1).  Returns the matrix of psi -> psi o phi^{(x) level}.
    """
    src_basis = hc_src.basis(level, t)
    tgt_basis = hc_tgt.basis(level, t)
    sidx = {b: j for j, b in enumerate(src_basis)}
    mat = np.zeros((len(src_basis), len(tgt_basis)), dtype=np.int64)
    # build per-letter images once
    letter_imgs = []
    for mon, d in hc_tgt.abar:
        img = {tgt_alg.one(): 1}
        for (name, _), e in zip(hc_tgt.A.generators, mon):
            for _ in range(e):
                img = _mul_into(hc_src.A, img, phi_images[name])
        letter_imgs.append((img, d))
    for col, (wi, dv, mi) in enumerate(tgt_basis):
        w = hc_tgt.words[level][wi]
        # expand phi(w) as a combination of source words
        expansion = {(): 1}
        ok = True
        for li in w:
            img, d = letter_imgs[li]
            new = {}
            for word, c in expansion.items():
                for mon, cm in img.items():
                    key = word + (hc_src._abar_idx[(mon, d)],)
                    new[key] = (new.get(key, 0) + c * cm) % p
            expansion = {k: v for k, v in new.items() if v}
            if not expansion:
                ok = False
                break
        if not ok:
            continue
        srcw_idx = _word_index(hc_src, level)
        for word, c in expansion.items():
            w_index = srcw_idx.get(word)
            if w_index is None:
                continue
            row = sidx.get((w_index, dv, mi))
            if row is not None:
                mat[row, col] = (mat[row, col] + c) % p
    return mat


def _word_index(hc, level):
    key = ("_widx", level)
    cache = getattr(hc, "_widx_cache", None)
    if cache is None:
        cache = {}
        hc._widx_cache = cache
    if level not in cache:
        cache[level] = {w: i for i, w in enumerate(hc.words[level])}
    return cache[level]


def _mul_into(alg, elem, factor):
    out = {}
    for m1, c1 in elem.items():
        for m2, c2 in factor.items():
            for m, s in alg.mul(m1, m2).items():
                out[m] = (out.get(m, 0) + c1 * c2 * s) % alg.p
    return {m: c for m, c in out.items() if c}


def diagram_aq_table(I: FiniteCategory, DV: VectorDiagram, DM: VectorDiagram,
                     s_max: int = 4, q_max: int = 3) -> dict:
    """Per AQ-degree q, the cochain complex over nondegenerate chains
    with components AQ^q(A(first), M(last)) and cosimplicial differential;
    returns ``{q: BigradedTable}`` plus the kernel-formula row.

    ``DV``/``DM`` are the covariant avatars over the opposite of the direct
    category ``I``; the algebras are exterior on the V values objectwise.
    """
    J = DV.base
    p = DV.p
    report = validate_direct_category(I)
    if not report["valid"]:
        raise ValidationError("diagram AQ needs a valid direct category")
    notes = []
    for o in J.objects:
        for d in DM.value(o).degrees():
            if d % 2 == 0:
                notes.append(f"module at {o} not odd (degree {d})")
                break

    algs = {o: _exterior_from_space(p, DV.value(o)) for o in J.objects}
    locals_cache: dict[tuple, _AQLocal] = {}

    def local(a_obj, m_obj) -> _AQLocal:
        key = (a_obj, m_obj)
        if key not in locals_cache:
            locals_cache[key] = _AQLocal(algs[a_obj], DM.value(m_obj), q_max)
        return locals_cache[key]

    def phi_images(f):
        src_alg = algs[J.arrows[f][0]]
        dst_alg = algs[J.arrows[f][1]]
        return _algebra_map_elements(
            src_alg, dst_alg, lambda d: DV.map(f).block(d), p
        )

    max_chain = 0
    s = 0
    while J.chains(s + 1) and s < s_max + 1:
        s += 1
        max_chain = s
    chainss = {s: J.chains(s) for s in range(min(max_chain, s_max) + 2)}

    def component(chain):
        start, fs = chain
        return (start, J.chain_end(chain))

    def h_dim(pair, q, t):
        return local(*pair).dim(q, t)

    def restriction_on_h(f, m_obj, q, t):
        """AQ^q(A(j1), M) -> AQ^q(A(j0), M) along the arrow f: j0 -> j1."""
        j0, j1 = J.arrows[f]
        src = local(j1, m_obj)
        tgt = local(j0, m_obj)
        if q == 0:
            sb = src.der_basis(t)
            tb = tgt.der_basis(t)
            mat = np.zeros((len(tb), len(sb)), dtype=np.int64)
            phi = DV.map(f)
            src_names = {}
            for idx, (name, d) in enumerate(algs[j1].generators):
                src_names.setdefault(d, []).append((idx, name))
            for r, (name0, d0, mi) in enumerate(tb):
                names0 = [n for n, dd in algs[j0].generators if dd == d0]
                jcol = names0.index(name0)
                block = phi.block(d0)
                for i, name1 in enumerate([n for n, dd in algs[j1].generators if dd == d0]):
                    c = int(block[i, jcol]) if block.size else 0
                    if c:
                        col = sb.index((name1, d0, mi))
                        mat[r, col] = c % p
            return mat
        srcq = src.subquotient(q, t)
        tgtq = tgt.subquotient(q, t)
        reps = srcq.representatives()
        T = _word_map_matrix(src.hc, tgt.hc, phi_images(f), algs[j0], q + 1, t, p)
        # _word_map_matrix returns matrix of psi -> psi o phi on the cochain
        # bases with rows = source complex of (A1); orientation: it maps
        # C(A1) -> C(A0), i.e. rows indexed by ... build accordingly
        out = np.zeros((tgtq.dim, srcq.dim), dtype=np.int64)
        for jcol in range(srcq.dim):
            img = (T.T @ reps[:, jcol]) % p
            out[:, jcol] = tgtq.coords(img)
        return out

    def postcompose_on_h(pair, f, q, t):
        """AQ^q(A, M(j_s)) -> AQ^q(A, M(j_{s+1})) along the module map."""
        a_obj, m_src = pair
        m_dst = J.arrows[f][1]
        src = local(a_obj, m_src)
        tgt = local(a_obj, m_dst)
        psi = DM.map(f)
        if q == 0:
            sb = src.der_basis(t)
            tb = tgt.der_basis(t)
            mat = np.zeros((len(tb), len(sb)), dtype=np.int64)
            for c, (name, d, mi) in enumerate(sb):
                block = psi.block(d + t)
                for r_i in range(block.shape[0]):
                    v = int(block[r_i, mi]) if block.size else 0
                    if v:
                        row = tb.index((name, d, r_i))
                        mat[row, c] = v % p
            return mat
        srcq = src.subquotient(q, t)
        tgtq = tgt.subquotient(q, t)
        reps = srcq.representatives()
        # cochain-level postcomposition: same words, module index mapped
        sb = src.hc.basis(q + 1, t)
        tb = tgt.hc.basis(q + 1, t)
        tidx = {b: i for i, b in enumerate(tb)}
        T = np.zeros((len(tb), len(sb)), dtype=np.int64)
        for col, (wi, dv, mi) in enumerate(sb):
            block = psi.block(dv)
            for r_i in range(block.shape[0]):
                v = int(block[r_i, mi]) if block.size else 0
                if v:
                    row = tidx.get((wi, dv, r_i))
                    if row is not None:
                        T[row, col] = v % p
        out = np.zeros((tgtq.dim, srcq.dim), dtype=np.int64)
        for jcol in range(srcq.dim):
            out[:, jcol] = tgtq.coords((T @ reps[:, jcol]) % p)
        return out

    degrees = set()
    for o in J.objects:
        for d in DM.value(o).degrees():
            for dd in [0] + list(DV.value(o).degrees()):
                degrees.add(d - dd)
            degrees.add(d)
    for o in J.objects:
        loc = local(o, o)
        for t in loc.hc.t_range(range(q_max + 2)):
            degrees.add(t)

    tables = {}
    kernel_rows = {}
    for q in range(q_max + 1):
        entries = {}
        kernel_entries = {}
        for t in sorted(degrees):
            spaces = {}
            for s in range(min(max_chain, s_max) + 2):
                offs = {}
                n = 0
                for c in chainss.get(s, []):
                    offs[c] = n
                    n += h_dim(component(c), q, t)
                spaces[s] = (offs, n)
            mats = {}
            for s in range(min(max_chain, s_max) + 1):
                src_offs, src_n = spaces[s]
                tgt_offs, tgt_n = spaces.get(s + 1, ({}, 0))
                mat = np.zeros((tgt_n, src_n), dtype=np.int64)
                for c, off in tgt_offs.items():
                    start, fs = c
                    pair_c = component(c)
                    dim_c = h_dim(pair_c, q, t)
                    if dim_c == 0:
                        continue
                    # face 0: restriction along the first arrow
                    sub0 = (J.arrows[fs[0]][1], fs[1:])
                    if sub0 in src_offs:
                        R = restriction_on_h(fs[0], component(sub0)[1], q, t)
                        for i in range(R.shape[0]):
                            for jj in range(R.shape[1]):
                                if R[i, jj]:
                                    mat[off + i, src_offs[sub0] + jj] = (
                                        mat[off + i, src_offs[sub0] + jj] + R[i, jj]
                                    ) % p
                    # middle faces: identity blocks
                    for k in range(1, s + 1):
                        merged = J.compose(fs[k - 1], fs[k])
                        sub = (start, fs[: k - 1] + (merged,) + fs[k + 1:])
                        if sub in src_offs:
                            sgn = -1 if k % 2 else 1
                            for i in range(dim_c):
                                mat[off + i, src_offs[sub] + i] = (
                                    mat[off + i, src_offs[sub] + i] + sgn
                                ) % p
                    # last face: postcompose the module map
                    sub = (start, fs[:-1])
                    if sub in src_offs:
                        P = postcompose_on_h(component(sub), fs[-1], q, t)
                        sgn = -1 if (s + 1) % 2 else 1
                        for i in range(P.shape[0]):
                            for jj in range(P.shape[1]):
                                if P[i, jj]:
                                    mat[off + i, src_offs[sub] + jj] = (
                                        mat[off + i, src_offs[sub] + jj] + sgn * P[i, jj]
                                    ) % p
                mats[s] = mat
            for s in range(min(max_chain, s_max) + 1):
                a = mats.get(s)
                b = mats.get(s - 1)
                if a is not None and b is not None and a.size and b.size:
                    if ((a @ b) % p).any():
                        raise CrossCheckError("diagram AQ cosimplicial d*d != 0")
            for s in range(min(max_chain, s_max) + 1):
                n = spaces[s][1]
                if n == 0:
                    continue
                rank_out = K.rank(mats[s], p)
                rank_in = K.rank(mats[s - 1], p) if s > 0 else 0
                h = n - rank_out - rank_in
                if h < 0:
                    raise CrossCheckError("negative diagram AQ dimension")
                if h:
                    entries[(s, t)] = h
                if s == 0:
                    kdim = n - rank_out
                    if kdim:
                        kernel_entries[t] = kdim
        tables[q] = BigradedTable(entries)
        kernel_rows[q] = kernel_entries
    return {"tables": tables, "kernel_formula": kernel_rows, "notes": notes}
