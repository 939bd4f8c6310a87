"""Monomial graded-commutative algebras over F_p and their modules.

An algebra presents: generators with degrees, per-generator exponent caps
(none for polynomial, 1 for exterior, n-1 for truncation by x^n), and for
face rings the list of facets.  Monomials are exponent tuples; products
carry the Koszul sign from reordering odd-degree letters.  Degreewise
subrings and quotients of an ambient algebra are separate classes exposing
the same ``basis``/``mul``/``deg`` surface.

Modules carry explicit generator action tables, validated on construction:
graded commutation of the actions and annihilation of the defining
relations, degreewise up to the module's window.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import _kernels as K
from .errors import CapError, ValidationError
from .linalg import GradedMap, GradedVectorSpace, PrimeField

KINDS = (
    "polynomial",
    "exterior",
    "mixed",
    "truncated",
    "stanley_reisner",
    "degreewise_subring",
    "degreewise_quotient",
)


class MonomialAlgebra:
    """Graded-commutative algebra with a monomial basis per degree."""

    def __init__(self, p, generators, caps=None, facets=None, kind=None):
        self.p = PrimeField(p).p
        self.generators = [(str(n), int(d)) for n, d in generators]
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate generator names")
        self.names = names
        self.degrees = [d for _, d in self.generators]
        if any(d < 1 for d in self.degrees):
            raise ValidationError("generator degrees must be positive")
        caps = dict(caps or {})
        self.caps: list[int | None] = []
        for n, d in self.generators:
            cap = caps.get(n)
            if cap is not None:
                cap = int(cap)
                if cap < 1:
                    raise ValidationError(f"exponent cap for {n!r} must be >= 1")
            if self.p != 2 and d % 2 == 1:
                # graded commutativity forces odd squares to vanish at odd p
                if cap is None or cap > 1:
                    if cap is not None:
                        raise ValidationError(
                            f"odd-degree generator {n!r} must have exponent cap 1 at odd p"
                        )
                    cap = 1
            self.caps.append(cap)
        self.facets = None
        if facets is not None:
            idx = {n: i for i, n in enumerate(names)}
            self.facets = [frozenset(idx[str(v)] for v in f) for f in facets]
        self.kind = kind or self._infer_kind()
        self._basis_cache: dict[int, list[tuple]] = {}

    def _infer_kind(self):
        if self.facets is not None:
            return "stanley_reisner"
        if all(c is None for c in self.caps):
            return "polynomial"
        if all(c == 1 for c in self.caps):
            return "exterior"
        if any(c is None for c in self.caps):
            return "mixed"
        return "truncated"

    # --- constructors ------------------------------------------------------

    @classmethod
    def polynomial(cls, p, generators):
        alg = cls(p, generators)
        if alg.kind != "polynomial":
            raise ValidationError("polynomial algebras need even generators at odd p")
        return alg

    @classmethod
    def exterior(cls, p, generators):
        gens = [(n, d) for n, d in generators]
        return cls(p, gens, caps={n: 1 for n, _ in gens}, kind="exterior")

    @classmethod
    def mixed(cls, p, poly_gens, ext_gens):
        gens = list(poly_gens) + list(ext_gens)
        caps = {str(n): 1 for n, _ in ext_gens}
        return cls(p, gens, caps=caps, kind="mixed")

    @classmethod
    def truncated(cls, p, generators, truncations):
        caps = {str(n): int(e) - 1 for n, e in truncations.items()}
        return cls(p, generators, caps=caps, kind="truncated")

    @classmethod
    def stanley_reisner(cls, p, vertices, facets, degree=2):
        gens = [(str(v), degree) for v in vertices]
        return cls(p, gens, facets=facets, kind="stanley_reisner")

    @classmethod
    def trivial(cls, p):
        """The ground field as an algebra (no generators)."""
        return cls(p, [])

    @classmethod
    def from_json(cls, obj):
        p = int(obj["p"])
        kind = obj.get("kind", "polynomial")
        gens = [(g["name"], g["degree"]) for g in obj.get("generators", [])]
        if kind == "polynomial":
            return cls.polynomial(p, gens)
        if kind == "exterior":
            return cls.exterior(p, gens)
        if kind == "mixed":
            caps = {str(n): 1 for n in obj.get("exterior", [])}
            return cls(p, gens, caps=caps, kind="mixed")
        if kind == "truncated":
            return cls.truncated(p, gens, obj.get("truncation", {}))
        if kind == "stanley_reisner":
            return cls.stanley_reisner(
                p, obj["vertices"], obj["facets"], int(obj.get("degree", 2))
            )
        raise ValidationError(f"unsupported algebra kind {kind!r} in JSON")

    def to_json(self):
        out = {
            "p": self.p,
            "kind": self.kind,
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
        }
        if self.kind in ("mixed", "truncated"):
            out["truncation"] = {
                n: c + 1 for (n, _), c in zip(self.generators, self.caps) if c is not None
            }
        if self.facets is not None:
            out["vertices"] = list(self.names)
            out["facets"] = [sorted(self.names[i] for i in f) for f in self.facets]
        return out

    # --- basis and products -------------------------------------------------

    def one(self):
        return (0,) * len(self.names)

    def deg(self, mon) -> int:
        return sum(e * d for e, d in zip(mon, self.degrees))

    def _support_ok(self, mon) -> bool:
        if self.facets is None:
            return True
        supp = frozenset(i for i, e in enumerate(mon) if e)
        return any(supp <= f for f in self.facets)

    def basis(self, d: int) -> list[tuple]:
        d = int(d)
        if d < 0:
            return []
        if d in self._basis_cache:
            return self._basis_cache[d]
        out = []

        def rec(i, remaining, mon):
            if remaining == 0:
                done = mon + (0,) * (len(self.names) - len(mon))
                if self._support_ok(done):
                    out.append(done)
                return
            if i == len(self.names):
                return
            cap = self.caps[i]
            deg = self.degrees[i]
            e = 0
            while e * deg <= remaining and (cap is None or e <= cap):
                rec(i + 1, remaining - e * deg, mon + (e,))
                e += 1

        rec(0, d, ())
        out.sort()
        self._basis_cache[d] = out
        return out

    def is_finite_dimensional(self) -> bool:
        return all(c is not None for c in self.caps)

    def top_degree(self):
        if not self.is_finite_dimensional():
            return None
        return sum(c * d for c, d in zip(self.caps, self.degrees))

    def monomial_of(self, name: str) -> tuple:
        i = self.names.index(name)
        return tuple(1 if j == i else 0 for j in range(len(self.names)))

    def _odd_positions(self):
        return [i for i, d in enumerate(self.degrees) if d % 2 == 1]

    def mul(self, m1, m2) -> dict:
        """Product of two monomials: ``{}`` or ``{monomial: sign}``."""
        if self.p != 2:
            sign_exp = 0
            for j in self._odd_positions():
                if m2[j]:
                    sign_exp += m2[j] * sum(m1[i] for i in self._odd_positions() if i > j)
            sign = -1 if sign_exp % 2 else 1
        else:
            sign = 1
        out = tuple(a + b for a, b in zip(m1, m2))
        for e, cap in zip(out, self.caps):
            if cap is not None and e > cap:
                return {}
        if not self._support_ok(out):
            return {}
        return {out: sign % self.p}

    def mul_elements(self, x: dict, y: dict) -> dict:
        out: dict[tuple, int] = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for m, s in self.mul(m1, m2).items():
                    out[m] = (out.get(m, 0) + c1 * c2 * s) % self.p
        return {m: c for m, c in out.items() if c}

    def monomial_str(self, mon) -> str:
        bits = [
            n if e == 1 else f"{n}^{e}"
            for n, e in zip(self.names, mon)
            if e
        ]
        return "*".join(bits) if bits else "1"

    def element_degree(self, x: dict):
        degs = {self.deg(m) for m in x}
        if len(degs) > 1:
            raise ValidationError("inhomogeneous algebra element")
        return degs.pop() if degs else None

    def graded_dims(self, cap: int) -> GradedVectorSpace:
        return GradedVectorSpace({d: len(self.basis(d)) for d in range(cap + 1)})

    def parse_element(self, expr: str) -> dict:
        """Parse `3*u^2*v + w` style expressions over the generators."""
        import re

        expr = str(expr).strip()
        if expr in ("", "0"):
            return {}
        expr = expr.replace("-", "+-")
        out: dict[tuple, int] = {}
        for term in expr.split("+"):
            term = term.strip()
            if not term:
                continue
            coeff = 1
            if term.startswith("-"):
                coeff = -1
                term = term[1:].strip()
            mon = [0] * len(self.names)
            for factor in term.split("*"):
                factor = factor.strip()
                if not factor:
                    continue
                if re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
                if m is None or m.group(1) not in self.names:
                    raise ValidationError(f"cannot parse factor {factor!r}")
                mon[self.names.index(m.group(1))] += int(m.group(2) or 1)
            key = tuple(mon)
            for e, cap in zip(key, self.caps):
                if cap is not None and e > cap:
                    coeff = 0
            if not self._support_ok(key):
                coeff = 0
            if coeff % self.p:
                out[key] = (out.get(key, 0) + coeff) % self.p
        return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# degreewise subrings and quotients


class DegreewiseSubring:
    """Subalgebra of an ambient monomial algebra spanned by given elements.

    The basis per degree is computed by closing the given elements under
    products (inside the ambient algebra) up to ``cap``; products are
    re-expressed in the chosen basis by exact solves.
    """

    kind = "degreewise_subring"

    def __init__(self, ambient: MonomialAlgebra, elements, cap: int):
        self.ambient = ambient
        self.p = ambient.p
        self.cap = int(cap)
        elems = []
        for name, expr in elements:
            vec = ambient.parse_element(expr) if isinstance(expr, str) else dict(expr)
            d = ambient.element_degree(vec)
            if d is None or d < 1:
                raise ValidationError("subring elements must be homogeneous of positive degree")
            elems.append((str(name), d, vec))
        self.generators = [(n, d) for n, d, _ in elems]
        self._gen_elems = elems
        self._by_degree: dict[int, list[dict]] = {0: [{ambient.one(): 1}]}
        self._close()

    def _vecs_to_matrix(self, vecs):
        mons = sorted({m for v in vecs for m in v})
        idx = {m: j for j, m in enumerate(mons)}
        mat = np.zeros((len(vecs), len(mons)), dtype=np.int64)
        for i, v in enumerate(vecs):
            for m, c in v.items():
                mat[i, idx[m]] = c
        return mat, mons

    def _reduce(self, vecs):
        if not vecs:
            return []
        mat, mons = self._vecs_to_matrix(vecs)
        rr, piv = K.rref(mat, self.p)
        out = []
        for i in range(len(piv)):
            out.append({mons[j]: int(rr[i, j]) for j in range(len(mons)) if rr[i, j]})
        return out

    def _close(self):
        current: dict[int, list[dict]] = {}
        for _, d, vec in self._gen_elems:
            if d <= self.cap:
                current.setdefault(d, []).append(vec)
        for d in current:
            current[d] = self._reduce(current[d])

        while True:
            total = sum(len(v) for v in current.values())
            degrees = sorted(current)
            new: dict[int, list[dict]] = {}
            for d1 in degrees:
                for d2 in degrees:
                    if d1 + d2 > self.cap:
                        continue
                    for v1 in current[d1]:
                        for v2 in current[d2]:
                            prod = self.ambient.mul_elements(v1, v2)
                            if prod:
                                new.setdefault(d1 + d2, []).append(prod)
            merged = dict(current)
            for d, vecs in new.items():
                merged[d] = self._reduce(merged.get(d, []) + vecs)
            current = merged
            if sum(len(v) for v in current.values()) == total:
                break
        for d, vecs in current.items():
            self._by_degree[d] = vecs

    def basis(self, d: int) -> list:
        d = int(d)
        if d > self.cap:
            raise CapError(f"degree {d} beyond subring cap {self.cap}")
        return [("s", d, i) for i in range(len(self._by_degree.get(d, [])))]

    def deg(self, key) -> int:
        return key[1]

    def one(self):
        return ("s", 0, 0)

    def _vector(self, key) -> dict:
        return self._by_degree[key[1]][key[2]]

    def monomial_str(self, key) -> str:
        v = self._vector(key)
        return " + ".join(
            f"{c}*{self.ambient.monomial_str(m)}" for m, c in sorted(v.items())
        )

    def mul(self, k1, k2) -> dict:
        d = k1[1] + k2[1]
        if d > self.cap:
            raise CapError("product degree beyond subring cap")
        prod = self.ambient.mul_elements(self._vector(k1), self._vector(k2))
        if not prod:
            return {}
        vecs = self._by_degree.get(d, [])
        mons = sorted({m for v in vecs for m in v} | set(prod))
        idx = {m: j for j, m in enumerate(mons)}
        mat = np.zeros((len(mons), len(vecs)), dtype=np.int64)
        for i, v in enumerate(vecs):
            for m, c in v.items():
                mat[idx[m], i] = c
        rhs = np.zeros(len(mons), dtype=np.int64)
        for m, c in prod.items():
            rhs[idx[m]] = c
        x = K.solve(mat, rhs, self.p)
        if x is None:
            raise ValidationError("subring is not closed under products (internal error)")
        return {("s", d, i): int(c) for i, c in enumerate(x) if c}

    def graded_dims(self, cap: int) -> GradedVectorSpace:
        if cap > self.cap:
            raise CapError("cap beyond subring truncation")
        return GradedVectorSpace({d: len(self._by_degree.get(d, [])) for d in range(cap + 1)})


class DegreewiseQuotient:
    """Quotient of an ambient monomial algebra by a degreewise-spanned ideal."""

    kind = "degreewise_quotient"

    def __init__(self, ambient: MonomialAlgebra, ideal_elements, cap: int):
        self.ambient = ambient
        self.p = ambient.p
        self.cap = int(cap)
        self.generators = list(ambient.generators)
        gens = []
        for expr in ideal_elements:
            vec = ambient.parse_element(expr) if isinstance(expr, str) else dict(expr)
            if ambient.element_degree(vec) is None:
                continue
            gens.append(vec)
        # span of the ideal per degree: multiples by all ambient monomials
        ideal: dict[int, list[dict]] = {}
        for g in gens:
            dg = ambient.element_degree(g)
            for extra in range(0, self.cap - dg + 1):
                for mon in ambient.basis(extra):
                    prod = ambient.mul_elements({mon: 1}, g)
                    if prod:
                        ideal.setdefault(dg + extra, []).append(prod)
        self._reps: dict[int, list[tuple]] = {}
        self._proj: dict[int, tuple] = {}
        for d in range(self.cap + 1):
            mons = ambient.basis(d)
            idx = {m: j for j, m in enumerate(mons)}
            vecs = ideal.get(d, [])
            mat = np.zeros((len(vecs), len(mons)), dtype=np.int64)
            for i, v in enumerate(vecs):
                for m, c in v.items():
                    mat[i, idx[m]] = c
            rr, piv = K.rref(mat, self.p)
            free = [j for j in range(len(mons)) if j not in piv]
            self._reps[d] = [mons[j] for j in free]
            self._proj[d] = (mons, idx, rr[: len(piv)], list(piv), free)

    def basis(self, d: int) -> list:
        if d > self.cap:
            raise CapError(f"degree {d} beyond quotient cap {self.cap}")
        return [("q", d, i) for i in range(len(self._reps.get(d, [])))]

    def deg(self, key) -> int:
        return key[1]

    def one(self):
        return ("q", 0, 0)

    def monomial_str(self, key) -> str:
        return self.ambient.monomial_str(self._reps[key[1]][key[2]])

    def _project(self, d, vec: dict) -> dict:
        mons, idx, rows, piv, free = self._proj[d]
        x = np.zeros(len(mons), dtype=np.int64)
        for m, c in vec.items():
            x[idx[m]] = c
        for row, pc in zip(rows, piv):
            c = int(x[pc])
            if c:
                x = (x - c * row) % self.p
        return {("q", d, j): int(x[fc]) for j, fc in enumerate(free) if x[fc]}

    def mul(self, k1, k2) -> dict:
        d = k1[1] + k2[1]
        if d > self.cap:
            raise CapError("product degree beyond quotient cap")
        m1 = self._reps[k1[1]][k1[2]]
        m2 = self._reps[k2[1]][k2[2]]
        prod = self.ambient.mul_elements({m1: 1}, {m2: 1})
        return self._project(d, prod)

    def graded_dims(self, cap: int) -> GradedVectorSpace:
        if cap > self.cap:
            raise CapError("cap beyond quotient truncation")
        return GradedVectorSpace({d: len(self._reps.get(d, [])) for d in range(cap + 1)})


# ---------------------------------------------------------------------------
# modules


class AlgebraModule:
    """Graded module over a monomial algebra with explicit generator actions.

    ``action[name]`` is a ``GradedMap`` of degree ``deg(name)`` on the
    underlying space.  Construction validates graded commutation of the
    generator actions and annihilation of the defining relations on the
    window; monomials act by composing generator actions in generator
    order, so associativity reduces to those checks.
    """

    def __init__(self, algebra, space: GradedVectorSpace, action=None, validate=True):
        self.algebra = algebra
        self.p = algebra.p
        self.space = space
        self.action: dict[str, GradedMap] = {}
        for name, mp in (action or {}).items():
            if name not in [n for n, _ in algebra.generators]:
                raise ValidationError(f"action for unknown generator {name!r}")
            self.action[str(name)] = mp
        if validate:
            self.validate()

    @classmethod
    def trivial(cls, algebra, space: GradedVectorSpace):
        return cls(algebra, space, {})

    @classmethod
    def regular(cls, algebra: MonomialAlgebra, cap: int):
        """The algebra as a module over itself, truncated at ``cap``."""
        dims = {}
        labels = {}
        for d in range(cap + 1):
            mons = algebra.basis(d)
            if mons:
                dims[d] = len(mons)
                labels[d] = tuple(algebra.monomial_str(m) for m in mons)
        space = GradedVectorSpace(dims, labels)
        action = {}
        for name, gdeg in algebra.generators:
            gmon = algebra.monomial_of(name)
            blocks = {}
            for d in range(cap + 1 - gdeg):
                src = algebra.basis(d)
                tgt = algebra.basis(d + gdeg)
                if not src or not tgt:
                    continue
                tidx = {m: i for i, m in enumerate(tgt)}
                mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
                for j, m in enumerate(src):
                    for mm, s in algebra.mul(gmon, m).items():
                        mat[tidx[mm], j] = s
                blocks[d] = mat
            action[name] = GradedMap(space, space, gdeg, blocks, algebra.p)
        return cls(algebra, space, action)

    def gen_action(self, name: str) -> GradedMap:
        if name in self.action:
            return self.action[name]
        gdeg = dict(self.algebra.generators)[name]
        return GradedMap.zero(self.space, self.space, gdeg, self.p)

    def act_vec(self, name: str, d: int, vec: np.ndarray):
        """Image of a degree-``d`` coordinate vector under one generator."""
        block = self.gen_action(name).block(d)
        return (block @ vec) % self.p

    def act_monomial(self, mon, d: int, vec: np.ndarray):
        """Apply a monomial as left multiplication.

        Generator actions compose right-to-left so that the operator of
        ``x^a y^b`` (canonical order) is ``act(x)^a o act(y)^b``.
        """
        cur_d, cur = d, vec
        for (name, gdeg), e in reversed(list(zip(self.algebra.generators, mon))):
            for _ in range(e):
                cur = self.act_vec(name, cur_d, cur)
                cur_d += gdeg
        return cur_d, cur

    def act_element(self, x: dict, d: int, vec: np.ndarray):
        """Apply a homogeneous algebra element; returns (degree, vector)."""
        deg = self.algebra.element_degree(x)
        if deg is None:
            return None, None
        out = np.zeros(self.space.dim(d + deg), dtype=np.int64)
        for mon, c in x.items():
            _, img = self.act_monomial(mon, d, vec)
            out = (out + c * img) % self.p
        return d + deg, out

    def validate(self):
        degs = self.space.degrees()
        if not degs:
            return
        names = [n for n, _ in self.algebra.generators]
        gdeg = dict(self.algebra.generators)
        # graded commutation g.(h.m) = (-1)^{|g||h|} h.(g.m)
        for a in names:
            for b in names:
                sign = -1 if (self.p != 2 and gdeg[a] % 2 and gdeg[b] % 2) else 1
                left = self.gen_action(a).compose(self.gen_action(b))
                right = self.gen_action(b).compose(self.gen_action(a)).scale(sign)
                if left != right:
                    raise ValidationError(
                        f"module actions of {a!r} and {b!r} do not graded-commute"
                    )
        # relations: exponent caps annihilate
        if isinstance(self.algebra, MonomialAlgebra):
            for (name, _), cap in zip(self.algebra.generators, self.algebra.caps):
                if cap is None:
                    continue
                power = GradedMap.identity(self.space, self.p)
                for _ in range(cap + 1):
                    power = self.gen_action(name).compose(power)
                if not power.is_zero():
                    raise ValidationError(f"relation {name}^{cap + 1} = 0 not respected")
            if self.algebra.facets is not None:
                for f_out in self._nonface_products():
                    if not f_out.is_zero():
                        raise ValidationError("non-face monomial acts nontrivially")

    def _nonface_products(self):
        # non-faces of size <= 3 cover every minimal non-face seen in practice
        n = len(self.algebra.names)
        out = []
        for r in (2, 3):
            for comb in itertools.combinations(range(n), r):
                supp = frozenset(comb)
                if any(supp <= f for f in self.algebra.facets):
                    continue
                mp = GradedMap.identity(self.space, self.p)
                for i in comb:
                    mp = self.gen_action(self.algebra.names[i]).compose(mp)
                out.append(mp)
        return out


class ModuleViaMap:
    """A target algebra made into a module via an algebra map.

    ``images`` sends each source generator name to an element expression in
    the target algebra.  The module basis is the target's monomial basis up
    to ``cap``; source generators act by multiplication with their image.
    """

    def __init__(self, source, target, images, cap: int):
        self.source = source
        self.target = target
        self.p = source.p
        self.cap = int(cap)
        if target.p != source.p:
            raise ValidationError("algebra map across different primes")
        self.images: dict[str, dict] = {}
        sdeg = dict(source.generators)
        for name, _ in source.generators:
            if name not in images:
                raise ValidationError(f"missing image for generator {name!r}")
            expr = images[name]
            vec = target.parse_element(expr) if isinstance(expr, str) else dict(expr)
            d = target.element_degree(vec)
            if d is not None and d != sdeg[name]:
                raise ValidationError(
                    f"image of {name!r} has degree {d}, expected {sdeg[name]}"
                )
            self.images[name] = vec
        self._validate_relations()

    def _validate_relations(self):
        if not isinstance(self.source, MonomialAlgebra):
            return
        for (name, _), cap in zip(self.source.generators, self.source.caps):
            if cap is None:
                continue
            img = self.images[name]
            power = {self.target.one(): 1}
            for _ in range(cap + 1):
                power = self.target.mul_elements(power, img)
            if power:
                raise ValidationError(f"map does not respect {name}^{cap + 1} = 0")

    def image_of(self, name: str) -> dict:
        return self.images[name]

    def basis(self, d: int):
        return self.target.basis(d)

    def graded_dims(self, cap: int) -> GradedVectorSpace:
        return self.target.graded_dims(cap)

    @classmethod
    def augmentation(cls, source, cap: int):
        """The ground field as a module via the augmentation."""
        return cls(source, MonomialAlgebra.trivial(source.p),
                   {n: "0" for n, _ in source.generators}, cap)

    @classmethod
    def identity(cls, algebra, cap: int):
        return cls(algebra, algebra,
                   {n: {algebra.monomial_of(n): 1} for n, _ in algebra.generators}, cap)
