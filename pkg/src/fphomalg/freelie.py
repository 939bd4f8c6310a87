"""Free shifted restricted Lie algebras realized in the tensor algebra.

A generator of (cohomological) degree ``n`` is realized as a letter of
shifted degree ``n - 1``; words live in the tensor algebra on the
desuspended generators, where the degree ``-1`` bracket becomes the graded
commutator ``[a, b] = ab - (-1)^{s(a) s(b)} ba`` on shifted degrees and the
restriction becomes the p-th tensor power.  Everything downstream is exact
arithmetic mod p.

Two independent routes to the dimensions of the free algebras coexist:

* symbol counting: Lyndon words (necklace counts per multidegree) plus
  self-brackets ``[b, b]`` for odd p on even-degree symbols, plus
  restriction towers ``d -> p d - p + 1``;
* brute-force closure oracles inside the tensor algebra, spanning brackets
  (and p-th powers) until the degreewise dimensions stabilize.

The basis builders cross-check the two routes and raise ``CrossCheckError``
on any disagreement instead of trusting either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import (
    AlphabetError,
    CapError,
    CrossCheckError,
    ParityDomainError,
    ValidationError,
)
from .linalg import GradedVectorSpace, PrimeField

DEFAULT_WEIGHT_CAP = 10
MAX_GENERATORS = 4


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValidationError(f"generator {self.name!r} must have degree >= 1")


def parse_generators(obj) -> list[Generator]:
    """Read ``[{"name": "x", "degree": 2}, ...]``."""
    gens = [Generator(str(g["name"]), int(g["degree"])) for g in obj]
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        raise ValidationError("generator names must be unique")
    return gens


class Alphabet:
    """Ordered generator list with its prime, shared by tensor elements."""

    def __init__(self, gens, p: int):
        self.p = PrimeField(p).p
        self.gens = tuple(gens)
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise ValidationError("generator names must be unique")
        if not self.gens:
            raise ValidationError("empty generator list")
        if len(self.gens) > MAX_GENERATORS:
            raise CapError(f"at most {MAX_GENERATORS} generators supported")
        self.names = tuple(names)
        self.vdegs = tuple(g.degree for g in self.gens)
        self.wdegs = tuple(g.degree - 1 for g in self.gens)

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and other.p == self.p
            and other.names == self.names
            and other.vdegs == self.vdegs
        )

    def __hash__(self):
        return hash((self.p, self.names, self.vdegs))

    def word_sdeg(self, word) -> int:
        return sum(self.wdegs[i] for i in word)

    def word_str(self, word) -> str:
        return "".join(self.names[i] for i in word) if word else "1"


class TensorElement:
    """Homogeneous F_p-linear combination of words in the shifted letters."""

    __slots__ = ("alphabet", "terms", "sdeg")

    def __init__(self, alphabet: Alphabet, terms):
        self.alphabet = alphabet
        p = alphabet.p
        clean = {}
        for word, c in terms.items():
            c %= p
            if c:
                clean[tuple(word)] = c
        self.terms = clean
        sdegs = {alphabet.word_sdeg(w) for w in clean}
        if len(sdegs) > 1:
            raise ValidationError("tensor element is not homogeneous")
        self.sdeg = sdegs.pop() if sdegs else None

    @classmethod
    def zero(cls, alphabet):
        return cls(alphabet, {})

    @classmethod
    def from_generator(cls, alphabet, name):
        return cls(alphabet, {(alphabet.names.index(name),): 1})

    @classmethod
    def from_word(cls, alphabet, word, coeff=1):
        return cls(alphabet, {tuple(word): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def v_degree(self):
        """Unshifted degree: shifted degree plus one."""
        return None if self.sdeg is None else self.sdeg + 1

    @property
    def weight(self):
        return max((len(w) for w in self.terms), default=0)

    def _check(self, other):
        if self.alphabet != other.alphabet:
            raise AlphabetError("elements over different alphabets or primes")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return TensorElement(self.alphabet, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: int):
        return TensorElement(self.alphabet, {w: v * c for w, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and other.alphabet == self.alphabet
            and other.terms == self.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            bits.append(f"{c}*{self.alphabet.word_str(w)}" if c != 1 else self.alphabet.word_str(w))
        return " + ".join(bits)


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    """Concatenation product, bilinear over F_p."""
    a._check(b)
    terms = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            terms[w] = terms.get(w, 0) + c1 * c2
    return TensorElement(a.alphabet, terms)


def shifted_bracket(a: TensorElement, b: TensorElement) -> TensorElement:
    """Degree ``-1`` bracket: graded commutator on the shifted grading."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return TensorElement.zero(a.alphabet)
    sign = -1 if (a.sdeg * b.sdeg) % 2 else 1
    return tensor_mul(a, b) - tensor_mul(b, a).scale(sign)


def restriction_power(a: TensorElement) -> TensorElement:
    """p-th tensor power; at odd p only defined on odd unshifted degree."""
    p = a.alphabet.p
    if a.is_zero():
        return a
    if p != 2 and a.sdeg % 2 == 1:
        raise ParityDomainError(
            "xi is zero on even degree elements (restriction needs odd unshifted degree)"
        )
    out = a
    for _ in range(p - 1):
        out = tensor_mul(out, a)
    return out


def ad_power(y: TensorElement, x: TensorElement, k: int) -> TensorElement:
    """k-fold iterated bracket ``[...[[x, y], y]..., y]``."""
    out = x
    for _ in range(k):
        out = shifted_bracket(out, y)
    return out


# ---------------------------------------------------------------------------
# spans in the tensor algebra


def span_dims(elements, p: int) -> GradedVectorSpace:
    """Dimensions (per unshifted degree) of the span of tensor elements."""
    by_sdeg: dict[int, list[TensorElement]] = {}
    for e in elements:
        if not e.is_zero():
            by_sdeg.setdefault(e.sdeg, []).append(e)
    dims = {}
    for sdeg, elems in by_sdeg.items():
        words = sorted({w for e in elems for w in e.terms})
        idx = {w: j for j, w in enumerate(words)}
        mat = np.zeros((len(elems), len(words)), dtype=np.int64)
        for i, e in enumerate(elems):
            for w, c in e.terms.items():
                mat[i, idx[w]] = c
        r = K.rank(mat, p)
        if r:
            dims[sdeg + 1] = r
    return GradedVectorSpace(dims)


def _reduce_basis(elems, p):
    """Row-reduce a list of same-degree elements to an independent list."""
    if not elems:
        return []
    alphabet = elems[0].alphabet
    words = sorted({w for e in elems for w in e.terms})
    idx = {w: j for j, w in enumerate(words)}
    mat = np.zeros((len(elems), len(words)), dtype=np.int64)
    for i, e in enumerate(elems):
        for w, c in e.terms.items():
            mat[i, idx[w]] = c
    rr, pivots = K.rref(mat, p)
    out = []
    for i in range(len(pivots)):
        terms = {words[j]: int(rr[i, j]) for j in range(len(words)) if rr[i, j]}
        out.append(TensorElement(alphabet, terms))
    return out


# ---------------------------------------------------------------------------
# Lyndon machinery


def lyndon_words(k: int, max_len: int):
    """All Lyndon words on ``k`` letters of length <= ``max_len`` (Duval)."""
    if k < 1 or max_len < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        if w[-1] < k:
            yield tuple(w)
            m = len(w)
            while len(w) < max_len:
                w.append(w[len(w) - m])
            while w and w[-1] == k - 1:
                w.pop()
        else:
            w.pop()


def is_lyndon(word) -> bool:
    n = len(word)
    if n == 0:
        return False
    return all(word < word[i:] + word[:i] for i in range(1, n))


def standard_factorization(word):
    """Split a Lyndon word as ``u v`` with ``v`` the longest proper Lyndon suffix."""
    n = len(word)
    for i in range(1, n):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValidationError(f"{word!r} admits no standard factorization")


def standard_bracketing(word):
    """Right-normed bracketing tree of a Lyndon word; leaves are letters."""
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (standard_bracketing(u), standard_bracketing(v))


def expand_bracketing(tree, alphabet: Alphabet) -> TensorElement:
    if isinstance(tree, int):
        return TensorElement(alphabet, {(tree,): 1})
    left = expand_bracketing(tree[0], alphabet)
    right = expand_bracketing(tree[1], alphabet)
    return shifted_bracket(left, right)


@dataclass
class LyndonBasisElement:
    word: tuple
    names: tuple
    bracketing: object
    selfbracket_flag: bool
    v_degree: int
    weight: int
    element: TensorElement = field(repr=False)


def _lyndon_candidates(alphabet: Alphabet, weight_cap: int, degree_cap: int):
    """Lyndon words within the caps, as (word, sdeg) pairs."""
    out = []
    for w in lyndon_words(len(alphabet.names), weight_cap):
        sdeg = alphabet.word_sdeg(w)
        if sdeg + 1 <= degree_cap:
            out.append((w, sdeg))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def lyndon_basis(gens, weight_cap: int = DEFAULT_WEIGHT_CAP, degree_cap: int = 10, *,
                 p: int, verify: bool = True) -> list[LyndonBasisElement]:
    """Basis of the free shifted Lie algebra within the caps, realized.

    Lyndon words carry their standard bracketing; for odd p each basis
    symbol of even unshifted degree contributes a self-bracket ``[b, b]``
    (towers stop there: ``[b, b]`` has odd degree, and ``[x, [x, x]] = 0``).
    With ``verify=True`` the degreewise counts are checked against the
    bracket-closure oracle and a ``CrossCheckError`` reports any mismatch.
    """
    if weight_cap > 20 or degree_cap > 64:
        raise CapError("weight cap <= 20 and degree cap <= 64 supported")
    alphabet = Alphabet(parse_or_pass(gens), p)
    basis = []
    for word, sdeg in _lyndon_candidates(alphabet, weight_cap, degree_cap):
        tree = standard_bracketing(word)
        elem = expand_bracketing(tree, alphabet)
        if elem.is_zero():
            raise CrossCheckError(f"Lyndon bracketing of {word} expanded to zero")
        basis.append(
            LyndonBasisElement(
                word=word,
                names=tuple(alphabet.names[i] for i in word),
                bracketing=tree,
                selfbracket_flag=False,
                v_degree=sdeg + 1,
                weight=len(word),
                element=elem,
            )
        )
    if p != 2:
        for b in list(basis):
            if b.v_degree % 2 == 0 and 2 * b.weight <= weight_cap and 2 * b.v_degree - 1 <= degree_cap:
                elem = shifted_bracket(b.element, b.element)
                if elem.is_zero():
                    raise CrossCheckError(f"self-bracket on {b.word} vanished unexpectedly")
                basis.append(
                    LyndonBasisElement(
                        word=b.word + b.word,
                        names=b.names + b.names,
                        bracketing=(b.bracketing, b.bracketing),
                        selfbracket_flag=True,
                        v_degree=2 * b.v_degree - 1,
                        weight=2 * b.weight,
                        element=elem,
                    )
                )
    counted = {}
    for b in basis:
        counted[b.v_degree] = counted.get(b.v_degree, 0) + 1
    realized = span_dims([b.element for b in basis], p)
    if realized.dims != counted:
        raise CrossCheckError(
            f"Lyndon realizations are dependent: counts {counted} vs span {realized.dims}"
        )
    if verify:
        oracle = bracket_closure_dims(gens, degree_cap, p=p, weight_cap=weight_cap)
        if oracle.dims != counted:
            raise CrossCheckError(
                f"basis counts {counted} disagree with closure oracle {oracle.dims}"
            )
    return basis


def parse_or_pass(gens):
    if gens and isinstance(gens[0], Generator):
        return list(gens)
    return parse_generators(gens)


# ---------------------------------------------------------------------------
# brute-force closure oracles


def bracket_closure_dims(gens, degree_cap: int, *, p: int,
                         weight_cap: int = DEFAULT_WEIGHT_CAP) -> GradedVectorSpace:
    """Degreewise span of iterated brackets of the generators.

    All pairs of current basis elements are bracketed until the dimensions
    stabilize inside the degree and weight caps.  This is the independent
    oracle for the Lyndon counts.
    """
    alphabet = Alphabet(parse_or_pass(gens), p)
    basis: dict[int, list[TensorElement]] = {}
    for name in alphabet.names:
        e = TensorElement.from_generator(alphabet, name)
        if e.v_degree <= degree_cap:
            basis.setdefault(e.sdeg, []).append(e)
    for sdeg in basis:
        basis[sdeg] = _reduce_basis(basis[sdeg], p)

    def total(b):
        return sum(len(v) for v in b.values())

    while True:
        before = total(basis)
        flat = [e for elems in basis.values() for e in elems]
        new = []
        for a in flat:
            for b in flat:
                if a.v_degree + b.v_degree - 1 > degree_cap:
                    continue
                if a.weight + b.weight > weight_cap:
                    continue
                c = shifted_bracket(a, b)
                if not c.is_zero():
                    new.append(c)
        merged = dict(basis)
        for c in new:
            merged.setdefault(c.sdeg, [])
        for sdeg in merged:
            cands = basis.get(sdeg, []) + [c for c in new if c.sdeg == sdeg]
            merged[sdeg] = _reduce_basis(cands, p)
        basis = {s: v for s, v in merged.items() if v}
        if total(basis) == before:
            break
    return GradedVectorSpace({s + 1: len(v) for s, v in basis.items()})


def restricted_closure_dims(gens, degree_cap: int, *, p: int,
                            weight_cap: int = DEFAULT_WEIGHT_CAP) -> GradedVectorSpace:
    """Span closed under brackets and admissible p-th powers.

    Powers of sums differ from sums of powers by Lie polynomials, so closing
    the bracket span under powers of basis vectors is basis independent.
    """
    alphabet = Alphabet(parse_or_pass(gens), p)
    basis: dict[int, list[TensorElement]] = {}
    for name in alphabet.names:
        e = TensorElement.from_generator(alphabet, name)
        if e.v_degree <= degree_cap:
            basis.setdefault(e.sdeg, []).append(e)
    for sdeg in basis:
        basis[sdeg] = _reduce_basis(basis[sdeg], p)

    def total(b):
        return sum(len(v) for v in b.values())

    while True:
        before = total(basis)
        flat = [e for elems in basis.values() for e in elems]
        new = []
        for a in flat:
            for b in flat:
                if a.v_degree + b.v_degree - 1 > degree_cap:
                    continue
                if a.weight + b.weight > weight_cap:
                    continue
                c = shifted_bracket(a, b)
                if not c.is_zero():
                    new.append(c)
        for a in flat:
            if p != 2 and a.sdeg % 2 == 1:
                continue
            if p * a.v_degree - p + 1 > degree_cap or p * a.weight > weight_cap:
                continue
            c = restriction_power(a)
            if not c.is_zero():
                new.append(c)
        merged = dict(basis)
        for c in new:
            merged.setdefault(c.sdeg, [])
        for sdeg in merged:
            cands = basis.get(sdeg, []) + [c for c in new if c.sdeg == sdeg]
            merged[sdeg] = _reduce_basis(cands, p)
        basis = {s: v for s, v in merged.items() if v}
        if total(basis) == before:
            break
    return GradedVectorSpace({s + 1: len(v) for s, v in basis.items()})


# ---------------------------------------------------------------------------
# symbol counting (no tensor expansion)


def _mobius(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def _lyndon_count(counts) -> int:
    """Number of Lyndon words with the given letter multiplicities."""
    n = sum(counts)
    if n == 0:
        return 0
    g = 0
    for c in counts:
        g = math.gcd(g, c)
    total = 0
    for d in range(1, g + 1):
        if g % d:
            continue
        mu = _mobius(d)
        if mu == 0:
            continue
        m = math.factorial(n // d)
        for c in counts:
            m //= math.factorial(c // d)
        total += mu * m
    assert total % n == 0
    return total // n


def _multidegrees(wdegs, degree_cap, weight_cap):
    """All letter multiplicity vectors within the caps (sdeg <= cap - 1)."""
    k = len(wdegs)
    if weight_cap is None and 0 in wdegs:
        raise ValidationError("degree-1 generators require a weight cap")
    out = []

    def rec(i, counts, weight, sdeg):
        if i == k:
            if weight:
                out.append(tuple(counts))
            return
        c = 0
        while True:
            if weight_cap is not None and weight + c > weight_cap:
                break
            if sdeg + c * wdegs[i] > degree_cap - 1:
                break
            rec(i + 1, counts + [c], weight + c, sdeg + c * wdegs[i])
            c += 1

    rec(0, [], 0, 0)
    return out


def free_lie_symbol_dims(gens, degree_cap: int, *, p: int,
                         weight_cap: int | None = None) -> GradedVectorSpace:
    """Counting route to the free shifted Lie dimensions (per degree)."""
    gens = parse_or_pass(gens)
    wdegs = [g.degree - 1 for g in gens]
    dims: dict[int, int] = {}
    symbols = []  # (v_degree, weight, count)
    for counts in _multidegrees(wdegs, degree_cap, weight_cap):
        n = sum(counts)
        c = _lyndon_count(counts)
        if not c:
            continue
        vdeg = sum(m * w for m, w in zip(counts, wdegs)) + 1
        symbols.append((vdeg, n, c))
    for vdeg, n, c in symbols:
        dims[vdeg] = dims.get(vdeg, 0) + c
    if p != 2:
        for vdeg, n, c in symbols:
            if vdeg % 2 == 0 and 2 * vdeg - 1 <= degree_cap:
                if weight_cap is not None and 2 * n > weight_cap:
                    continue
                dims[2 * vdeg - 1] = dims.get(2 * vdeg - 1, 0) + c
    return GradedVectorSpace(dims)


def lie_symbols(gens, degree_cap: int, *, p: int, weight_cap: int | None = None):
    """(v_degree, weight, count) triples for Lyndon symbols and self-brackets."""
    gens = parse_or_pass(gens)
    wdegs = [g.degree - 1 for g in gens]
    base = []
    for counts in _multidegrees(wdegs, degree_cap, weight_cap):
        c = _lyndon_count(counts)
        if not c:
            continue
        n = sum(counts)
        vdeg = sum(m * w for m, w in zip(counts, wdegs)) + 1
        base.append((vdeg, n, c))
    if p != 2:
        for vdeg, n, c in list(base):
            if vdeg % 2 == 0 and 2 * vdeg - 1 <= degree_cap:
                if weight_cap is not None and 2 * n > weight_cap:
                    continue
                base.append((2 * vdeg - 1, 2 * n, c))
    return base


def restricted_symbol_dims(gens, degree_cap: int, *, p: int,
                           weight_cap: int | None = None) -> GradedVectorSpace:
    """Counting route to the free shifted restricted Lie dimensions.

    Each Lie symbol of admissible parity (odd unshifted degree at odd p,
    everything at p = 2) spawns a restriction tower ``d -> p d - p + 1``.
    """
    dims: dict[int, int] = {}
    for vdeg, n, c in lie_symbols(gens, degree_cap, p=p, weight_cap=weight_cap):
        dims[vdeg] = dims.get(vdeg, 0) + c
        if p == 2 or vdeg % 2 == 1:
            d, w = vdeg, n
            while True:
                d = p * d - p + 1
                w = p * w
                if d > degree_cap:
                    break
                if weight_cap is not None and w > weight_cap:
                    break
                dims[d] = dims.get(d, 0) + c
    return GradedVectorSpace(dims)


@dataclass
class RestrictedBasisSymbol:
    xi_power: int
    base: LyndonBasisElement
    v_degree: int
    element: TensorElement = field(repr=False)

    @property
    def label(self) -> str:
        prefix = "xi^%d " % self.xi_power if self.xi_power else ""
        return prefix + "".join(self.base.names)


def restricted_basis(gens, degree_cap: int = 10, *, p: int,
                     weight_cap: int = DEFAULT_WEIGHT_CAP, verify: bool = True):
    """Symbols ``xi^i b`` with tensor realizations, plus their dimensions.

    Returns ``(symbols, dims)``.  Realizations are iterated p-th powers of
    the Lyndon expansions; independence is checked by rank, and with
    ``verify=True`` the counts are compared against the restricted closure
    oracle.
    """
    base = lyndon_basis(gens, weight_cap, degree_cap, p=p, verify=False)
    symbols = []
    for b in base:
        symbols.append(RestrictedBasisSymbol(0, b, b.v_degree, b.element))
        if p != 2 and b.v_degree % 2 == 0:
            continue
        elem, d, w, i = b.element, b.v_degree, b.weight, 0
        while True:
            d = p * d - p + 1
            w = p * w
            i += 1
            if d > degree_cap or w > weight_cap:
                break
            elem = restriction_power(elem)
            if elem.is_zero():
                raise CrossCheckError(f"restriction power of {b.word} vanished in realization")
            symbols.append(RestrictedBasisSymbol(i, b, d, elem))
    counted: dict[int, int] = {}
    for s in symbols:
        counted[s.v_degree] = counted.get(s.v_degree, 0) + 1
    realized = span_dims([s.element for s in symbols], p)
    if realized.dims != counted:
        raise CrossCheckError(
            f"restricted symbols are dependent: counts {counted} vs span {realized.dims}"
        )
    dims = GradedVectorSpace(counted)
    if verify:
        oracle = restricted_closure_dims(gens, degree_cap, p=p, weight_cap=weight_cap)
        if oracle != dims:
            raise CrossCheckError(
                f"restricted basis {dims.dims} disagrees with closure oracle {oracle.dims}"
            )
    return symbols, dims


# ---------------------------------------------------------------------------
# randomized axiom checks


def _random_homogeneous(rng, alphabet, degree_cap, max_weight=3, max_terms=3,
                        sdeg_parity=None, sdeg_target=None):
    """Random nonzero homogeneous element, optionally with fixed parity/degree."""
    for _ in range(200):
        ln = int(rng.integers(1, max_weight + 1))
        first = tuple(int(rng.integers(0, len(alphabet.names))) for _ in range(ln))
        sdeg = alphabet.word_sdeg(first)
        if sdeg + 1 > degree_cap:
            continue
        if sdeg_parity is not None and sdeg % 2 != sdeg_parity:
            continue
        if sdeg_target is not None and sdeg != sdeg_target:
            continue
        words = {first}
        for _ in range(int(rng.integers(0, max_terms))):
            w = tuple(int(rng.integers(0, len(alphabet.names))) for _ in range(ln))
            if alphabet.word_sdeg(w) == sdeg:
                words.add(w)
        terms = {w: int(rng.integers(1, alphabet.p)) for w in words}
        e = TensorElement(alphabet, terms)
        if not e.is_zero():
            return e
    return None


def check_axioms(gens, degree_cap: int = 12, trials: int = 100, rng_seed: int = 0,
                 *, p: int) -> dict:
    """Randomized verification of the bracket/restriction axioms.

    Checks antisymmetry, the graded Jacobi identity, ``[x, [x, x]] = 0``,
    the restriction relation ``[x, xi(y)] = ad^p(y)(x)`` and, at p = 2, the
    additivity ``xi(x + y) = xi(x) + xi(y) + [x, y]``.  Failures are
    reported with witnesses, never raised.
    """
    alphabet = Alphabet(parse_or_pass(gens), p)
    rng = np.random.default_rng(rng_seed)
    checks = {
        name: {"pass": True, "tested": 0, "witness": None}
        for name in ("antisymmetry", "jacobi", "self_bracket_triple",
                     "restriction_ad", "additivity_p2")
    }
    skipped_parity = 0

    def fail(name, *elems):
        checks[name]["pass"] = False
        if checks[name]["witness"] is None:
            checks[name]["witness"] = [repr(e) for e in elems]

    def sgn(a, b):
        return -1 if (a.sdeg * b.sdeg) % 2 else 1

    for _ in range(trials):
        a = _random_homogeneous(rng, alphabet, degree_cap)
        b = _random_homogeneous(rng, alphabet, degree_cap)
        c = _random_homogeneous(rng, alphabet, degree_cap)
        if a is None or b is None or c is None:
            continue

        checks["antisymmetry"]["tested"] += 1
        if not (shifted_bracket(a, b) + shifted_bracket(b, a).scale(sgn(a, b))).is_zero():
            fail("antisymmetry", a, b)

        checks["jacobi"]["tested"] += 1
        t1 = shifted_bracket(a, shifted_bracket(b, c)).scale(sgn(a, c))
        t2 = shifted_bracket(b, shifted_bracket(c, a)).scale(sgn(b, a))
        t3 = shifted_bracket(c, shifted_bracket(a, b)).scale(sgn(c, b))
        if not (t1 + t2 + t3).is_zero():
            fail("jacobi", a, b, c)

        checks["self_bracket_triple"]["tested"] += 1
        if not shifted_bracket(a, shifted_bracket(a, a)).is_zero():
            fail("self_bracket_triple", a)

        y = _random_homogeneous(
            rng, alphabet, degree_cap, max_weight=2, max_terms=2,
            sdeg_parity=None if p == 2 else 0,
        )
        if y is None:
            skipped_parity += 1
        else:
            checks["restriction_ad"]["tested"] += 1
            lhs = shifted_bracket(a, restriction_power(y))
            rhs = ad_power(y, a, p)
            if not (lhs - rhs).is_zero():
                fail("restriction_ad", a, y)

        if p == 2:
            b2 = _random_homogeneous(rng, alphabet, degree_cap, sdeg_target=a.sdeg)
            if b2 is not None:
                checks["additivity_p2"]["tested"] += 1
                lhs = restriction_power(a + b2)
                rhs = restriction_power(a) + restriction_power(b2) + shifted_bracket(a, b2)
                if not (lhs - rhs).is_zero():
                    fail("additivity_p2", a, b2)

    report = {
        "p": p,
        "trials": trials,
        "rng_seed": rng_seed,
        "skipped_parity": skipped_parity,
        "checks": checks,
        "all_pass": all(v["pass"] for v in checks.values()),
    }
    return report
