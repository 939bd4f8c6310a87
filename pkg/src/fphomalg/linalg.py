"""Graded and bigraded exact linear algebra over a prime field.

Carriers used everywhere else in the package: graded vector spaces with
finite support, degreewise matrices between them, chain complexes with a
validated ``d*d = 0``, bigraded dimension tables with parity verdicts, and
truncated Hilbert series.

Degree conventions, fixed once:

* graded vector spaces are cohomologically graded;
* a ``GradedMap`` of degree ``d`` sends degree ``i`` to degree ``i + d``;
* bigraded tables are keyed by ``(s, t)``; derived-functor tables store the
  map degree in ``t`` while Tor/bar tables store the internal degree of the
  cycle (parity statements do not depend on this choice);
* every truncated object records its cap and refuses windows beyond it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import CapError, ValidationError

# ---------------------------------------------------------------------------
# prime field


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The field F_p for a prime 2 <= p <= 97."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p) or not 2 <= p <= 97:
            raise ValidationError(f"p must be a prime in [2, 97], got {p!r}")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


# ---------------------------------------------------------------------------
# graded vector spaces


class GradedVectorSpace:
    """Finitely supported dimension (and optional basis labels) per degree."""

    def __init__(self, dims=None, labels=None):
        clean = {}
        for d, n in dict(dims or {}).items():
            d = int(d)
            n = int(n)
            if n < 0:
                raise ValidationError(f"negative dimension {n} in degree {d}")
            if n:
                clean[d] = n
        self._dims = clean
        self._labels = {}
        if labels:
            for d, names in labels.items():
                d = int(d)
                names = tuple(names)
                if self.dim(d) != len(names):
                    raise ValidationError(
                        f"{len(names)} labels for dimension {self.dim(d)} in degree {d}"
                    )
                if names:
                    self._labels[d] = names

    @property
    def dims(self) -> dict[int, int]:
        return dict(self._dims)

    def dim(self, d: int) -> int:
        return self._dims.get(int(d), 0)

    def labels(self, d: int):
        d = int(d)
        if d in self._labels:
            return self._labels[d]
        return tuple(f"e{d}_{i}" for i in range(self.dim(d)))

    def degrees(self) -> list[int]:
        return sorted(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def shift(self, k: int) -> "GradedVectorSpace":
        return GradedVectorSpace(
            {d + k: n for d, n in self._dims.items()},
            {d + k: v for d, v in self._labels.items()},
        )

    def __add__(self, other: "GradedVectorSpace") -> "GradedVectorSpace":
        dims = dict(self._dims)
        for d, n in other._dims.items():
            dims[d] = dims.get(d, 0) + n
        return GradedVectorSpace(dims)

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and other._dims == self._dims

    def __hash__(self):
        return hash(frozenset(self._dims.items()))

    def __repr__(self):
        body = ", ".join(f"{d}:{n}" for d, n in sorted(self._dims.items()))
        return "GradedVectorSpace({%s})" % body

    def to_json(self) -> dict:
        return {"dims": {str(d): n for d, n in sorted(self._dims.items())}}

    @classmethod
    def from_json(cls, obj) -> "GradedVectorSpace":
        if not isinstance(obj, dict) or "dims" not in obj:
            raise ValidationError('graded space JSON must be {"dims": {...}}')
        return cls({int(d): int(n) for d, n in obj["dims"].items()})


def shift(V: GradedVectorSpace, k: int) -> GradedVectorSpace:
    """Regrade so that the degree-``i`` part lands in degree ``i + k``."""
    return V.shift(k)


# ---------------------------------------------------------------------------
# graded maps


class GradedMap:
    """Degreewise matrix blocks for a map of graded spaces of fixed degree.

    ``blocks[i]`` has shape ``(target.dim(i + degree), source.dim(i))`` and
    acts on column vectors.  Missing blocks are zero.
    """

    def __init__(self, source, target, degree: int, blocks=None, p: int = 2):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.p = p
        self.blocks: dict[int, np.ndarray] = {}
        for i, m in (blocks or {}).items():
            i = int(i)
            m = K.as_modp(m, p)
            want = (target.dim(i + self.degree), source.dim(i))
            if m.shape != want:
                raise ValidationError(
                    f"block at degree {i} has shape {m.shape}, expected {want}"
                )
            if m.any():
                self.blocks[i] = m

    def block(self, i: int) -> np.ndarray:
        i = int(i)
        if i in self.blocks:
            return self.blocks[i]
        return np.zeros((self.target.dim(i + self.degree), self.source.dim(i)), dtype=np.int64)

    @classmethod
    def zero(cls, source, target, degree, p):
        return cls(source, target, degree, {}, p)

    @classmethod
    def identity(cls, space, p):
        return cls(
            space,
            space,
            0,
            {d: np.eye(space.dim(d), dtype=np.int64) for d in space.degrees()},
            p,
        )

    @classmethod
    def from_triplets(cls, source, target, degree, triplets, p):
        """Build from sparse entries ``{src_degree: [(row, col, value), ...]}``."""
        blocks = {}
        for i, entries in triplets.items():
            i = int(i)
            m = np.zeros((target.dim(i + degree), source.dim(i)), dtype=np.int64)
            for r, c, v in entries:
                m[r, c] = v % p
            blocks[i] = m
        return cls(source, target, degree, blocks, p)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self`` after ``other``."""
        if self.p != other.p:
            raise ValidationError("composing maps over different primes")
        deg = self.degree + other.degree
        blocks = {}
        for i in other.source.degrees():
            m = self.block(i + other.degree) @ other.block(i)
            if m.size and m.any():
                blocks[i] = m % self.p
        return GradedMap(other.source, self.target, deg, blocks, self.p)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if (self.degree, self.p) != (other.degree, other.p):
            raise ValidationError("adding incompatible graded maps")
        blocks = {}
        for i in set(self.blocks) | set(other.blocks):
            blocks[i] = (self.block(i) + other.block(i)) % self.p
        return GradedMap(self.source, self.target, self.degree, blocks, self.p)

    def scale(self, c: int) -> "GradedMap":
        blocks = {i: (m * (c % self.p)) % self.p for i, m in self.blocks.items()}
        return GradedMap(self.source, self.target, self.degree, blocks, self.p)

    def is_zero(self) -> bool:
        return all(not m.any() for m in self.blocks.values())

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (self.degree, self.p) != (other.degree, other.p):
            return False
        for i in set(self.blocks) | set(other.blocks):
            if self.block(i).shape != other.block(i).shape:
                return False
            if (self.block(i) != other.block(i)).any():
                return False
        return True

    def rank(self, i: int) -> int:
        return K.rank(self.block(i), self.p)

    def kernel_dim(self, i: int) -> int:
        return self.source.dim(i) - self.rank(i)

    def is_surjective(self, degrees=None) -> bool:
        degs = degrees if degrees is not None else self.target.degrees()
        for d in degs:
            if self.target.dim(d) and self.rank(d - self.degree) < self.target.dim(d):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "blocks": {str(i): m.tolist() for i, m in sorted(self.blocks.items())},
        }


# ---------------------------------------------------------------------------
# chain complexes

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


class ChainComplex:
    """Indexed family of graded spaces with validated differentials.

    ``direction=homological`` stores ``d_s : C_s -> C_{s-1}``;
    ``cohomological`` stores ``d_s : C_s -> C_{s+1}``.  ``window`` is the
    internal-degree range ``(lo, hi)`` on which the data is trusted.
    """

    def __init__(self, spaces, diffs, direction=HOMOLOGICAL, p=2, window=None, validate=True):
        if direction not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise ValidationError(f"unknown direction {direction!r}")
        self.spaces = {int(s): sp for s, sp in spaces.items()}
        self.diffs = {int(s): d for s, d in diffs.items()}
        self.direction = direction
        self.p = p
        if window is None:
            degs = [d for sp in self.spaces.values() for d in sp.degrees()]
            window = (min(degs), max(degs)) if degs else (0, 0)
        self.window = (int(window[0]), int(window[1]))
        if validate:
            self.validate()

    def space(self, s: int) -> GradedVectorSpace:
        return self.spaces.get(int(s), GradedVectorSpace())

    def diff(self, s: int):
        return self.diffs.get(int(s))

    def _step(self) -> int:
        return -1 if self.direction == HOMOLOGICAL else 1

    def validate(self):
        step = self._step()
        for s, d in self.diffs.items():
            if d is None:
                continue
            nxt = self.diffs.get(s + step)
            if nxt is None:
                continue
            lo, hi = self.window
            comp = nxt.compose(d)
            for i in comp.source.degrees():
                if not lo <= i <= hi:
                    continue
                if comp.block(i).any():
                    raise ValidationError(
                        f"d*d != 0 at index {s}, internal degree {i}"
                    )

    def homology_dims(self, s: int, degree_window) -> GradedVectorSpace:
        """Dimension of homology at index ``s`` per internal degree.

        ``degree_window`` is an iterable of degrees or a ``(lo, hi)`` pair;
        it must lie inside the complex's trusted window.
        """
        if isinstance(degree_window, tuple) and len(degree_window) == 2:
            degrees = range(degree_window[0], degree_window[1] + 1)
        else:
            degrees = list(degree_window)
        lo, hi = self.window
        for d in degrees:
            if not lo <= d <= hi:
                raise CapError(f"degree {d} outside stored window [{lo}, {hi}]")
        step = self._step()
        d_out = self.diffs.get(s)
        d_in = self.diffs.get(s - step)
        out = {}
        for i in degrees:
            n = self.space(s).dim(i)
            if n == 0:
                continue
            kdim = d_out.kernel_dim(i) if d_out is not None else n
            rin = 0
            if d_in is not None:
                rin = K.rank(d_in.block(i - d_in.degree), self.p)
            h = kdim - rin
            if h < 0:
                raise ValidationError(f"negative homology dimension at ({s}, {i})")
            if h:
                out[i] = h
        return GradedVectorSpace(out)


def homology_dims(C: ChainComplex, s: int, degree_window) -> GradedVectorSpace:
    return C.homology_dims(s, degree_window)


# ---------------------------------------------------------------------------
# bigraded tables


@dataclass(frozen=True)
class ParityVerdict:
    verdict: str  # "even" | "odd" | "neither"
    empty: bool

    def to_json(self):
        return {"verdict": self.verdict, "empty": self.empty}


class BigradedTable:
    """Finitely supported map ``(s, t) -> dimension``."""

    def __init__(self, entries=None):
        clean = {}
        for (s, t), n in dict(entries or {}).items():
            n = int(n)
            if n < 0:
                raise ValidationError(f"negative dimension at ({s}, {t})")
            if n:
                clean[(int(s), int(t))] = n
        self._entries = clean

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self._entries)

    def dim(self, s: int, t: int) -> int:
        return self._entries.get((int(s), int(t)), 0)

    def items(self):
        return sorted(self._entries.items())

    def is_empty(self) -> bool:
        return not self._entries

    def support(self):
        return sorted(self._entries)

    def __eq__(self, other):
        return isinstance(other, BigradedTable) and other._entries == self._entries

    def __repr__(self):
        body = ", ".join(f"({s},{t}):{n}" for (s, t), n in self.items())
        return "BigradedTable({%s})" % body

    def restrict(self, s_max=None, t_range=None) -> "BigradedTable":
        out = {}
        for (s, t), n in self._entries.items():
            if s_max is not None and s > s_max:
                continue
            if t_range is not None and not t_range[0] <= t <= t_range[1]:
                continue
            out[(s, t)] = n
        return BigradedTable(out)

    def parity_verdict(self) -> ParityVerdict:
        if not self._entries:
            return ParityVerdict("even", True)
        parities = {(s + t) % 2 for s, t in self._entries}
        if parities == {0}:
            return ParityVerdict("even", False)
        if parities == {1}:
            return ParityVerdict("odd", False)
        return ParityVerdict("neither", False)

    def total_dims(self, sign: int = -1) -> dict[int, int]:
        """Collapse to total degree ``t + sign*s`` (default ``t - s``)."""
        out: dict[int, int] = {}
        for (s, t), n in self._entries.items():
            k = t + sign * s
            out[k] = out.get(k, 0) + n
        return dict(sorted(out.items()))

    def to_json(self) -> list:
        return [{"s": s, "t": t, "dim": n} for (s, t), n in self.items()]

    @classmethod
    def from_json(cls, obj) -> "BigradedTable":
        if not isinstance(obj, list):
            raise ValidationError("bigraded table JSON must be a list of rows")
        entries = {}
        for row in obj:
            key = (int(row["s"]), int(row["t"]))
            entries[key] = entries.get(key, 0) + int(row["dim"])
        return cls(entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["s", "t", "dim"])
        for (s, t), n in self.items():
            w.writerow([s, t, n])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BigradedTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls.from_json([{k: int(v) for k, v in r.items()} for r in rows])


def parity_verdict(T: BigradedTable) -> ParityVerdict:
    """``even``/``odd``/``neither``; empty tables report even with a flag."""
    return T.parity_verdict()


# ---------------------------------------------------------------------------
# Hilbert series


class HilbertSeries:
    """Integer dimension series trusted up to and including ``cap``."""

    def __init__(self, coefficients, cap: int | None = None):
        if isinstance(coefficients, dict):
            cap = max(coefficients) if cap is None else cap
            coeffs = [0] * (cap + 1)
            for d, n in coefficients.items():
                d = int(d)
                if 0 <= d <= cap:
                    coeffs[d] = int(n)
        else:
            coeffs = [int(c) for c in coefficients]
            if cap is None:
                cap = len(coeffs) - 1
            coeffs = coeffs[: cap + 1] + [0] * (cap + 1 - len(coeffs))
        if cap < 0:
            raise ValidationError("cap must be nonnegative")
        if any(c < 0 for c in coeffs):
            raise ValidationError("dimension series must be nonnegative")
        self.cap = cap
        self.coefficients = coeffs

    def __getitem__(self, d: int) -> int:
        if not 0 <= d <= self.cap:
            raise CapError(f"degree {d} beyond cap {self.cap}")
        return self.coefficients[d]

    def __eq__(self, other):
        return (
            isinstance(other, HilbertSeries)
            and other.cap == self.cap
            and other.coefficients == self.coefficients
        )

    def __repr__(self):
        body = ", ".join(f"{d}:{c}" for d, c in enumerate(self.coefficients) if c)
        return "HilbertSeries({%s}, cap=%d)" % (body, self.cap)

    def nonzero(self) -> dict[int, int]:
        return {d: c for d, c in enumerate(self.coefficients) if c}

    def to_graded_space(self) -> GradedVectorSpace:
        return GradedVectorSpace(self.nonzero())

    def to_json(self) -> dict:
        return {"cap": self.cap, "series": {str(d): c for d, c in self.nonzero().items()}}

    @classmethod
    def from_graded_space(cls, V: GradedVectorSpace, cap: int) -> "HilbertSeries":
        return cls({d: n for d, n in V.dims.items() if 0 <= d <= cap}, cap)


def series_mul(a: list[int], b: list[int], cap: int) -> list[int]:
    out = [0] * (cap + 1)
    for i, ai in enumerate(a[: cap + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: cap + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def free_commutative_series(generators, cap: int, p: int) -> HilbertSeries:
    """Hilbert series of the free graded-commutative algebra.

    ``generators`` is an iterable of (degree, multiplicity).  Odd-degree
    generators are exterior when p is odd; at p = 2 everything is
    polynomial.  Degrees must be positive for the series to be finite.
    Large multiplicities use the closed-form factors ``(1 + q^d)^m`` and
    ``(1 - q^d)^{-m}`` with exact integer binomials.
    """
    import math as _math

    series = [1] + [0] * cap
    for deg, mult in generators:
        deg, mult = int(deg), int(mult)
        if mult == 0:
            continue
        if deg <= 0:
            raise ValidationError("series generators must have positive degree")
        factor = [0] * (cap + 1)
        for k in range(0, cap // deg + 1):
            if p != 2 and deg % 2 == 1:
                factor[k * deg] = _math.comb(mult, k) if k <= mult else 0
            else:
                factor[k * deg] = _math.comb(mult + k - 1, k)
        series = series_mul(series, factor, cap)
    return HilbertSeries(series, cap)


# ---------------------------------------------------------------------------
# subquotients with representatives


class Subquotient:
    """``ker(d_out) / im(d_in)`` inside F_p^n, with chosen representatives.

    ``d_out`` has shape (r, n) and ``d_in`` shape (n, c).  Provides class
    coordinates for arbitrary cycles, which is what homology products and
    induced maps on cohomology need.
    """

    def __init__(self, d_out, d_in, p: int):
        self.p = p
        d_out = K.as_modp(d_out, p) if d_out is not None else None
        d_in = K.as_modp(d_in, p) if d_in is not None else None
        n = d_out.shape[1] if d_out is not None else d_in.shape[0]
        self.n = n
        if d_out is None:
            self.cycles = np.eye(n, dtype=np.int64)
        else:
            self.cycles = K.nullspace(d_out, p)
        k = self.cycles.shape[1]
        if d_in is None or d_in.shape[1] == 0 or k == 0:
            y = np.zeros((k, 0), dtype=np.int64)
        else:
            y = K.solve(self.cycles, d_in, p)
            if y is None:
                raise ValidationError("boundaries do not lie inside cycles")
        rr, piv = K.rref(y.T, p)
        self._red_rows = rr[: len(piv)]
        self._piv = list(piv)
        self._free = [i for i in range(k) if i not in piv]
        self.dim = len(self._free)

    def _project(self, x: np.ndarray) -> np.ndarray:
        x = x % self.p
        for row, pc in zip(self._red_rows, self._piv):
            c = int(x[pc])
            if c:
                x = (x - c * row) % self.p
        return x[self._free]

    def representatives(self) -> np.ndarray:
        """(n, dim) matrix whose columns represent the chosen basis classes."""
        if self.dim == 0:
            return np.zeros((self.n, 0), dtype=np.int64)
        return self.cycles[:, self._free] % self.p

    def coords(self, v) -> np.ndarray:
        """Class coordinates of a cycle ``v``."""
        v = np.asarray(v, dtype=np.int64) % self.p
        x = K.solve(self.cycles, v, self.p)
        if x is None:
            raise ValidationError("vector is not a cycle")
        return self._project(x)


# ---------------------------------------------------------------------------
# json helpers


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
