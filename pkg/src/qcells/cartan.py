"""Finite-type root data and Weyl group combinatorics.

Conventions, fixed once for the whole package:

* Cartan matrix entries are ``a[i][j] = <h_i, alpha_j>`` (coroot paired
  against simple root), Bourbaki numbering, with the minimal positive
  symmetrizers d so that ``d_i a_ij = d_j a_ji``.  Short roots get d = 1.
  In particular B2 has a_12 = -1, a_21 = -2, d = (2, 1) and G2 has
  a_12 = -3, a_21 = -1, d = (1, 3).
* Weights live in the weight lattice with fundamental-weight coordinates,
  root vectors in the root lattice with simple-root coordinates, coweights
  in the coroot lattice with simple-coroot coordinates.  All integer tuples.
* A word ``(i_1, ..., i_m)`` over the 1-based index set acts as the group
  element s_{i_1} ... s_{i_m}, i.e. s_{i_m} is applied first.

Supported types: A1-A4, B2-B3, C2-C3, D4, G2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


__all__ = [
    "Weight",
    "RootVector",
    "Coweight",
    "RootDatum",
    "build_root_datum",
    "weyl_act",
    "weyl_act_root",
    "weyl_act_coweight",
    "weyl_key",
    "is_reduced",
    "length",
    "reduced_words",
    "weyl_elements",
    "weyl_dim",
]


@dataclass(frozen=True, slots=True)
class Weight:
    """Element of the weight lattice, coordinates over fundamental weights."""

    coords: tuple[int, ...]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scaled(self, n: int) -> "Weight":
        return Weight(tuple(n * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_dominant(self) -> bool:
        return all(a >= 0 for a in self.coords)


@dataclass(frozen=True, slots=True)
class RootVector:
    """Element of the root lattice, coordinates over simple roots."""

    coords: tuple[int, ...]

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-a for a in self.coords))

    def scaled(self, n: int) -> "RootVector":
        return RootVector(tuple(n * a for a in self.coords))

    def height(self) -> int:
        return sum(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_positive(self) -> bool:
        """Nonzero with all coordinates >= 0."""
        return any(self.coords) and all(a >= 0 for a in self.coords)

    def is_nonneg(self) -> bool:
        return all(a >= 0 for a in self.coords)


@dataclass(frozen=True, slots=True)
class Coweight:
    """Element of the coweight lattice, coordinates over simple coroots."""

    coords: tuple[int, ...]

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Coweight") -> "Coweight":
        return Coweight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Coweight":
        return Coweight(tuple(-a for a in self.coords))


class RootDatum:
    """Immutable root datum of finite type plus per-type caches.

    Instances are interned by :func:`build_root_datum`, so identity
    comparison and datum-local caches are safe.
    """

    def __init__(self, family: str, rank: int, a: tuple[tuple[int, ...], ...], d: tuple[int, ...]):
        self.family = family
        self.rank = rank
        self.a = a
        self.d = d
        self.name = f"{family}{rank}"
        self._validate()
        # caches filled lazily by other modules; see their owners for locking
        self._pos_roots: tuple[RootVector, ...] | None = None
        self._rw_memo: dict = {}
        self._form_memo: dict = {}
        self._module_cache: dict = {}
        self._build_lock = threading.Lock()

    def _validate(self) -> None:
        n = self.rank
        a, d = self.a, self.d
        if len(a) != n or any(len(row) != n for row in a) or len(d) != n:
            raise ValueError("shape mismatch in root datum")
        for i in range(n):
            if a[i][i] != 2:
                raise ValueError("diagonal Cartan entries must be 2")
            if d[i] < 1:
                raise ValueError("symmetrizers must be positive")
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise ValueError("off-diagonal Cartan entries must be <= 0")
                if d[i] * a[i][j] != d[j] * a[j][i]:
                    raise ValueError("Cartan matrix is not symmetrized by d")
        # positive definiteness of (d_i a_ij) via leading principal minors
        for k in range(1, n + 1):
            rows = [[Fraction(d[i] * a[i][j]) for j in range(k)] for i in range(k)]
            if _det(rows) <= 0:
                raise ValueError("root datum is not of finite type")

    # 1-based accessors -----------------------------------------------------

    @property
    def index_set(self) -> range:
        return range(1, self.rank + 1)

    def aij(self, i: int, j: int) -> int:
        """<h_i, alpha_j>."""
        return self.a[i - 1][j - 1]

    def di(self, i: int) -> int:
        return self.d[i - 1]

    def alpha(self, i: int) -> RootVector:
        c = [0] * self.rank
        c[i - 1] = 1
        return RootVector(tuple(c))

    def fundamental(self, i: int) -> Weight:
        c = [0] * self.rank
        c[i - 1] = 1
        return Weight(tuple(c))

    def coroot(self, i: int) -> Coweight:
        c = [0] * self.rank
        c[i - 1] = 1
        return Coweight(tuple(c))

    def zero_weight(self) -> Weight:
        return Weight((0,) * self.rank)

    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    # pairings --------------------------------------------------------------

    def h_weight(self, i: int, lam: Weight) -> int:
        """<h_i, lam>."""
        return lam.coords[i - 1]

    def h_root(self, i: int, nu: RootVector) -> int:
        """<h_i, nu>."""
        row = self.a[i - 1]
        return sum(row[j] * c for j, c in enumerate(nu.coords) if c)

    def coweight_weight(self, h: Coweight, lam: Weight) -> int:
        """<h, lam>."""
        return sum(x * y for x, y in zip(h.coords, lam.coords))

    def sym_pair(self, lam: Weight, nu: RootVector) -> int:
        """(lam, nu) for lam in the weight lattice, nu in the root lattice."""
        return sum(
            c * self.d[j] * lam.coords[j] for j, c in enumerate(nu.coords) if c
        )

    # lattice conversions ----------------------------------------------------

    def root_to_weight(self, nu: RootVector) -> Weight:
        return Weight(
            tuple(
                sum(self.a[i][j] * nu.coords[j] for j in range(self.rank))
                for i in range(self.rank)
            )
        )

    def weight_to_root(self, lam: Weight) -> RootVector:
        """Express a weight in simple-root coordinates; it must lie in the
        root lattice."""
        n = self.rank
        rows = [
            [Fraction(self.a[i][j]) for j in range(n)] + [Fraction(lam.coords[i])]
            for i in range(n)
        ]
        sol = _solve_fraction(rows, n)
        out = []
        for x in sol:
            if x.denominator != 1:
                raise ValueError(f"{lam} is not in the root lattice")
            out.append(int(x))
        return RootVector(tuple(out))

    # reflections -------------------------------------------------------------

    def reflect_weight(self, i: int, lam: Weight) -> Weight:
        k = lam.coords[i - 1]
        if k == 0:
            return lam
        col = [self.a[r][i - 1] for r in range(self.rank)]
        return Weight(tuple(c - k * col[r] for r, c in enumerate(lam.coords)))

    def reflect_root(self, i: int, nu: RootVector) -> RootVector:
        k = self.h_root(i, nu)
        if k == 0:
            return nu
        c = list(nu.coords)
        c[i - 1] -= k
        return RootVector(tuple(c))

    def reflect_coweight(self, i: int, h: Coweight) -> Coweight:
        k = sum(h.coords[j] * self.a[j][i - 1] for j in range(self.rank))
        if k == 0:
            return h
        c = list(h.coords)
        c[i - 1] -= k
        return Coweight(tuple(c))

    def positive_roots(self) -> tuple[RootVector, ...]:
        """All positive roots, sorted by (height, coordinates)."""
        if self._pos_roots is None:
            roots = {self.alpha(i) for i in self.index_set}
            frontier = set(roots)
            while frontier:
                nxt = set()
                for beta in frontier:
                    for i in self.index_set:
                        g = self.reflect_root(i, beta)
                        if g.is_positive() and g not in roots:
                            roots.add(g)
                            nxt.add(g)
                frontier = nxt
            self._pos_roots = tuple(
                sorted(roots, key=lambda r: (r.height(), r.coords))
            )
        return self._pos_roots

    def __repr__(self) -> str:
        return f"RootDatum({self.name})"


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    rows = [row[:] for row in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, n):
            if rows[r][c]:
                f = rows[r][c] / rows[c][c]
                for k in range(c, n):
                    rows[r][k] -= f * rows[c][k]
    return det


def _solve_fraction(rows: list[list[Fraction]], n: int) -> list[Fraction]:
    """Solve a square system given as rows of [A | b]; A must be invertible."""
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise ValueError("singular system")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [rows[r][n] for r in range(n)]


_SUPPORTED = {
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3),
    ("C", 2), ("C", 3),
    ("D", 4),
    ("G", 2),
}


def build_root_datum(family: str, rank: int | None = None) -> RootDatum:
    """Root datum for a supported finite type, e.g. ('A', 2) or just "A2".

    Returns the interned datum with the Bourbaki Cartan matrix and minimal
    symmetrizers.
    """
    if rank is None:
        name = family.strip().upper()
        if len(name) < 2 or not name[1:].isdigit():
            raise ValueError(f"cannot parse Cartan type {family!r}")
        family, rank = name[0], int(name[1:])
    return _build_root_datum(family.upper(), rank)


@lru_cache(maxsize=None)
def _build_root_datum(family: str, rank: int) -> RootDatum:
    if (family, rank) not in _SUPPORTED:
        raise ValueError(f"unsupported Cartan type {family}{rank}")
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if family == "D":
        edges = [(1, 2), (2, 3), (2, 4)]
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        d = [1] * n
    elif family == "G":
        a[0][1], a[1][0] = -3, -1
        d = [1, 3]
    else:
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if family == "A":
            d = [1] * n
        elif family == "B":
            # last root short
            a[n - 1][n - 2] = -2
            d = [2] * (n - 1) + [1]
        else:  # C: last root long
            a[n - 2][n - 1] = -2
            d = [1] * (n - 1) + [2]
    return RootDatum(family, rank, tuple(tuple(r) for r in a), tuple(d))


# ---------------------------------------------------------------------------
# Weyl group machinery on words
# ---------------------------------------------------------------------------

def weyl_act(datum: RootDatum, word: tuple[int, ...], lam: Weight) -> Weight:
    """Apply s_{i_1} ... s_{i_m} to a weight (rightmost letter acts first)."""
    for i in reversed(word):
        lam = datum.reflect_weight(i, lam)
    return lam


def weyl_act_root(datum: RootDatum, word: tuple[int, ...], nu: RootVector) -> RootVector:
    for i in reversed(word):
        nu = datum.reflect_root(i, nu)
    return nu


def weyl_act_coweight(datum: RootDatum, word: tuple[int, ...], h: Coweight) -> Coweight:
    for i in reversed(word):
        h = datum.reflect_coweight(i, h)
    return h


def weyl_key(datum: RootDatum, word: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Canonical key of the group element: its matrix on the weight lattice
    (columns = images of the fundamental weights)."""
    cols = [weyl_act(datum, word, datum.fundamental(j)).coords for j in datum.index_set]
    return tuple(cols)


def is_reduced(datum: RootDatum, word: tuple[int, ...]) -> bool:
    """True when the word is reduced: every prefix sends the next simple
    root to a positive root."""
    for k in range(1, len(word) + 1):
        beta = weyl_act_root(datum, word[: k - 1], datum.alpha(word[k - 1]))
        if not beta.is_positive():
            return False
    return True


def length(datum: RootDatum, word: tuple[int, ...]) -> int:
    """Length of the group element: number of positive roots made negative."""
    n = 0
    for beta in datum.positive_roots():
        if not weyl_act_root(datum, word, beta).is_positive():
            n += 1
    return n


def _descent_word(datum: RootDatum, word: tuple[int, ...]) -> tuple[int, ...]:
    """Some reduced word for the element of an arbitrary word."""
    out: list[int] = []
    cur = tuple(word)
    while True:
        ln = length(datum, cur)
        if ln == 0:
            return tuple(out)
        for i in datum.index_set:
            if length(datum, (i,) + cur) < ln:
                out.append(i)
                cur = (i,) + cur
                break
        else:  # pragma: no cover - impossible for a nontrivial element
            raise AssertionError("no descent found")


def reduced_words(datum: RootDatum, word: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All reduced words of the element represented by ``word`` (which need
    not itself be reduced), sorted lexicographically."""
    if not is_reduced(datum, word):
        word = _descent_word(datum, word)

    memo = datum._rw_memo

    def rec(w: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        if not w:
            return ((),)
        key = weyl_key(datum, w)
        got = memo.get(key)
        if got is not None:
            return got
        out = []
        for i in datum.index_set:
            # i is a left descent iff s_i * w is shorter, iff (i,)+w not reduced
            if not is_reduced(datum, (i,) + w):
                shorter = _descent_word(datum, (i,) + w)
                for tail in rec(shorter):
                    out.append((i,) + tail)
        res = tuple(sorted(out))
        memo[key] = res
        return res

    return rec(word)


def weyl_elements(
    datum: RootDatum, max_length: int | None = None
) -> list[tuple[int, ...]]:
    """One reduced word per Weyl group element with length <= max_length
    (every element when None), sorted by (length, word); the representative
    is the lexicographically smallest reduced word."""
    seen = {weyl_key(datum, ()): ()}
    frontier = [()]
    reps: list[tuple[int, ...]] = [()]
    ln = 0
    while frontier and (max_length is None or ln < max_length):
        nxt = []
        for w in frontier:
            for i in datum.index_set:
                cand = w + (i,)
                if not is_reduced(datum, cand):
                    continue
                key = weyl_key(datum, cand)
                if key not in seen:
                    seen[key] = cand
                    nxt.append(cand)
        frontier = nxt
        reps.extend(nxt)
        ln += 1
    out = [min(reduced_words(datum, w)) if w else () for w in reps]
    out.sort(key=lambda w: (len(w), w))
    return out


def weyl_dim(datum: RootDatum, lam: Weight) -> int:
    """Dimension of the irreducible module of highest weight lam (dominant),
    by the product formula over positive roots."""
    if not lam.is_dominant():
        raise ValueError("highest weight must be dominant")
    rho = datum.rho()
    top = lam + rho
    dim = Fraction(1)
    for beta in datum.positive_roots():
        dim *= Fraction(datum.sym_pair(top, beta), datum.sym_pair(rho, beta))
    if dim.denominator != 1:  # pragma: no cover - sanity net
        raise AssertionError("Weyl dimension came out non-integral")
    return int(dim)
