"""Quantum tori and quantum affine spaces attached to a word.

For a root datum and a word (i_1, ..., i_l) the torus has generators
t_1, ..., t_l with t_j t_k = q^{kappa_jk} t_k t_j for j < k, where
kappa_jk = (alpha_{i_j}, alpha_{i_k}).  Elements are kept in normal order
t_1^{e_1} ... t_l^{e_l}; the affine flag restricts exponents to be
nonnegative at construction and survives products but not inversion.
"""

from __future__ import annotations

from .cartan import RootDatum, RootVector
from .scalars import ScalarQ, S_ONE, S_ZERO, scalar_str


__all__ = ["TorusPresentation", "TorusElement", "normalize", "monomial_json", "torus_str"]


class TorusPresentation:
    """The based quantum torus of a root datum and a word over its index set."""

    __slots__ = ("datum", "letters", "kappa")

    def __init__(self, datum: RootDatum, letters: tuple[int, ...]):
        for i in letters:
            if i not in datum.index_set:
                raise ValueError(f"letter {i} outside the index set of {datum.name}")
        self.datum = datum
        self.letters = tuple(letters)
        d, a = datum.d, datum.a
        self.kappa = tuple(
            tuple(d[ij - 1] * a[ij - 1][ik - 1] for ik in self.letters)
            for ij in self.letters
        )

    @property
    def nvars(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusPresentation):
            return NotImplemented
        return self.datum is other.datum and self.letters == other.letters

    __hash__ = None

    def reorder_power(self, e: tuple[int, ...], f: tuple[int, ...]) -> int:
        """Exponent of q produced by normal-ordering t^e * t^f."""
        kappa = self.kappa
        acc = 0
        for k in range(len(e)):
            ek = e[k]
            if ek:
                row = kappa[k]
                for j in range(k):
                    if f[j]:
                        acc -= row[j] * ek * f[j]
        return acc

    def unit(self) -> "TorusElement":
        return TorusElement(self, {(0,) * self.nvars: S_ONE}, affine=True)

    def zero(self) -> "TorusElement":
        return TorusElement(self, {}, affine=True)

    def generator(self, k: int, power: int = 1) -> "TorusElement":
        """t_k^power (1-based k)."""
        if not 1 <= k <= self.nvars:
            raise ValueError(f"no generator t_{k}")
        e = [0] * self.nvars
        e[k - 1] = power
        return TorusElement(self, {tuple(e): S_ONE}, affine=power >= 0)

    def monomial(self, e: tuple[int, ...], coeff: ScalarQ = S_ONE) -> "TorusElement":
        return TorusElement(self, {tuple(e): coeff}, affine=all(x >= 0 for x in e))

    def __repr__(self) -> str:
        return f"TorusPresentation({self.datum.name}, {self.letters})"


class TorusElement:
    """Normal-ordered element: {exponent vector: ScalarQ coefficient}."""

    __slots__ = ("pres", "terms", "affine")

    def __init__(
        self,
        pres: TorusPresentation,
        terms: dict[tuple[int, ...], ScalarQ] | None = None,
        affine: bool = False,
    ):
        self.pres = pres
        self.terms = {}
        for e, c in (terms or {}).items():
            if len(e) != pres.nvars:
                raise ValueError("exponent vector length mismatch")
            if affine and any(x < 0 for x in e):
                raise ValueError("affine elements need nonnegative exponents")
            if c.num.c:
                self.terms[tuple(e)] = c
        self.affine = affine

    @classmethod
    def _raw(cls, pres, terms, affine=False) -> "TorusElement":
        obj = object.__new__(cls)
        obj.pres = pres
        obj.terms = terms
        obj.affine = affine
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial(self) -> tuple[tuple[int, ...], ScalarQ]:
        """The (exponent, coefficient) pair of a monomial element."""
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self.terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        if self.pres != other.pres or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[e] for e, c in self.terms.items())

    __hash__ = None

    def _require_same(self, other: "TorusElement") -> None:
        if self.pres != other.pres:
            raise ValueError("elements live in different tori")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._require_same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            got = out.get(e)
            if got is None:
                out[e] = c
            else:
                s = got + c
                if s.num.c:
                    out[e] = s
                else:
                    del out[e]
        return TorusElement._raw(self.pres, out, self.affine and other.affine)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def __neg__(self) -> "TorusElement":
        return TorusElement._raw(
            self.pres, {e: -c for e, c in self.terms.items()}, self.affine
        )

    def scaled(self, c: ScalarQ) -> "TorusElement":
        if not c.num.c:
            return TorusElement._raw(self.pres, {}, self.affine)
        return TorusElement._raw(
            self.pres, {e: x * c for e, x in self.terms.items()}, self.affine
        )

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        self._require_same(other)
        pres = self.pres
        out: dict[tuple[int, ...], ScalarQ] = {}
        for e, ce in self.terms.items():
            for f, cf in other.terms.items():
                g = tuple(x + y for x, y in zip(e, f))
                c = (ce * cf).mul_qpow(pres.reorder_power(e, f))
                got = out.get(g)
                if got is None:
                    if c.num.c:
                        out[g] = c
                else:
                    s = got + c
                    if s.num.c:
                        out[g] = s
                    else:
                        del out[g]
        return TorusElement._raw(pres, out, self.affine and other.affine)

    def invert_monomial(self) -> "TorusElement":
        """Inverse of a monomial; only monomials are invertible here."""
        e, c = self.monomial()
        s = self.pres.reorder_power(e, tuple(-x for x in e))
        inv = c.inverse().mul_qpow(-s)
        return TorusElement._raw(self.pres, {tuple(-x for x in e): inv}, False)

    def weight_of(self) -> RootVector:
        """Letter-weighted exponent sum of a homogeneous element, as a root
        vector: t_k contributes alpha_{i_k}.  Matrix-coefficient images carry
        the negative of this as their module weight."""
        pres = self.pres
        rank = pres.datum.rank
        got: RootVector | None = None
        for e in self.terms:
            c = [0] * rank
            for k, x in enumerate(e):
                if x:
                    c[pres.letters[k] - 1] += x
            nu = RootVector(tuple(c))
            if got is None:
                got = nu
            elif got != nu:
                raise ValueError("element is not weight-homogeneous")
        if got is None:
            raise ValueError("the zero element has no weight")
        return got

    def __str__(self) -> str:
        return torus_str(self)

    def __repr__(self) -> str:
        return f"TorusElement({torus_str(self)})"


def normalize(
    pres: TorusPresentation, factors: list[tuple[int, int]], coeff: ScalarQ = S_ONE
) -> TorusElement:
    """Normal-order coeff * t_{k_1}^{e_1} ... t_{k_m}^{e_m} given as
    (1-based generator, exponent) pairs in left-to-right order."""
    out = pres.unit().scaled(coeff)
    for k, e in factors:
        out = out * pres.generator(k, e)
    return out


def monomial_json(x: TorusElement) -> dict:
    """Serialize a monomial as {"q": power or scalar text, "exp": [...]}."""
    e, c = x.monomial()
    k = c.as_q_power()
    return {"q": k if k is not None else scalar_str(c), "exp": list(e)}


def _term_str(e: tuple[int, ...], c: ScalarQ) -> str:
    tpart = " ".join(
        f"t{k + 1}" if x == 1 else f"t{k + 1}^{x}" for k, x in enumerate(e) if x
    )
    if not tpart:
        k = c.as_q_power()
        if k == 0:
            return "1"
        if k is not None:
            return f"q^{k}"
        return f"({scalar_str(c)})"
    if c.is_one():
        return tpart
    k = c.as_q_power()
    if k is not None:
        return f"q^{k} · {tpart}"
    return f"({scalar_str(c)}) · {tpart}"


def torus_str(x: TorusElement) -> str:
    """Deterministic text form, e.g. "q^1 · t1^-1" or "t2 t3"."""
    if not x.terms:
        return "0"
    return " + ".join(_term_str(e, x.terms[e]) for e in sorted(x.terms, reverse=True))
