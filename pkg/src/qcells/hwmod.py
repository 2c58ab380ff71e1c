"""Integrable highest weight modules with exact bases over Q(q).

A module V(lam) is built weight space by weight space, descending by
height.  Each weight space gets a basis of f-monomial vectors selected
greedily from the candidates f_i . (basis of V(mu + alpha_i)); linear
independence is decided through the Gram matrix of the contravariant
form, which is computed by the commutation recursion

    (f_i x, f_j y) = (x, f_j e_i y) + delta_ij [<h_i, wt y>]_{q_i} (x, y).

Stored per module: basis tags, Gram matrices and their inverses, and the
matrices of the Chevalley actions f_i, e_i between adjacent weight
spaces.  Missing action keys mean the zero map.
"""

from __future__ import annotations

from functools import lru_cache

from .cartan import RootDatum, Weight, weyl_act, weyl_dim
from .linalg import column_rank_profile, invert_matrix, mat_vec, solve_square_multi
from .scalars import ScalarQ, S_ONE, S_ZERO, qfact_i, qint_i


__all__ = [
    "HWModule",
    "ModuleVector",
    "build_module",
    "get_module",
    "act_f",
    "act_e",
    "act_f_divided",
    "act_e_divided",
    "contravariant_form",
    "extremal_vector",
    "braid_T",
    "braid_T_inv",
    "extremal_by_braid",
]


class HWModule:
    """Simple module of dominant highest weight, with exact linear data."""

    __slots__ = (
        "datum",
        "lam",
        "weights",
        "basis",
        "gram",
        "gram_inv",
        "fmat",
        "emat",
        "dim",
        "_extremal_memo",
        "_tinv_memo",
    )

    def __init__(self, datum: RootDatum, lam: Weight):
        self.datum = datum
        self.lam = lam
        self.weights: tuple[Weight, ...] = ()
        self.basis: dict[Weight, tuple[tuple[int, ...], ...]] = {}
        self.gram: dict[Weight, list[list[ScalarQ]]] = {}
        self.gram_inv: dict[Weight, list[list[ScalarQ]]] = {}
        self.fmat: dict[tuple[int, Weight], list[tuple[ScalarQ, ...]]] = {}
        self.emat: dict[tuple[int, Weight], list[tuple[ScalarQ, ...]]] = {}
        self.dim = 0
        self._extremal_memo: dict[tuple[int, ...], "ModuleVector"] = {}
        self._tinv_memo: dict = {}

    def dim_of(self, mu: Weight) -> int:
        b = self.basis.get(mu)
        return len(b) if b else 0

    def gram_inverse(self, mu: Weight) -> list[list[ScalarQ]]:
        got = self.gram_inv.get(mu)
        if got is None:
            got = invert_matrix(self.gram[mu])
            self.gram_inv[mu] = got
        return got

    def basis_vector(self, mu: Weight, idx: int) -> "ModuleVector":
        n = self.dim_of(mu)
        if not 0 <= idx < n:
            raise ValueError("basis index out of range")
        coeffs = [S_ZERO] * n
        coeffs[idx] = S_ONE
        return ModuleVector(self, {mu: coeffs})

    def highest(self) -> "ModuleVector":
        return self.basis_vector(self.lam, 0)

    def zero(self) -> "ModuleVector":
        return ModuleVector(self, {})

    def __repr__(self) -> str:
        return f"HWModule({self.datum.name}, {self.lam.coords}, dim={self.dim})"


class ModuleVector:
    """Element of a module, coefficient lists keyed by weight."""

    __slots__ = ("mod", "parts")

    def __init__(self, mod: HWModule, parts: dict[Weight, list[ScalarQ]]):
        self.mod = mod
        self.parts = {
            mu: coeffs for mu, coeffs in parts.items() if any(c.num.c for c in coeffs)
        }

    def is_zero(self) -> bool:
        return not self.parts

    def weight(self) -> Weight:
        """Weight of a homogeneous vector."""
        if len(self.parts) != 1:
            raise ValueError("vector is not weight-homogeneous")
        return next(iter(self.parts))

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if self.mod is not other.mod:
            raise ValueError("vectors live in different modules")
        out = {mu: list(c) for mu, c in self.parts.items()}
        for mu, coeffs in other.parts.items():
            acc = out.get(mu)
            if acc is None:
                out[mu] = list(coeffs)
            else:
                for k, c in enumerate(coeffs):
                    acc[k] = acc[k] + c
        return ModuleVector(self.mod, out)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + other.scaled(_S_MINUS_ONE)

    def scaled(self, c: ScalarQ) -> "ModuleVector":
        if not c.num.c:
            return ModuleVector(self.mod, {})
        return ModuleVector(
            self.mod, {mu: [x * c for x in coeffs] for mu, coeffs in self.parts.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        if self.mod is not other.mod or self.parts.keys() != other.parts.keys():
            return False
        return all(self.parts[mu] == other.parts[mu] for mu in self.parts)

    __hash__ = None

    def __repr__(self) -> str:
        bits = []
        for mu in sorted(self.parts, key=lambda w: w.coords):
            bits.append(f"{mu.coords}: [{', '.join(str(c) for c in self.parts[mu])}]")
        return "ModuleVector({" + "; ".join(bits) + "})"


_S_MINUS_ONE = ScalarQ.from_int(-1)


# ---------------------------------------------------------------------------
# construction


def _apply_cols(
    cols: list[tuple[ScalarQ, ...]], vec: list[ScalarQ], target_dim: int
) -> list[ScalarQ]:
    """Matrix-vector product for a column-major action matrix."""
    out = [S_ZERO] * target_dim
    for cidx, c in enumerate(vec):
        if c.num.c:
            col = cols[cidx]
            for r, a in enumerate(col):
                if a.num.c:
                    out[r] = out[r] + a * c
    return out


# fixed prime field and evaluation point used to guess column rank profiles;
# every guess is certified by the exact Gram-block inversion that follows,
# and a degenerate point falls back to the exact echelon
_PROFILE_P = (1 << 61) - 1
_PROFILE_Q0 = 1220703125
_pow_memo: dict[int, int] = {}


def _eval_mod(c: ScalarQ) -> int | None:
    p = _PROFILE_P
    num = 0
    for e, k in c.num.c.items():
        w = _pow_memo.get(e)
        if w is None:
            w = pow(_PROFILE_Q0, e, p)
            _pow_memo[e] = w
        num = (num + k * w) % p
    den = 0
    for e, k in c.den.c.items():
        w = _pow_memo.get(e)
        if w is None:
            w = pow(_PROFILE_Q0, e, p)
            _pow_memo[e] = w
        den = (den + k * w) % p
    if den == 0:
        return None
    return num * pow(den, p - 2, p) % p


def _mod_rank_profile(rows: list[list[int]]) -> list[int]:
    p = _PROFILE_P
    m = [r[:] for r in rows]
    ncols = len(m[0]) if m else 0
    piv: list[int] = []
    top = 0
    for c in range(ncols):
        hit = next((r for r in range(top, len(m)) if m[r][c]), None)
        if hit is None:
            continue
        m[top], m[hit] = m[hit], m[top]
        inv = pow(m[top][c], p - 2, p)
        prow = m[top]
        for r in range(top + 1, len(m)):
            f = m[r][c]
            if f:
                f = f * inv % p
                row = m[r]
                for cc in range(c, ncols):
                    row[cc] = (row[cc] - f * prow[cc]) % p
        piv.append(c)
        top += 1
        if top == len(m):
            break
    return piv


def build_module(
    datum: RootDatum, lam: Weight, dim_cap: int = 5000, _numeric: bool = True
) -> HWModule:
    """Construct V(lam) for dominant lam, all weight spaces at once."""
    if not lam.is_dominant():
        raise ValueError(f"highest weight {lam.coords} is not dominant")
    total = weyl_dim(datum, lam)
    if total > dim_cap:
        raise ValueError(f"module dimension {total} exceeds cap {dim_cap}")

    mod = HWModule(datum, lam)
    alpha_w = {i: datum.root_to_weight(datum.alpha(i)) for i in datum.index_set}

    mod.basis[lam] = ((),)
    mod.gram[lam] = [[S_ONE]]
    mod.gram_inv[lam] = [[S_ONE]]
    weights_order = [lam]
    prev_layer = [lam]

    while prev_layer:
        cand_set = {mu - alpha_w[i] for mu in prev_layer for i in datum.index_set}
        new_layer = []
        for mu in sorted(cand_set, key=lambda w: w.coords):
            # candidate vectors f_i . b_w, tagged (i,) + tag(b_w)
            cands: list[tuple[int, Weight, int, tuple[int, ...]]] = []
            for i in datum.index_set:
                parent = mu + alpha_w[i]
                tags = mod.basis.get(parent)
                if tags:
                    for widx, w in enumerate(tags):
                        cands.append((i, parent, widx, (i,) + w))
            if not cands:
                continue
            cands.sort(key=lambda t: t[3])
            n = len(cands)

            # z[i][c] = coefficients of f_{j_c} e_i b_{w_c} over basis(mu + alpha_i),
            # plus the commutator delta-term when i = j_c
            zvecs: dict[int, list[list[ScalarQ]]] = {}
            for i in sorted({t[0] for t in cands}):
                parent_i = mu + alpha_w[i]
                tdim = len(mod.basis[parent_i])
                per_col = []
                for (j, parent_j, widx, _tag) in cands:
                    z = [S_ZERO] * tdim
                    inter = parent_j + alpha_w[i]
                    ecols = mod.emat.get((i, parent_j))
                    if ecols is not None and inter in mod.basis:
                        evec = list(ecols[widx])
                        fcols = mod.fmat.get((j, inter))
                        if fcols is not None:
                            z = _apply_cols(fcols, evec, tdim)
                    if i == j:
                        hval = datum.h_weight(i, parent_j)
                        if hval:
                            bump = qint_i(hval, datum.di(i)).to_scalar()
                            z[widx] = z[widx] + bump
                    per_col.append(z)
                zvecs[i] = per_col

            def exact_row(ridx: int) -> list[ScalarQ]:
                i, parent_i, vidx, _t = cands[ridx]
                grow = mod.gram[parent_i][vidx]
                per_col = zvecs[i]
                row = []
                for c in range(n):
                    acc = S_ZERO
                    for s, zc in enumerate(per_col[c]):
                        if zc.num.c and grow[s].num.c:
                            acc = acc + grow[s] * zc
                    row.append(acc)
                return row

            # guess the rank profile at a fixed modular point; the guess is
            # certified by the exact solve below (a singular block falls
            # through to the exact echelon, a short one fails the final
            # dimension check and triggers an exact rebuild)
            sel: list[int] | None = None
            sel_rows: list[list[ScalarQ]] = []
            sol_cols: list[list[ScalarQ]] | None = None
            unsel: list[int] = []

            def try_block(chosen: list[int], rows_x: list[list[ScalarQ]]):
                block = [[row[c] for c in chosen] for row in rows_x]
                rhs = [[row[c] for row in rows_x] for c in range(n) if c not in chosen]
                return block, solve_square_multi(block, rhs)

            if _numeric:
                rows_mod: list[list[int]] | None = []
                zmod: dict[int, list[list[int | None]]] = {
                    i: [[_eval_mod(zc) for zc in col] for col in per_col]
                    for i, per_col in zvecs.items()
                }
                for i, parent_i, vidx, _tag in cands:
                    grow_mod = [_eval_mod(x) for x in mod.gram[parent_i][vidx]]
                    per_col = zmod[i]
                    row = []
                    for c in range(n):
                        acc = 0
                        for gm, zm in zip(grow_mod, per_col[c]):
                            if gm is None or zm is None:
                                rows_mod = None
                                break
                            acc = (acc + gm * zm) % _PROFILE_P
                        if rows_mod is None:
                            break
                        row.append(acc)
                    if rows_mod is None:
                        break
                    rows_mod.append(row)
                if rows_mod is not None:
                    guess = _mod_rank_profile(rows_mod)
                    if guess:
                        rows_x = [exact_row(r) for r in guess]
                        try:
                            g, sol_cols = try_block(guess, rows_x)
                            sel = guess
                            sel_rows = rows_x
                        except ValueError:
                            sel = None

            if sel is None:
                gram_full = [exact_row(r) for r in range(n)]
                sel = column_rank_profile(gram_full)
                if sel:
                    sel_rows = [gram_full[r] for r in sel]
                    g, sol_cols = try_block(sel, sel_rows)
            if not sel:
                continue
            unsel = [c for c in range(n) if c not in sel]

            mod.basis[mu] = tuple(cands[c][3] for c in sel)
            mod.gram[mu] = g
            weights_order.append(mu)
            new_layer.append(mu)

            # express every candidate over the selected basis to get the
            # f_i action matrices out of the parents
            sel_pos = {c: k for k, c in enumerate(sel)}
            unsel_pos = {c: k for k, c in enumerate(unsel)}
            fcols_by_key: dict[tuple[int, Weight], list] = {}
            for cidx, (j, parent_j, widx, _tag) in enumerate(cands):
                key = (j, parent_j)
                store = fcols_by_key.get(key)
                if store is None:
                    store = [None] * len(mod.basis[parent_j])
                    fcols_by_key[key] = store
                if cidx in sel_pos:
                    col = [S_ZERO] * len(sel)
                    col[sel_pos[cidx]] = S_ONE
                else:
                    col = sol_cols[unsel_pos[cidx]]
                store[widx] = tuple(col)
            for key, store in fcols_by_key.items():
                assert all(col is not None for col in store)
                mod.fmat[key] = store

        # raising action out of the new layer, now that its bases are fixed
        for mu in new_layer:
            tags = mod.basis[mu]
            for i in datum.index_set:
                nu = mu + alpha_w[i]
                if nu not in mod.basis:
                    continue
                tdim = len(mod.basis[nu])
                cols = []
                for (j, *w) in tags:
                    w = tuple(w)
                    parent_j = mu + alpha_w[j]
                    widx = mod.basis[parent_j].index(w)
                    z = [S_ZERO] * tdim
                    inter = parent_j + alpha_w[i]
                    ecols = mod.emat.get((i, parent_j))
                    if ecols is not None and inter in mod.basis:
                        evec = list(ecols[widx])
                        fcols = mod.fmat.get((j, inter))
                        if fcols is not None:
                            z = _apply_cols(fcols, evec, tdim)
                    if i == j:
                        hval = datum.h_weight(i, parent_j)
                        if hval:
                            bump = qint_i(hval, datum.di(i)).to_scalar()
                            z[widx] = z[widx] + bump
                    cols.append(tuple(z))
                mod.emat[(i, mu)] = cols

        prev_layer = new_layer

    mod.weights = tuple(weights_order)
    mod.dim = sum(len(b) for b in mod.basis.values())
    if mod.dim != total:
        if _numeric:
            return build_module(datum, lam, dim_cap, _numeric=False)
        raise AssertionError((mod.dim, total))
    return mod


def get_module(datum: RootDatum, lam: Weight, dim_cap: int = 5000) -> HWModule:
    """Module cache keyed by highest weight; safe under concurrent use."""
    key = lam.coords
    mod = datum._module_cache.get(key)
    if mod is not None:
        return mod
    with datum._build_lock:
        mod = datum._module_cache.get(key)
        if mod is None:
            mod = build_module(datum, lam, dim_cap)
            datum._module_cache[key] = mod
    return mod


# ---------------------------------------------------------------------------
# Chevalley actions


def act_f(i: int, vec: ModuleVector) -> ModuleVector:
    mod = vec.mod
    alpha = mod.datum.root_to_weight(mod.datum.alpha(i))
    out: dict[Weight, list[ScalarQ]] = {}
    for mu, coeffs in vec.parts.items():
        cols = mod.fmat.get((i, mu))
        if cols is None:
            continue
        target = mu - alpha
        acc = out.get(target)
        if acc is None:
            acc = [S_ZERO] * len(mod.basis[target])
            out[target] = acc
        for cidx, c in enumerate(coeffs):
            if c.num.c:
                for r, a in enumerate(cols[cidx]):
                    if a.num.c:
                        acc[r] = acc[r] + a * c
    return ModuleVector(mod, out)


def act_e(i: int, vec: ModuleVector) -> ModuleVector:
    mod = vec.mod
    alpha = mod.datum.root_to_weight(mod.datum.alpha(i))
    out: dict[Weight, list[ScalarQ]] = {}
    for mu, coeffs in vec.parts.items():
        cols = mod.emat.get((i, mu))
        if cols is None:
            continue
        target = mu + alpha
        acc = out.get(target)
        if acc is None:
            acc = [S_ZERO] * len(mod.basis[target])
            out[target] = acc
        for cidx, c in enumerate(coeffs):
            if c.num.c:
                for r, a in enumerate(cols[cidx]):
                    if a.num.c:
                        acc[r] = acc[r] + a * c
    return ModuleVector(mod, out)


@lru_cache(maxsize=None)
def _inv_qfact(a: int, d: int) -> ScalarQ:
    return qfact_i(a, d).to_scalar().inverse()


@lru_cache(maxsize=None)
def _inv_qint(a: int, d: int) -> ScalarQ:
    return qint_i(a, d).to_scalar().inverse()


def act_f_divided(i: int, a: int, vec: ModuleVector) -> ModuleVector:
    """Divided power f_i^{(a)} = f_i^a / [a]_{q_i}!."""
    if a < 0:
        raise ValueError("divided power needs a nonnegative exponent")
    for _ in range(a):
        vec = act_f(i, vec)
    if a > 1:
        vec = vec.scaled(_inv_qfact(a, vec.mod.datum.di(i)))
    return vec


def act_e_divided(i: int, a: int, vec: ModuleVector) -> ModuleVector:
    if a < 0:
        raise ValueError("divided power needs a nonnegative exponent")
    for _ in range(a):
        vec = act_e(i, vec)
    if a > 1:
        vec = vec.scaled(_inv_qfact(a, vec.mod.datum.di(i)))
    return vec


def contravariant_form(v: ModuleVector, w: ModuleVector) -> ScalarQ:
    """The symmetric form with (u_lam, u_lam) = 1 and (f_i x, y) = (x, e_i y)."""
    if v.mod is not w.mod:
        raise ValueError("vectors live in different modules")
    mod = v.mod
    acc = S_ZERO
    for mu, vc in v.parts.items():
        wc = w.parts.get(mu)
        if wc is None:
            continue
        g = mod.gram[mu]
        for r, a in enumerate(vc):
            if not a.num.c:
                continue
            row = g[r]
            for s, b in enumerate(wc):
                if b.num.c and row[s].num.c:
                    acc = acc + a * row[s] * b
    return acc


# ---------------------------------------------------------------------------
# extremal vectors and the braid action


def extremal_vector(mod: HWModule, word: tuple[int, ...]) -> ModuleVector:
    """u_{w lam} for a reduced word of w, by the divided f-monomial

    f_{i_1}^{(c_1)} ... f_{i_l}^{(c_l)} . u_lam,
    c_m = <h_{i_m}, s_{i_{m+1}} ... s_{i_l} lam>,

    applied rightmost factor first.  Memoized per word."""
    word = tuple(word)
    got = mod._extremal_memo.get(word)
    if got is not None:
        return got
    vec = mod.highest()
    wt = mod.lam
    for i in reversed(word):
        c = mod.datum.h_weight(i, wt)
        if c < 0:
            raise ValueError(f"word {word} is not reduced for weight {mod.lam.coords}")
        vec = act_f_divided(i, c, vec)
        wt = mod.datum.reflect_weight(i, wt)
    mod._extremal_memo[word] = vec
    return vec


def braid_T(mod: HWModule, i: int, vec: ModuleVector) -> ModuleVector:
    """Lusztig symmetry T_i, weight component by weight component:

    T_i(u) = sum over a, b, c >= 0 with -a + b - c = <h_i, mu> of
             (-1)^b q_i^{-ac+b} e_i^{(a)} f_i^{(b)} e_i^{(c)} . u.
    """
    di = mod.datum.di(i)
    out = mod.zero()
    for mu, coeffs in vec.parts.items():
        h = mod.datum.h_weight(i, mu)
        ec = ModuleVector(mod, {mu: coeffs})
        c = 0
        while not ec.is_zero():
            fb = ec
            b = 0
            while not fb.is_zero():
                a = b - c - h
                if a >= 0:
                    term = act_e_divided(i, a, fb)
                    if not term.is_zero():
                        coeff = ScalarQ.q_power(di * (b - a * c))
                        if b % 2:
                            coeff = coeff.mul_int(-1)
                        out = out + term.scaled(coeff)
                b += 1
                fb = act_f(i, fb).scaled(_inv_qint(b, di))
            c += 1
            ec = act_e(i, ec).scaled(_inv_qint(c, di))
    return out


def braid_T_inv(mod: HWModule, i: int, vec: ModuleVector) -> ModuleVector:
    """Inverse of T_i, by inverting its matrix between weight spaces."""
    out = mod.zero()
    for nu, coeffs in vec.parts.items():
        key = (i, nu)
        minv = mod._tinv_memo.get(key)
        src = mod.datum.reflect_weight(i, nu)
        sdim = len(mod.basis[src])
        if minv is None:
            rows = [[S_ZERO] * sdim for _ in range(len(mod.basis[nu]))]
            for k in range(sdim):
                img = braid_T(mod, i, mod.basis_vector(src, k))
                part = img.parts.get(nu)
                if part is not None:
                    for r, c in enumerate(part):
                        rows[r][k] = c
            minv = invert_matrix(rows)
            mod._tinv_memo[key] = minv
        out = out + ModuleVector(mod, {src: mat_vec(minv, list(coeffs))})
    return out


def extremal_by_braid(mod: HWModule, word: tuple[int, ...]) -> ModuleVector:
    """u_{w lam} as (T_{w^{-1}})^{-1}(u_lam): T_{i_l}^{-1} acts first."""
    vec = mod.highest()
    for i in reversed(word):
        vec = braid_T_inv(mod, i, vec)
    return vec
