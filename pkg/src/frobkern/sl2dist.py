"""SL(2) Frobenius kernel representations in exact F_p arithmetic.

Three algebra families, all built on the generic engine:

* ``restricted_sl2(p)``: the restricted enveloping algebra of sl2, with
  generators e, f, h.  Comes with all p simple modules and all projective
  covers designated.
* ``graded_restricted_sl2(p)``: the same algebra with the weight grading
  (e has degree 2, f degree -2).  Graded modules model the category where
  the torus action is kept; degree shifts that change the h-action are
  killed by the Hom machinery automatically.
* ``distribution_sl2(p, r)`` for r >= 2: the r-th kernel, generated by the
  divided powers e^(p^i), f^(p^i) for i < r (named e0, f0, e1, f1, ...).
  All p^r simples are designated; projective covers are designated for the
  family whose restriction to higher levels is a Steinberg twist (all
  base-p digits above the first equal p-1), which is the family with a
  known closed construction, plus the Steinberg module itself.

Module constructors: simple modules via tensor products of Frobenius
twists, baby Verma modules via divided-power binomial formulas, structured
projective covers via splitting of tilting tensor products with the full
divided-power ladder retained, hearts rad P / soc P, and the left regular
module of the restricted algebra in the PBW basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import DEFAULT_SEED
from .algrep import (
    GenAlgebra,
    GenAlgebraModule,
    meataxe_split,
    meataxe_split_with_bases,
    quotient,
    radical,
    socle,
    submodule,
    top,
)
from .fplinalg import FpMat, fpmat, identity, kron, solve, zeros


def gbinom(x: int, k: int, p: int) -> int:
    """binom(x, k) mod p for any integer x and k >= 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= x - i
    return (num // math.factorial(k)) % p


def base_p_digits(lam: int, p: int, r: int) -> List[int]:
    if not 0 <= lam < p**r:
        raise ValueError(f"weight {lam} outside [0, p^{r})")
    return [(lam // p**i) % p for i in range(r)]


# ---------------------------------------------------------------------------
# relation checkers


def _restricted_checker(action: Dict[str, FpMat], p: int) -> List[str]:
    e, f, h = action["e"], action["f"], action["h"]
    probs = []
    if h @ e - e @ h != e.scale(2):
        probs.append("[h,e] != 2e")
    if h @ f - f @ h != f.scale(-2):
        probs.append("[h,f] != -2f")
    if e @ f - f @ e != h:
        probs.append("[e,f] != h")
    if not e.power(p).is_zero():
        probs.append("e^p != 0")
    if not f.power(p).is_zero():
        probs.append("f^p != 0")
    if h.power(p) != h:
        probs.append("h^p != h")
    return probs


def _dist_checker(r: int):
    # identities among divided powers that are expressible in the generators:
    # nilpotency, h-weights, commuting powers of one root vector, and the
    # mixed commutators [e, f^(p^j)] = f^(p^j - 1)(h+1) and its mirror,
    # with f^(p^j - 1) rewritten as (-1)^j f0^(p-1) ... f_{j-1}^(p-1).
    # Commutators between two higher divided powers involve binom(h, p^i),
    # which is not a polynomial in the generators, and are not checked.
    def checker(action: Dict[str, FpMat], p: int) -> List[str]:
        probs = []
        e = [action[f"e{i}"] for i in range(r)]
        f = [action[f"f{i}"] for i in range(r)]
        h = e[0] @ f[0] - f[0] @ e[0]
        n = e[0].rows
        eye = identity(n, p)
        for i in range(r):
            if not e[i].power(p).is_zero():
                probs.append(f"e{i}^p != 0")
            if not f[i].power(p).is_zero():
                probs.append(f"f{i}^p != 0")
        if h @ e[0] - e[0] @ h != e[0].scale(2):
            probs.append("[h,e0] != 2 e0")
        if h @ f[0] - f[0] @ h != f[0].scale(-2):
            probs.append("[h,f0] != -2 f0")
        if h.power(p) != h:
            probs.append("h^p != h")
        for i in range(1, r):
            if h @ e[i] != e[i] @ h or h @ f[i] != f[i] @ h:
                probs.append(f"h does not commute with level {i}")
            for j in range(i):
                if e[j] @ e[i] != e[i] @ e[j]:
                    probs.append(f"[e{j},e{i}] != 0")
                if f[j] @ f[i] != f[i] @ f[j]:
                    probs.append(f"[f{j},f{i}] != 0")
        for j in range(1, r):
            sign = 1 if j % 2 == 0 else -1
            prod_f = eye
            prod_e = eye
            for i in range(j):
                prod_f = prod_f @ f[i].power(p - 1)
                prod_e = prod_e @ e[i].power(p - 1)
            if e[0] @ f[j] - f[j] @ e[0] != (prod_f @ (h + eye)).scale(sign):
                probs.append(f"[e0, f{j}] != (-1)^{j} f^(p^{j}-1) (h+1)")
            if e[j] @ f[0] - f[0] @ e[j] != ((h + eye) @ prod_e).scale(sign):
                probs.append(f"[e{j}, f0] != (-1)^{j} (h+1) e^(p^{j}-1)")
        return probs

    return checker


# ---------------------------------------------------------------------------
# rational divided-power ladders


@dataclass(frozen=True)
class _Ladder:
    """Matrices of e^(k), f^(k) for k <= p and of h on one module."""

    p: int
    dim: int
    e_pows: Tuple[FpMat, ...]
    f_pows: Tuple[FpMat, ...]
    h: FpMat


def _simple_ladder(p: int, mu: int) -> _Ladder:
    """Divided powers on the simple module of highest weight mu <= p-1.

    Basis v_0 .. v_mu with v_a = f^(a) v_0, so f^(k) v_a = binom(a+k, k)
    v_{a+k} and e^(k) v_a = binom(mu-a+k, k) v_{a-k}.
    """
    n = mu + 1
    e_pows = []
    f_pows = []
    for k in range(p + 1):
        em = np.zeros((n, n), dtype=np.int64)
        fm = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            if a - k >= 0:
                em[a - k, a] = gbinom(mu - a + k, k, p)
            if a + k < n:
                fm[a + k, a] = gbinom(a + k, k, p)
        e_pows.append(fpmat(em, p))
        f_pows.append(fpmat(fm, p))
    h = fpmat(np.diag([(mu - 2 * a) % p for a in range(n)]), p)
    return _Ladder(p, n, tuple(e_pows), tuple(f_pows), h)


def _tensor_ladder(a: _Ladder, b: _Ladder) -> _Ladder:
    """Ladder on the tensor product via the divided-power comultiplication."""
    p = a.p
    e_pows = []
    f_pows = []
    for k in range(p + 1):
        esum = zeros(a.dim * b.dim, a.dim * b.dim, p)
        fsum = zeros(a.dim * b.dim, a.dim * b.dim, p)
        for i in range(k + 1):
            esum = esum + kron(a.e_pows[i], b.e_pows[k - i])
            fsum = fsum + kron(a.f_pows[i], b.f_pows[k - i])
        e_pows.append(esum)
        f_pows.append(fsum)
    eye_a = identity(a.dim, p)
    eye_b = identity(b.dim, p)
    h = kron(a.h, eye_b) + kron(eye_a, b.h)
    return _Ladder(p, a.dim * b.dim, tuple(e_pows), tuple(f_pows), h)


_LADDER_CACHE: Dict[Tuple[int, int], _Ladder] = {}


def _pim_ladder(p: int, lam0: int, alg2: Optional[GenAlgebra] = None) -> _Ladder:
    """Structured projective cover of the weight-lam0 simple at level one.

    Obtained as the dimension-2p direct summand of St tensor L(p-1-lam0)
    with top of weight lam0, split over the second kernel so the summand
    basis is stable under e^(p) and f^(p); the full ladder is compressed
    to that basis.
    """
    key = (p, lam0)
    if key in _LADDER_CACHE:
        return _LADDER_CACHE[key]
    if lam0 == p - 1:
        lad = _simple_ladder(p, p - 1)
        _LADDER_CACHE[key] = lad
        return lad
    tens = _tensor_ladder(_simple_ladder(p, p - 1), _simple_ladder(p, p - 1 - lam0))
    if alg2 is None:
        alg2 = distribution_sl2(p, 2)
    carrier = GenAlgebraModule(
        alg2,
        {
            "e0": tens.e_pows[1],
            "f0": tens.f_pows[1],
            "e1": tens.e_pows[p],
            "f1": tens.f_pows[p],
        },
    )
    pick = None
    for factor, basis in meataxe_split_with_bases(carrier):
        if factor.dim == 2 * p and top(factor) == [(lam0, 1)]:
            pick = basis
            break
    if pick is None:
        raise RuntimeError(f"no projective summand with top {lam0} found")

    def compress(mat: FpMat) -> FpMat:
        coords = solve(pick, mat @ pick)
        if coords is None:
            raise RuntimeError("summand basis is not stable under the ladder")
        return coords

    lad = _Ladder(
        p,
        2 * p,
        tuple(compress(m) for m in tens.e_pows),
        tuple(compress(m) for m in tens.f_pows),
        compress(tens.h),
    )
    _LADDER_CACHE[key] = lad
    return lad


# ---------------------------------------------------------------------------
# algebras


@lru_cache(maxsize=None)
def restricted_sl2(p: int) -> GenAlgebra:
    """u(sl2) over F_p with simples and projective covers designated."""
    alg = GenAlgebra(f"u-sl2-p{p}", p, ("e", "f", "h"), _restricted_checker, meta={"r": 1})
    simples = []
    for mu in range(p):
        lad = _simple_ladder(p, mu)
        simples.append(
            GenAlgebraModule(alg, {"e": lad.e_pows[1], "f": lad.f_pows[1], "h": lad.h})
        )
    alg.designate(simples)
    alg.projectives = [_split_pim(alg, lam0, graded=False) for lam0 in range(p)]
    return alg


@lru_cache(maxsize=None)
def graded_restricted_sl2(p: int) -> GenAlgebra:
    """u(sl2) with the weight grading; simples carry top degree = weight."""
    alg = GenAlgebra(
        f"u-sl2T-p{p}",
        p,
        ("e", "f", "h"),
        _restricted_checker,
        shifts={"e": 2, "f": -2, "h": 0},
        meta={"r": 1},
    )
    simples = []
    for mu in range(p):
        lad = _simple_ladder(p, mu)
        simples.append(
            GenAlgebraModule(
                alg,
                {"e": lad.e_pows[1], "f": lad.f_pows[1], "h": lad.h},
                grading=[mu - 2 * a for a in range(mu + 1)],
            )
        )
    alg.designate(simples)
    alg.projectives = [_split_pim(alg, lam0, graded=True) for lam0 in range(p)]
    return alg


def _split_pim(alg: GenAlgebra, lam0: int, graded: bool) -> GenAlgebraModule:
    p = alg.p
    if lam0 == p - 1:
        return alg.simples[p - 1]
    st = alg.simples[p - 1]
    co = alg.simples[p - 1 - lam0]
    eye_a = identity(st.dim, p)
    eye_b = identity(co.dim, p)
    action = {
        "e": kron(st.mat("e"), eye_b) + kron(eye_a, co.mat("e")),
        "f": kron(st.mat("f"), eye_b) + kron(eye_a, co.mat("f")),
        "h": kron(st.mat("h"), eye_b) + kron(eye_a, co.mat("h")),
    }
    grading = None
    if graded:
        grading = [da + db for da in st.grading for db in co.grading]
    tens = GenAlgebraModule(alg, action, grading)
    for factor in meataxe_split(tens, rng=DEFAULT_SEED):
        if factor.dim != 2 * p:
            continue
        t = top(factor)
        if graded:
            # canonical alignment: top degree lam0, i.e. shift 0 on the top
            if len(t) == 1 and t[0][0] == lam0:
                return factor.shifted(-t[0][1])
        elif t == [(lam0, 1)]:
            return factor
    raise RuntimeError(f"no projective summand with top {lam0} found")


@lru_cache(maxsize=None)
def distribution_sl2(p: int, r: int) -> GenAlgebra:
    """Distribution algebra of the r-th kernel of SL2, r >= 2."""
    if r < 2:
        raise ValueError("use restricted_sl2 for r = 1")
    gens = tuple(x for i in range(r) for x in (f"e{i}", f"f{i}"))
    alg = GenAlgebra(f"dist-sl2-p{p}-r{r}", p, gens, _dist_checker(r), meta={"r": r})
    simples = [_tensor_simple(alg, lam) for lam in range(p**r)]
    alg.designate(simples)
    projs: List[Optional[GenAlgebraModule]] = [None] * p**r
    projs[p**r - 1] = simples[p**r - 1]
    steinberg_tail = p**r - p  # digits p-1 at every level above the first
    for lam0 in range(p - 1):
        ladder = _pim_ladder(p, lam0, alg2=alg if r == 2 else None)
        projs[lam0 + steinberg_tail] = _assemble_twist_projective(alg, ladder, r)
    alg.projectives = projs
    return alg


def _kron_chain(mats: List[FpMat]) -> FpMat:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def _tensor_simple(alg: GenAlgebra, lam: int) -> GenAlgebraModule:
    """Simple module of weight lam as a tensor of Frobenius twists.

    The divided power e^(p^j) acts through factor j alone: any other split
    of p^j across the factors needs a divided power that vanishes on a
    simple of highest weight below p.
    """
    p = alg.p
    r = alg.meta["r"]
    digits = base_p_digits(lam, p, r)
    ladders = [_simple_ladder(p, d) for d in digits]
    eyes = [identity(l.dim, p) for l in ladders]
    action = {}
    for j in range(r):
        action[f"e{j}"] = _kron_chain(
            [l.e_pows[1] if i == j else eyes[i] for i, l in enumerate(ladders)]
        )
        action[f"f{j}"] = _kron_chain(
            [l.f_pows[1] if i == j else eyes[i] for i, l in enumerate(ladders)]
        )
    return GenAlgebraModule(alg, action)


def _assemble_twist_projective(
    alg: GenAlgebra, base: _Ladder, r: int
) -> GenAlgebraModule:
    """Projective cover base tensor Steinberg twists, with its cross terms.

    e^(p^j) on the product is e acting on factor j plus the single surviving
    comultiplication term e^(p) on the base times e^(p-1) on every Steinberg
    factor below level j; everything else vanishes on the factors involved.
    """
    p = alg.p
    st = _simple_ladder(p, p - 1)
    eye_b = identity(base.dim, p)
    eye_s = identity(st.dim, p)

    def chain(base_mat: FpMat, per_level: Dict[int, FpMat]) -> FpMat:
        return _kron_chain(
            [base_mat] + [per_level.get(i, eye_s) for i in range(1, r)]
        )

    action = {"e0": chain(base.e_pows[1], {}), "f0": chain(base.f_pows[1], {})}
    for j in range(1, r):
        direct_e = chain(eye_b, {j: st.e_pows[1]})
        direct_f = chain(eye_b, {j: st.f_pows[1]})
        cross_e = chain(base.e_pows[p], {i: st.e_pows[p - 1] for i in range(1, j)})
        cross_f = chain(base.f_pows[p], {i: st.f_pows[p - 1] for i in range(1, j)})
        action[f"e{j}"] = direct_e + cross_e
        action[f"f{j}"] = direct_f + cross_f
    return GenAlgebraModule(alg, action)


# ---------------------------------------------------------------------------
# module constructors


def simple_module(p: int, r: int, lam: int) -> GenAlgebraModule:
    if r == 1:
        if not 0 <= lam < p:
            raise ValueError(f"weight {lam} outside [0, {p})")
        return restricted_sl2(p).simples[lam]
    return distribution_sl2(p, r).simples[lam]


def graded_simple_module(p: int, lam: int) -> GenAlgebraModule:
    """Level-one graded simple with top degree lam (any integer)."""
    alg = graded_restricted_sl2(p)
    mu = lam % p
    base = alg.simples[mu]
    return base if lam == mu else base.shifted(lam - mu)


def verma_module(p: int, r: int, lam: int) -> GenAlgebraModule:
    """Baby Verma module: basis f^(a) v for a < p^r, head of weight lam."""
    digits = base_p_digits(lam, p, r)  # validates the range
    n = p**r
    alg = restricted_sl2(p) if r == 1 else distribution_sl2(p, r)
    if r == 1:
        e = np.zeros((n, n), dtype=np.int64)
        f = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            if a + 1 < n:
                f[a + 1, a] = a + 1
            if a - 1 >= 0:
                e[a - 1, a] = (lam + 1 - a) % p
        h = np.diag([(lam - 2 * a) % p for a in range(n)])
        return GenAlgebraModule(
            alg, {"e": fpmat(e, p), "f": fpmat(f, p), "h": fpmat(h, p)}
        )
    action = {}
    for i in range(r):
        q = p**i
        e = np.zeros((n, n), dtype=np.int64)
        f = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            if a + q < n:
                f[a + q, a] = gbinom(a + q, q, p)
            if a - q >= 0:
                e[a - q, a] = gbinom(lam + q - a, q, p)
        action[f"e{i}"] = fpmat(e, p)
        action[f"f{i}"] = fpmat(f, p)
    return GenAlgebraModule(alg, action)


def graded_verma_module(p: int, lam: int) -> GenAlgebraModule:
    """Level-one Verma with its weight grading; lam may be any integer."""
    alg = graded_restricted_sl2(p)
    n = p
    e = np.zeros((n, n), dtype=np.int64)
    f = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        if a + 1 < n:
            f[a + 1, a] = a + 1
        if a - 1 >= 0:
            e[a - 1, a] = (lam + 1 - a) % p
    h = np.diag([(lam - 2 * a) % p for a in range(n)])
    return GenAlgebraModule(
        alg,
        {"e": fpmat(e, p), "f": fpmat(f, p), "h": fpmat(h, p)},
        grading=[lam - 2 * a for a in range(n)],
    )


def principal_indecomposable(p: int, r: int, lam: int) -> GenAlgebraModule:
    """Projective cover of the weight-lam simple, where a construction exists."""
    if r == 1:
        if not 0 <= lam < p:
            raise ValueError(f"weight {lam} outside [0, {p})")
        return restricted_sl2(p).projective_of(lam)
    return distribution_sl2(p, r).projective_of(lam)


def graded_principal_indecomposable(p: int, lam0: int) -> GenAlgebraModule:
    return graded_restricted_sl2(p).projective_of(lam0)


def heart_module(p: int, r: int, lam: int) -> GenAlgebraModule:
    """rad P / soc P of the projective cover of the weight-lam simple."""
    P = principal_indecomposable(p, r, lam)
    rad = radical(P)
    if rad.cols == 0:
        raise ValueError(f"weight {lam} gives a simple projective: no heart")
    R = submodule(P, rad)
    _, soc_basis = socle(P)
    coords = solve(rad, soc_basis)
    if coords is None:
        raise RuntimeError("socle does not sit inside the radical")
    heart, _ = quotient(R, coords)
    return heart


def frobenius_twist(M: GenAlgebraModule, i: int) -> GenAlgebraModule:
    """Pull M through the i-th Frobenius: lives over the (i+1)-st kernel."""
    if i < 1:
        raise ValueError("twist exponent must be positive")
    if M.algebra.meta.get("r") != 1 or M.algebra.shifts is not None:
        raise ValueError("twist is implemented for ungraded level-one modules")
    p = M.algebra.p
    target = distribution_sl2(p, i + 1)
    z = zeros(M.dim, M.dim, p)
    action = {}
    for j in range(i + 1):
        action[f"e{j}"] = M.mat("e") if j == i else z
        action[f"f{j}"] = M.mat("f") if j == i else z
    return GenAlgebraModule(target, action)


# ---------------------------------------------------------------------------
# the regular module in the PBW basis


def regular_module(p: int) -> GenAlgebraModule:
    """Left regular module of u(sl2) on the basis f^a h^b e^c, a,b,c < p."""
    alg = restricted_sl2(p)
    n = p**3

    def idx(a, b, c):
        return (a * p + b) * p + c

    def add(d, key, coeff):
        coeff %= p
        if coeff:
            d[key] = (d.get(key, 0) + coeff) % p

    def reduce_h(b):
        # h^p = h
        return 1 if b == p else b

    fm = np.zeros((n, n), dtype=np.int64)
    hm = np.zeros((n, n), dtype=np.int64)
    em = np.zeros((n, n), dtype=np.int64)
    for a in range(p):
        for b in range(p):
            for c in range(p):
                col = idx(a, b, c)
                if a + 1 < p:
                    fm[idx(a + 1, b, c), col] = 1
                # h f^a h^b e^c = f^a h^{b+1} e^c - 2a f^a h^b e^c
                out: Dict[Tuple[int, int, int], int] = {}
                add(out, (a, reduce_h(b + 1), c), 1)
                add(out, (a, b, c), -2 * a)
                for key, coeff in out.items():
                    hm[idx(*key), col] = coeff
                # e f^a h^b e^c = f^a (h-2)^b e^{c+1}
                #               + a f^{a-1} (h^{b+1} + (1-a) h^b) e^c
                out = {}
                if c + 1 < p:
                    for j in range(b + 1):
                        add(out, (a, j, c + 1), gbinom(b, j, p) * pow(-2, b - j, p))
                if a >= 1:
                    add(out, (a - 1, reduce_h(b + 1), c), a)
                    add(out, (a - 1, b, c), a * (1 - a))
                for key, coeff in out.items():
                    em[idx(*key), col] = (em[idx(*key), col] + coeff) % p
    return GenAlgebraModule(
        alg, {"e": fpmat(em, p), "f": fpmat(fm, p), "h": fpmat(hm, p)}
    )
