"""Modules over generator-presented finite-dimensional algebras.

An algebra is presented by named generators, a relation checker supplied by
the client, and a designated full set of simple modules (plus projective
covers where available).  On top of that this module provides Hom spaces,
tops/radicals/socles, MeatAxe splitting into indecomposables, projective
covers, the Heller operator and its negative powers, isomorphism testing
with explicit witnesses, stable Hom spaces, and resolution traces with a
complexity estimator.

Gradings are plain integers; a generator may carry a degree shift, and a
graded module's action matrices must shift degrees exactly.  All randomness
is seeded (default 0xF0B) so repeated runs agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import DEFAULT_SEED
from .fplinalg import (
    FpMat,
    SpanTracker,
    fpmat,
    hstack,
    identity,
    inverse,
    kernel_basis,
    kron,
    rref,
    solve,
    vstack,
    zeros,
)

# unknown count above which ungraded Hom spaces switch from the one-shot
# commutant system to the generator-spinning method; spinning needs only
# (number of module generators) * dim N unknowns, so it wins early
_DIRECT_LIMIT = 256

# exhaustive-enumeration ceilings for locality proofs and iso fallbacks
_ENUM_LIMIT = 4096


class MeataxeBudgetError(RuntimeError):
    """Splitting was not achieved within the configured trial budget."""


class InconclusiveError(RuntimeError):
    pass


def _rng_of(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if seed_or_rng is None:
        return np.random.default_rng(DEFAULT_SEED)
    return np.random.default_rng(seed_or_rng)


# ---------------------------------------------------------------------------
# Algebras and modules


class GenAlgebra:
    """Generator-presented algebra with designated simples and projectives.

    `relation_checker(action, p)` returns a list of violation messages for a
    candidate action dict.  `shifts` maps generator names to grading shifts;
    None means the algebra carries no grading convention and its modules
    must be ungraded.  `projectives[i]`, when present, is the projective
    cover of `simples[i]`; entries may be None when no construction is
    available for that simple.
    """

    def __init__(
        self,
        algebra_id: str,
        p: int,
        gens: Sequence[str],
        relation_checker: Callable[[Dict[str, FpMat], int], List[str]],
        shifts: Optional[Dict[str, int]] = None,
        meta: Optional[dict] = None,
    ):
        self.algebra_id = algebra_id
        self.p = p
        self.gens = tuple(gens)
        self.relation_checker = relation_checker
        self.shifts = dict(shifts) if shifts is not None else None
        self.simples: List["GenAlgebraModule"] = []
        self.projectives: List[Optional["GenAlgebraModule"]] = []
        self.meta = meta or {}

    def designate(self, simples, projectives=None) -> None:
        self.simples = list(simples)
        self.projectives = list(projectives) if projectives else [None] * len(self.simples)
        if len(self.projectives) != len(self.simples):
            raise ValueError("projectives must align with simples")
        for s in self.simples:
            if len(hom_space(s, s)) != 1:
                raise ValueError("designated simple is not split (End != F_p)")

    def projective_of(self, idx: int) -> "GenAlgebraModule":
        cover = self.projectives[idx]
        if cover is None:
            raise ValueError(
                f"{self.algebra_id}: no projective cover designated for simple #{idx}"
            )
        return cover

    def __repr__(self):
        return f"GenAlgebra({self.algebra_id})"


class GenAlgebraModule:
    """Finite-dimensional module given by one action matrix per generator."""

    def __init__(
        self,
        algebra: GenAlgebra,
        action: Dict[str, FpMat],
        grading: Optional[Sequence[int]] = None,
        check: bool = True,
    ):
        self.algebra = algebra
        self.action = dict(action)
        self.grading = None if grading is None else tuple(int(d) for d in grading)
        dims = {m.rows for m in self.action.values()} | {m.cols for m in self.action.values()}
        if set(self.action) != set(algebra.gens):
            raise ValueError("action must cover exactly the algebra's generators")
        if len(dims) > 1:
            raise ValueError("action matrices must be square of equal size")
        self.dim = dims.pop() if dims else 0
        for m in self.action.values():
            if m.p != algebra.p:
                raise ValueError("module modulus differs from the algebra's")
        if self.grading is not None:
            if algebra.shifts is None:
                raise ValueError(f"{algebra.algebra_id} carries no grading convention")
            if len(self.grading) != self.dim:
                raise ValueError("grading length must equal the dimension")
            self._check_grading()
        if check:
            problems = algebra.relation_checker(self.action, algebra.p)
            if problems:
                raise ValueError(f"relations violated: {problems}")

    def _check_grading(self):
        deg = np.asarray(self.grading)
        for g, m in self.action.items():
            s = self.algebra.shifts[g]
            i, j = np.nonzero(m.a)
            if i.size and not np.array_equal(deg[i], deg[j] + s):
                raise ValueError(f"generator {g} does not shift degrees by {s}")

    @property
    def graded(self) -> bool:
        return self.grading is not None

    def mat(self, g: str) -> FpMat:
        return self.action[g]

    def forget_grading(self) -> "GenAlgebraModule":
        return GenAlgebraModule(self.algebra, self.action, None, check=False)

    def shifted(self, d: int) -> "GenAlgebraModule":
        if not self.graded:
            raise ValueError("cannot shift an ungraded module")
        return GenAlgebraModule(
            self.algebra, self.action, [x + d for x in self.grading], check=False
        )

    def __repr__(self):
        tag = f", degrees {sorted(set(self.grading))}" if self.graded else ""
        return f"<module dim {self.dim} over {self.algebra.algebra_id}{tag}>"


def zero_module(algebra: GenAlgebra, graded: bool = False) -> GenAlgebraModule:
    action = {g: zeros(0, 0, algebra.p) for g in algebra.gens}
    return GenAlgebraModule(algebra, action, [] if graded else None, check=False)


def direct_sum(mods: Sequence[GenAlgebraModule]) -> GenAlgebraModule:
    if not mods:
        raise ValueError("direct_sum of nothing; pass zero_module explicitly")
    alg = mods[0].algebra
    p = alg.p
    for m in mods[1:]:
        if m.algebra is not alg:
            raise ValueError("summands live over different algebras")
    graded = all(m.graded for m in mods)
    action = {}
    for g in alg.gens:
        n = sum(m.dim for m in mods)
        out = np.zeros((n, n), dtype=np.int64)
        i = 0
        for m in mods:
            out[i : i + m.dim, i : i + m.dim] = m.mat(g).a
            i += m.dim
        action[g] = FpMat(out, p)
    grading = None
    if graded:
        grading = [d for m in mods for d in m.grading]
    return GenAlgebraModule(alg, action, grading, check=False)


# ---------------------------------------------------------------------------
# Sub/quotient structures


def _coords_in_basis(basis: FpMat, vectors: FpMat) -> FpMat:
    x = solve(basis, vectors)
    if x is None:
        raise ValueError("vectors do not lie in the span of the basis")
    return x


def submodule(M: GenAlgebraModule, basis: FpMat) -> GenAlgebraModule:
    """Module structure on the span of `basis` columns (must be action-stable)."""
    if basis.cols == 0:
        return zero_module(M.algebra, M.graded)
    action = {}
    for g in M.algebra.gens:
        action[g] = _coords_in_basis(basis, M.mat(g) @ basis)
    grading = None
    if M.graded:
        grading = _degrees_of_columns(basis, M.grading)
    return GenAlgebraModule(M.algebra, action, grading, check=False)


def _degrees_of_columns(basis: FpMat, grading: Sequence[int]) -> List[int]:
    deg = np.asarray(grading)
    out = []
    for k in range(basis.cols):
        support = np.nonzero(basis.a[:, k])[0]
        degs = set(deg[support].tolist())
        if len(degs) != 1:
            raise ValueError("basis column is not homogeneous")
        out.append(degs.pop())
    return out


def homogeneous_basis(span: FpMat, grading: Sequence[int]) -> FpMat:
    """Homogeneous basis of a graded subspace given by arbitrary spanning columns."""
    p = span.p
    deg = np.asarray(grading)
    tracker = SpanTracker(span.rows, p)
    cols: List[np.ndarray] = []
    for d in sorted(set(deg.tolist())):
        mask = deg == d
        for k in range(span.cols):
            v = np.where(mask, span.a[:, k], 0) % p
            if v.any() and tracker.insert(v):
                cols.append(v)
    if len(cols) != rref(span).rank:
        raise ValueError("subspace is not graded")
    if not cols:
        return zeros(span.rows, 0, p)
    return FpMat(np.column_stack(cols), p)


def quotient(M: GenAlgebraModule, sub_basis: FpMat) -> Tuple[GenAlgebraModule, FpMat]:
    """Quotient by the span of `sub_basis`; returns (module, projection matrix)."""
    p = M.algebra.p
    n = M.dim
    red = rref(FpMat(sub_basis.a.T.copy(), p))
    pivots = set(red.pivots)
    comp = [i for i in range(n) if i not in pivots]
    # coordinates on the complement of the pivot columns: e_c maps to itself,
    # while each echelon row says e_pivot = -sum over comp columns mod the span
    ech = red.matrix.a
    full = np.zeros((len(comp), n), dtype=np.int64)
    for k, c in enumerate(comp):
        full[k, c] = 1
    for row, pc in enumerate(red.pivots):
        for k, c in enumerate(comp):
            full[k, pc] = (-ech[row, c]) % p
    projm = FpMat(full % p, p)
    action = {}
    emb = np.zeros((n, len(comp)), dtype=np.int64)
    for k, c in enumerate(comp):
        emb[c, k] = 1
    embm = FpMat(emb, p)
    for g in M.algebra.gens:
        action[g] = projm @ M.mat(g) @ embm
    grading = None
    if M.graded:
        grading = [M.grading[c] for c in comp]
    return GenAlgebraModule(M.algebra, action, grading, check=False), projm


# ---------------------------------------------------------------------------
# Hom spaces


def _hom_direct(M: GenAlgebraModule, N: GenAlgebraModule, graded: bool) -> List[FpMat]:
    p = M.algebra.p
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    if graded:
        degM = np.asarray(M.grading)
        degN = np.asarray(N.grading)
        allowed = np.flatnonzero((degN[:, None] == degM[None, :]).T.reshape(-1))
    else:
        allowed = np.arange(m * n)
    if allowed.size == 0:
        return []
    blocks = []
    eye_m = np.eye(m, dtype=np.int64)
    eye_n = np.eye(n, dtype=np.int64)
    for g in M.algebra.gens:
        row = (np.kron(eye_m, N.mat(g).a) - np.kron(M.mat(g).a.T, eye_n)) % p
        blocks.append(row[:, allowed])
    system = FpMat(np.vstack(blocks) % p, p)
    ker = kernel_basis(system)
    out = []
    for k in range(ker.cols):
        flat = np.zeros(m * n, dtype=np.int64)
        flat[allowed] = ker.a[:, k]
        out.append(FpMat(flat.reshape(n, m, order="F").copy() % p, p))
    return out


def generating_set(M: GenAlgebraModule) -> Tuple[FpMat, List[tuple], FpMat]:
    """Greedy generating vectors with a spun basis and its derivation forest.

    Returns (basis matrix B, derivations, generator columns).  Derivations
    record how each basis column arises: ("root", j) for the j-th generator
    vector, ("mul", g, t) for generator g applied to column t.
    """
    p = M.algebra.p
    n = M.dim
    tracker = SpanTracker(n, p)
    basis_cols: List[np.ndarray] = []
    derivs: List[tuple] = []
    gen_cols: List[np.ndarray] = []
    nxt = 0
    while tracker.dim < n:
        while nxt < n:
            v = np.zeros(n, dtype=np.int64)
            v[nxt] = 1
            nxt += 1
            if not tracker.contains(v):
                break
        else:
            raise RuntimeError("standard basis exhausted before spanning")
        tracker.insert(v)
        basis_cols.append(v)
        derivs.append(("root", len(gen_cols)))
        gen_cols.append(v)
        frontier = [len(basis_cols) - 1]
        while frontier:
            t = frontier.pop(0)
            for g in M.algebra.gens:
                w = (M.mat(g).a @ basis_cols[t]) % p
                if w.any() and tracker.insert(w):
                    basis_cols.append(w)
                    derivs.append(("mul", g, t))
                    frontier.append(len(basis_cols) - 1)
    B = FpMat(np.column_stack(basis_cols) % p, p)
    G = FpMat(np.column_stack(gen_cols) % p, p)
    return B, derivs, G


def _hom_by_spinning(M: GenAlgebraModule, N: GenAlgebraModule) -> List[FpMat]:
    # a hom is determined by the images of module generators of M; spin a
    # basis of M from them, track word operators on N, and solve the
    # compatibility system in the generator images only
    p = M.algebra.p
    m, n = M.dim, N.dim
    B, derivs, G = generating_set(M)
    k = G.cols
    Binv = inverse(B)
    W = np.zeros((m, n, k * n), dtype=np.int64)
    for t, d in enumerate(derivs):
        if d[0] == "root":
            j = d[1]
            W[t, :, j * n : (j + 1) * n] = np.eye(n, dtype=np.int64)
        else:
            _, g, parent = d
            W[t] = (N.mat(g).a @ W[parent]) % p
    rows = []
    for g in M.algebra.gens:
        C = (Binv.a @ M.mat(g).a @ B.a) % p  # column t: coords of g*b_t in B
        lhs = np.einsum("ab,tbk->tak", N.mat(g).a, W) % p
        rhs = np.einsum("st,sbk->tbk", C, W) % p
        rows.append(((lhs - rhs) % p).reshape(m * n, k * n))
    system = FpMat(np.vstack(rows) % p, p)
    ker = kernel_basis(system)
    out = []
    for c in range(ker.cols):
        x = ker.a[:, c]
        cols = (W @ x) % p  # shape (m, n): column t = image of b_t
        phi = (cols.T @ Binv.a) % p
        out.append(FpMat(phi, p))
    return out


def hom_space(M: GenAlgebraModule, N: GenAlgebraModule) -> List[FpMat]:
    """Basis of Hom(M, N); degree-0 maps when both modules are graded."""
    if M.algebra is not N.algebra:
        raise ValueError("hom_space needs modules over the same algebra")
    if M.dim == 0 or N.dim == 0:
        return []
    graded = M.graded and N.graded
    if graded or M.dim * N.dim <= _DIRECT_LIMIT:
        return _hom_direct(M, N, graded)
    return _hom_by_spinning(M, N)


def end_space(M: GenAlgebraModule) -> List[FpMat]:
    return hom_space(M, M)


# ---------------------------------------------------------------------------
# Top, radical, socle


def _shift_candidates(M: GenAlgebraModule, S: GenAlgebraModule) -> List[int]:
    if not M.graded or M.dim == 0 or S.dim == 0:
        return []
    return sorted({dm - ds for dm in set(M.grading) for ds in set(S.grading)})


def top(M: GenAlgebraModule) -> List[tuple]:
    """Multiset of simples in M/rad(M).

    Ungraded: [(simple index, mult)].  Graded: [(simple index, shift, mult)]
    where the canonical simple shifted by `shift` occurs `mult` times.
    """
    out = []
    for idx, S in enumerate(M.algebra.simples):
        if M.graded:
            for d in _shift_candidates(M, S):
                mult = len(hom_space(M, S.shifted(d)))
                if mult:
                    out.append((idx, d, mult))
        else:
            Su = S.forget_grading() if S.graded else S
            mult = len(hom_space(M, Su))
            if mult:
                out.append((idx, mult))
    return out


def radical(M: GenAlgebraModule) -> FpMat:
    """Basis of rad(M) = intersection of kernels of all maps onto simples."""
    p = M.algebra.p
    if M.dim == 0:
        return zeros(0, 0, p)
    mats = []
    for S in M.algebra.simples:
        Su = S.forget_grading() if S.graded else S
        Mu = M.forget_grading() if M.graded else M
        mats.extend(hom_space(Mu, Su))
    if not mats:
        return identity(M.dim, p)
    stacked = vstack(mats)
    ker = kernel_basis(stacked)
    if M.graded:
        ker = homogeneous_basis(ker, M.grading)
    return ker


def socle(M: GenAlgebraModule) -> Tuple[List[tuple], FpMat]:
    """Socle structure and a basis of the sum of all simple submodules."""
    p = M.algebra.p
    structure = []
    tracker = SpanTracker(M.dim, p)
    cols: List[np.ndarray] = []
    for idx, S in enumerate(M.algebra.simples):
        if M.graded:
            cands = [(d, S.shifted(d)) for d in _shift_candidates(M, S)]
        else:
            cands = [(None, S.forget_grading() if S.graded else S)]
        for d, Sd in cands:
            maps = hom_space(Sd, M)
            if not maps:
                continue
            if d is None:
                structure.append((idx, len(maps)))
            else:
                structure.append((idx, d, len(maps)))
            for phi in maps:
                for c in range(phi.cols):
                    v = phi.a[:, c]
                    if tracker.insert(v):
                        cols.append(v % p)
    basis = (
        FpMat(np.column_stack(cols) % p, p) if cols else zeros(M.dim, 0, p)
    )
    return structure, basis


def composition_factors(M: GenAlgebraModule) -> List[Tuple[int, int]]:
    """Composition multiset [(simple index, multiplicity)] by socle peeling."""
    counts: Dict[int, int] = {}
    current = M
    while current.dim:
        struct, basis = socle(current)
        if basis.cols == 0:
            raise RuntimeError("module has no socle; not over this algebra's simples")
        for entry in struct:
            idx, mult = entry[0], entry[-1]
            counts[idx] = counts.get(idx, 0) + mult
        current, _ = quotient(current, basis)
    return sorted(counts.items())


# ---------------------------------------------------------------------------
# Projective covers and the Heller operator


def _top_complement_projection(M: GenAlgebraModule) -> Tuple[FpMat, FpMat]:
    """(rad basis, projection M -> M/rad in complement coordinates)."""
    p = M.algebra.p
    rad = radical(M)
    red = rref(FpMat(rad.a.T.copy(), p))
    pivots = set(red.pivots)
    comp = [i for i in range(M.dim) if i not in pivots]
    full = np.zeros((len(comp), M.dim), dtype=np.int64)
    for k, c in enumerate(comp):
        full[k, c] = 1
    for row, pc in enumerate(red.pivots):
        for k, c in enumerate(comp):
            full[k, pc] = (-red.matrix.a[row, c]) % p
    return rad, FpMat(full, p)


def projective_cover(M: GenAlgebraModule) -> Tuple[GenAlgebraModule, FpMat, List[tuple]]:
    """Projective cover (P, surjection P -> M, block structure).

    The surjection is an (dim M) x (dim P) matrix.  Blocks list entries
    (simple index, shift or None, multiplicity) in the order the summands
    of P are laid out.
    """
    alg = M.algebra
    p = alg.p
    if M.dim == 0:
        return zero_module(alg, M.graded), zeros(0, 0, p), []
    structure = top(M)
    _, proj = _top_complement_projection(M)
    blocks: List[GenAlgebraModule] = []
    block_info: List[tuple] = []
    columns: List[FpMat] = []
    for entry in structure:
        if M.graded:
            idx, d, mult = entry
            Pcan = alg.projective_of(idx)
            tops = top(Pcan)
            if len(tops) != 1 or tops[0][2] != 1:
                raise ValueError("designated projective does not have simple top")
            # align the shifted projective so its top sits at shift d
            Pblock = Pcan.shifted(d - tops[0][1])
        else:
            idx, mult = entry
            Pcan = alg.projective_of(idx)
            Pblock = Pcan.forget_grading() if Pcan.graded else Pcan
        cands = hom_space(Pblock, M)
        S = alg.simples[idx]
        sdim = S.dim
        chosen: List[FpMat] = []
        tracker = SpanTracker(proj.rows * Pblock.dim, p)
        for phi in cands:
            induced = (proj @ phi).a.reshape(-1)
            if tracker.insert(induced):
                chosen.append(phi)
                if len(chosen) == mult:
                    break
        if len(chosen) != mult:
            raise RuntimeError("projective cover lifting failed to reach the top")
        for phi in chosen:
            blocks.append(Pblock)
            columns.append(phi)
            block_info.append((idx, entry[1] if M.graded else None, 1))
    P = direct_sum(blocks)
    C = hstack(columns)
    if rref(C).rank != M.dim:
        raise RuntimeError("candidate cover map is not surjective")
    return P, C, block_info


def _graded_kernel(C: FpMat, row_deg: Sequence[int], col_deg: Sequence[int]) -> FpMat:
    """Homogeneous kernel basis of a degree-0 map given by matrix C."""
    p = C.p
    col_deg = np.asarray(col_deg)
    row_deg = np.asarray(row_deg)
    cols_out: List[np.ndarray] = []
    for d in sorted(set(col_deg.tolist())):
        cset = np.flatnonzero(col_deg == d)
        rset = np.flatnonzero(row_deg == d)
        block = FpMat(C.a[np.ix_(rset, cset)].copy(), p)
        ker = kernel_basis(block)
        for k in range(ker.cols):
            v = np.zeros(C.cols, dtype=np.int64)
            v[cset] = ker.a[:, k]
            cols_out.append(v)
    if not cols_out:
        return zeros(C.cols, 0, p)
    return FpMat(np.column_stack(cols_out), p)


def strip_projectives(M: GenAlgebraModule, rng=None) -> GenAlgebraModule:
    """Direct sum of the non-projective indecomposable summands of M."""
    if M.dim == 0:
        return M
    factors = meataxe_split(M, rng=rng)
    keep = [F for F in factors if not is_projective(F)]
    if len(keep) == len(factors):
        return M
    if not keep:
        return zero_module(M.algebra, M.graded)
    return direct_sum(keep)


def is_projective(M: GenAlgebraModule) -> bool:
    if M.dim == 0:
        return True
    P, _, _ = projective_cover(M)
    return P.dim == M.dim


def heller(M: GenAlgebraModule, strip: bool = True, rng=None) -> GenAlgebraModule:
    """Kernel of the projective cover map, projective summands split off.

    For a module without projective summands the cover is already minimal
    and its kernel contains no projective summands; `strip` controls the
    initial removal of projective summands from M itself.
    """
    M0 = strip_projectives(M, rng=rng) if strip else M
    if M0.dim == 0:
        return zero_module(M.algebra, M.graded)
    P, C, _ = projective_cover(M0)
    if M0.graded:
        ker = _graded_kernel(C, M0.grading, P.grading)
    else:
        ker = kernel_basis(C)
    return submodule(P, ker)


def heller_power(M: GenAlgebraModule, n: int, rng=None) -> GenAlgebraModule:
    current = strip_projectives(M, rng=rng)
    if n >= 0:
        for _ in range(n):
            current = heller(current, strip=False, rng=rng)
        return current
    for _ in range(-n):
        current = dual_module(heller(dual_module(current), strip=False, rng=rng))
    return current


# ---------------------------------------------------------------------------
# Duality over the opposite algebra


def opposite_algebra(alg: GenAlgebra) -> GenAlgebra:
    """The opposite algebra; modules over it are duals of modules over alg."""
    if "op" in alg.meta:
        return alg.meta["op"]
    if alg.meta.get("op_of") is not None:
        return alg.meta["op_of"]

    base_checker = alg.relation_checker

    def op_checker(action, p):
        return base_checker({g: m.transpose() for g, m in action.items()}, p)

    op = GenAlgebra(
        alg.algebra_id + "-op",
        alg.p,
        alg.gens,
        op_checker,
        shifts=alg.shifts,
        meta={"op_of": alg},
    )
    alg.meta["op"] = op

    def transposed(M: GenAlgebraModule) -> GenAlgebraModule:
        action = {g: M.mat(g).transpose() for g in alg.gens}
        grading = None if not M.graded else [-d for d in M.grading]
        return GenAlgebraModule(op, action, grading, check=False)

    op_simples = [transposed(S) for S in alg.simples]
    op.designate(op_simples)
    # duals of projectives are projective again (self-injective scope); their
    # tops permute, so match each dualized cover to the simple it covers
    op_projectives: List[Optional[GenAlgebraModule]] = [None] * len(op_simples)
    for P in alg.projectives:
        if P is None:
            continue
        Q = transposed(P)
        tops = top(Q.forget_grading() if Q.graded else Q)
        if len(tops) != 1 or tops[0][-1] != 1:
            raise RuntimeError("dualized projective lost its simple top")
        op_projectives[tops[0][0]] = Q
    op.projectives = op_projectives
    return op


def dual_module(M: GenAlgebraModule) -> GenAlgebraModule:
    op = opposite_algebra(M.algebra)
    action = {g: M.mat(g).transpose() for g in M.algebra.gens}
    grading = None if not M.graded else [-d for d in M.grading]
    return GenAlgebraModule(op, action, grading, check=False)


# ---------------------------------------------------------------------------
# MeatAxe splitting


def _fitting_split(M: GenAlgebraModule, theta: FpMat) -> Optional[Tuple[FpMat, FpMat]]:
    """Kernel/image bases of theta^(2^k >= dim), or None when trivial."""
    p = M.algebra.p
    power = theta
    k = 1
    while k < M.dim:
        power = power @ power
        k *= 2
    if M.graded:
        ker = _graded_kernel(power, M.grading, M.grading)
    else:
        ker = kernel_basis(power)
    if ker.cols == 0 or ker.cols == M.dim:
        return None
    if M.graded:
        img = homogeneous_basis(power, M.grading)
    else:
        cols = []
        tracker = SpanTracker(M.dim, p)
        for c in range(power.cols):
            v = power.a[:, c]
            if v.any() and tracker.insert(v):
                cols.append(v)
        img = FpMat(np.column_stack(cols), p) if cols else zeros(M.dim, 0, p)
    if ker.cols + img.cols != M.dim:
        return None
    both = FpMat(np.hstack([ker.a, img.a]), p)
    if rref(both).rank != M.dim:
        return None
    return ker, img


def _is_nilpotent_or_invertible(M: GenAlgebraModule, theta: FpMat) -> bool:
    return _fitting_split(M, theta) is None


def meataxe_split_with_bases(
    M: GenAlgebraModule,
    rng=None,
    max_attempts: int = 64,
    dim_bound: int = 2000,
) -> List[Tuple[GenAlgebraModule, FpMat]]:
    """Split M into indecomposable summands by Fitting decompositions.

    Returns (summand, basis) pairs with the basis columns in M coordinates.
    Random endomorphisms are drawn until one splits the module; a factor is
    declared indecomposable once its endomorphism algebra is proved local
    (exhaustively, when small enough) or once `max_attempts` draws were all
    nilpotent-or-invertible.
    """
    if M.dim > dim_bound:
        raise MeataxeBudgetError(f"dim {M.dim} exceeds the bound {dim_bound}")
    rng = _rng_of(rng)
    p = M.algebra.p

    def rec(current, basis):
        if current.dim == 0:
            return []
        ends = end_space(current)
        if len(ends) == 1:
            return [(current, basis)]

        def try_split(theta):
            pair = _fitting_split(current, theta)
            if pair is None:
                return None
            ker, img = pair
            return rec(submodule(current, ker), basis @ ker) + rec(
                submodule(current, img), basis @ img
            )

        # basis elements first, then random combinations
        for theta in ends:
            result = try_split(theta)
            if result is not None:
                return result
        for _ in range(max_attempts):
            coeffs = rng.integers(0, p, size=len(ends))
            acc = np.zeros((current.dim, current.dim), dtype=np.int64)
            for c, e in zip(coeffs, ends):
                acc = (acc + int(c) * e.a) % p
            result = try_split(FpMat(acc, p))
            if result is not None:
                return result
        if p ** len(ends) <= _ENUM_LIMIT:
            # exhaustive locality proof: every endo nilpotent or invertible
            for code in range(1, p ** len(ends)):
                acc = np.zeros((current.dim, current.dim), dtype=np.int64)
                c = code
                for e in ends:
                    acc = (acc + (c % p) * e.a) % p
                    c //= p
                result = try_split(FpMat(acc, p))
                if result is not None:
                    return result
            return [(current, basis)]
        # random evidence only: every draw was nilpotent or invertible
        return [(current, basis)]

    return rec(M, identity(M.dim, p))


def meataxe_split(
    M: GenAlgebraModule,
    rng=None,
    max_attempts: int = 64,
    dim_bound: int = 2000,
) -> List[GenAlgebraModule]:
    return [f for f, _ in meataxe_split_with_bases(M, rng, max_attempts, dim_bound)]


# ---------------------------------------------------------------------------
# Isomorphism testing


@dataclass(frozen=True)
class IsoResult:
    status: str  # "iso", "not_iso", "inconclusive"
    witness: Optional[FpMat] = None

    def __bool__(self):
        if self.status == "inconclusive":
            raise InconclusiveError("isomorphism test was inconclusive")
        return self.status == "iso"


def _try_invertible(maps: List[FpMat], p: int, dim: int, rng, budget: int) -> Optional[FpMat]:
    if not maps:
        return None
    k = len(maps)
    if p**k <= _ENUM_LIMIT:
        for code in range(1, p**k):
            acc = np.zeros((dim, dim), dtype=np.int64)
            c = code
            for m in maps:
                acc = (acc + (c % p) * m.a) % p
                c //= p
            cand = FpMat(acc, p)
            if rref(cand).rank == dim:
                return cand
        return None
    for _ in range(budget):
        coeffs = rng.integers(0, p, size=k)
        acc = np.zeros((dim, dim), dtype=np.int64)
        for c, m in zip(coeffs, maps):
            acc = (acc + int(c) * m.a) % p
        cand = FpMat(acc, p)
        if rref(cand).rank == dim:
            return cand
    return None


def is_isomorphic(
    M: GenAlgebraModule,
    N: GenAlgebraModule,
    rng=None,
    budget: int = 256,
    decompose: bool = True,
) -> IsoResult:
    """Decide M ~ N with an explicit witness; graded modules need a degree-0 one."""
    if M.algebra is not N.algebra:
        raise ValueError("modules live over different algebras")
    rng = _rng_of(rng)
    if M.dim != N.dim:
        return IsoResult("not_iso")
    if M.dim == 0:
        return IsoResult("iso", zeros(0, 0, M.algebra.p))
    if M.graded != N.graded:
        raise ValueError("cannot compare graded with ungraded modules")
    if M.graded and sorted(M.grading) != sorted(N.grading):
        return IsoResult("not_iso")
    if sorted(top(M)) != sorted(top(N)):
        return IsoResult("not_iso")
    if sorted(socle(M)[0]) != sorted(socle(N)[0]):
        return IsoResult("not_iso")
    maps = hom_space(M, N)
    if not maps:
        return IsoResult("not_iso")
    witness = _try_invertible(maps, M.algebra.p, M.dim, rng, budget)
    if witness is not None:
        return IsoResult("iso", witness)
    if M.algebra.p ** len(maps) <= _ENUM_LIMIT:
        # the enumeration above was exhaustive: no invertible hom exists
        return IsoResult("not_iso")
    if decompose:
        return _iso_by_decomposition(M, N, rng, budget)
    return IsoResult("inconclusive")


def _iso_by_decomposition(M, N, rng, budget) -> IsoResult:
    fm = meataxe_split(M, rng=rng)
    fn = meataxe_split(N, rng=rng)
    if sorted(f.dim for f in fm) != sorted(f.dim for f in fn):
        return IsoResult("not_iso")
    remaining = list(fn)
    for f in fm:
        hit = None
        for i, g in enumerate(remaining):
            r = is_isomorphic(f, g, rng=rng, budget=budget, decompose=False)
            if r.status == "iso":
                hit = i
                break
            if r.status == "inconclusive":
                return IsoResult("inconclusive")
        if hit is None:
            return IsoResult("not_iso")
        remaining.pop(hit)
    # factor-wise matching succeeded but no global witness was assembled
    return IsoResult("iso")


# ---------------------------------------------------------------------------
# Stable Hom, resolution traces, complexity


def stable_hom_dim(M: GenAlgebraModule, N: GenAlgebraModule) -> int:
    """dim of Hom(M, N) modulo maps factoring through a projective."""
    maps = hom_space(M, N)
    if not maps:
        return 0
    P, C, _ = projective_cover(N)
    through = hom_space(M, P)
    p = M.algebra.p
    tracker = SpanTracker(N.dim * M.dim, p)
    dim_factoring = 0
    for psi in through:
        v = (C @ psi).a.reshape(-1)
        if tracker.insert(v):
            dim_factoring += 1
    return len(maps) - dim_factoring


@dataclass
class ResolutionTrace:
    module: GenAlgebraModule
    length: int
    omega_dims: List[int]
    ext_dims: Optional[List[int]] = None

    def report(self, min_len: int = 12) -> dict:
        est = estimate_complexity(self, min_len=min_len)
        return {
            "omega_dims": list(self.omega_dims),
            "ext_dims": None if self.ext_dims is None else list(self.ext_dims),
            "complexity_estimate": "inconclusive" if est is None else est,
        }


def ext_dims(M: GenAlgebraModule, length: int, rng=None, with_ext: bool = True) -> ResolutionTrace:
    """Trace of Omega^n dims and dim Ext^n(M, M) = stable Hom(Omega^n M, M)."""
    M0 = strip_projectives(M, rng=rng)
    omega = [M0.dim]
    exts = [stable_hom_dim(M0, M0) if with_ext and M0.dim else 0]
    current = M0
    for _ in range(length):
        current = heller(current, strip=False, rng=rng)
        omega.append(current.dim)
        if with_ext:
            exts.append(stable_hom_dim(current, M0) if current.dim and M0.dim else 0)
    return ResolutionTrace(M, length, omega, exts if with_ext else None)


def estimate_complexity(trace, min_len: int = 12, tail: int = 8) -> Optional[int]:
    """Growth-rate estimate from a resolution trace; None when inconclusive.

    Returns 0 iff the dims hit zero.  Otherwise fits the tail (smoothed by
    adjacent-pair sums to remove parity wobble) against polynomials of
    increasing degree by least squares and returns degree+1 for the first
    essentially exact fit.
    """
    dims = trace.omega_dims if isinstance(trace, ResolutionTrace) else list(trace)
    if any(d == 0 for d in dims):
        return 0
    if len(dims) - 1 < min_len:
        return None
    smooth = [dims[i] + dims[i + 1] for i in range(len(dims) - 1)]
    window = smooth[-tail:]
    xs = np.arange(len(window), dtype=float)
    ys = np.asarray(window, dtype=float)
    scale = float(np.mean(ys))
    for degree in range(0, 5):
        coeffs = np.polyfit(xs, ys, degree) if degree < len(window) - 1 else None
        if coeffs is None:
            break
        resid = ys - np.polyval(coeffs, xs)
        rel = float(np.sqrt(np.mean(resid**2))) / max(scale, 1.0)
        if rel < 1e-9:
            return degree + 1
    for degree in range(0, 5):
        if degree >= len(window) - 1:
            break
        coeffs = np.polyfit(xs, ys, degree)
        resid = ys - np.polyval(coeffs, xs)
        rel = float(np.sqrt(np.mean(resid**2))) / max(scale, 1.0)
        if rel < 0.02:
            return degree + 1
    return None


# ---------------------------------------------------------------------------
# Serialization


def module_to_json(M: GenAlgebraModule) -> dict:
    return {
        "p": M.algebra.p,
        "algebra": M.algebra.algebra_id,
        "dim": M.dim,
        "generators": list(M.algebra.gens),
        "action": {g: M.mat(g).a.tolist() for g in M.algebra.gens},
        "grading": None if not M.graded else list(M.grading),
    }


def module_from_json(data: dict, algebra: GenAlgebra) -> GenAlgebraModule:
    if data["algebra"] != algebra.algebra_id:
        raise ValueError(
            f"module file is for algebra {data['algebra']}, not {algebra.algebra_id}"
        )
    if data["p"] != algebra.p:
        raise ValueError("modulus mismatch between module file and algebra")
    if list(data["generators"]) != list(algebra.gens):
        raise ValueError("generator list mismatch")
    n = int(data["dim"])
    action = {
        g: fpmat(np.asarray(rows, dtype=np.int64).reshape(n, n), algebra.p)
        for g, rows in data["action"].items()
    }
    return GenAlgebraModule(algebra, action, data.get("grading"))


def dump_module(M: GenAlgebraModule, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(module_to_json(M), fh)


def load_module(path: str, algebra: GenAlgebra) -> GenAlgebraModule:
    with open(path) as fh:
        return module_from_json(json.load(fh), algebra)
