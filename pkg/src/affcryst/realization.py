"""Realizing finite groups of automorphisms by affine lifts: fixed points, cyclic correction, split extensions.

Convention for lifts: a lift ``q`` realizes the automorphism ``phi`` of the base Lie
algebra when ``q exp(Y_i) q^{-1} = exp(Y(phi X_i))`` for every basis vector, i.e.
conjugation by ``q`` equals ``precompose(rho, phi^{-1})`` on the image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .affine import AffineMap, exp_nilpotent, is_unipotent, log_unipotent
from .cryst import AffineRep, conjugate, is_crystallographic, precompose, search_conjugator
from .errors import InvariantError, RelationError
from .linalg import ONE, ZERO, Matrix, nullspace, solve
from .nillie import is_automorphism


@dataclass(frozen=True)
class Automorphism:
    phi: Matrix
    order: int


@dataclass(frozen=True)
class ExtensionSpec:
    """Base representation, finite automorphisms with declared orders, and relation words.

    Relation words are sequences of signed 1-based indices into ``lifts ++ base generators``;
    ``-k`` stands for the inverse of generator ``k``.
    """

    rep: AffineRep
    autos: tuple[Automorphism, ...]
    relations: tuple[tuple[int, ...], ...]
    lifts: tuple[AffineMap, ...] | None = None

    def __post_init__(self):
        L = self.rep.algebra
        for j, a in enumerate(self.autos):
            if a.phi.shape != (L.n, L.n) or not is_automorphism(L, a.phi):
                raise InvariantError(f"automorphism {j + 1} is not a Lie algebra automorphism")
            if a.order < 1 or exact_order(a.phi, a.order) != a.order:
                raise InvariantError(f"automorphism {j + 1} does not have exact order {a.order}")
        total = len(self.autos) + L.n
        for w in self.relations:
            if any(k == 0 or abs(k) > total for k in w):
                raise InvariantError(f"relation {list(w)} refers to an unknown generator")
        if self.lifts is not None and len(self.lifts) != len(self.autos):
            raise InvariantError("one lift per automorphism is required")


def exact_order(m: Matrix, bound: int) -> int | None:
    """Smallest ``k <= bound`` with ``m^k = I``, or None."""
    ident = Matrix.identity(m.nrows)
    p = m
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = p @ m
    return None


def fixed_point_check(rho: AffineRep, phi: Matrix, cap: int = 4, seed: int = 0) -> AffineMap | None:
    """A conjugator from ``rho`` to ``precompose(rho, phi)``: certifies that ``[rho]`` is phi-fixed."""
    return search_conjugator(rho, precompose(rho, phi), cap=cap, seed=seed).conjugator


def realizing_lift(rho: AffineRep, phi: Matrix, cap: int = 4, seed: int = 0) -> AffineMap | None:
    """An affine ``q`` whose conjugation acts on the image as ``phi`` (see module docstring)."""
    return search_conjugator(rho, precompose(rho, phi.inv()), cap=cap, seed=seed).conjugator


def cyclic_splitting(g_hat: Matrix, k: int) -> AffineMap:
    """Correct ``g_hat`` by a commuting unipotent factor so that the result has order dividing ``k``."""
    if k < 1:
        raise InvariantError("order must be positive")
    g_hat = AffineMap(g_hat)
    s = g_hat ** k
    if not is_unipotent(s):
        raise InvariantError("g_hat^k is not unipotent")
    if s @ g_hat != g_hat @ s:
        raise InvariantError("g_hat^k does not commute with g_hat")
    u = exp_nilpotent(log_unipotent(s).scale(Fraction(-1, k)))
    g = AffineMap(u @ g_hat)
    if g ** k != Matrix.identity(g.nrows):
        raise InvariantError("corrected lift does not have the requested order")
    return g


def evaluate_word(gens: Sequence[Matrix], word: Sequence[int]) -> AffineMap:
    out = Matrix.identity(gens[0].nrows)
    for k in word:
        g = gens[abs(k) - 1]
        out = out @ (g if k > 0 else g.inv())
    return AffineMap(out)


@dataclass(frozen=True)
class RelationResult:
    word: tuple[int, ...]
    holds: bool
    residual: Matrix


@dataclass(frozen=True)
class SplitExtension:
    generators: tuple[AffineMap, ...]
    lifts: tuple[AffineMap, ...]
    relations: tuple[RelationResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.relations)


def check_lift(rho: AffineRep, lift: Matrix, phi: Matrix) -> bool:
    return conjugate(rho, lift) == precompose(rho, phi.inv(), check=False)


def build_split_extension(spec: ExtensionSpec, lifts: Sequence[Matrix], strict: bool = True) -> SplitExtension:
    """Generators ``lifts ++ exp(Y_i)`` with every relation word evaluated exactly.

    A lift for an automorphism of order ``k`` must have a linear part of exact order
    ``k``; the lift itself may have ``q^k`` in the base group (glide reflections).

    With ``strict`` a failing relation raises :class:`RelationError`; otherwise it is
    only reported.
    """
    rho = spec.rep
    if len(lifts) != len(spec.autos):
        raise InvariantError("one lift per automorphism is required")
    lifts = tuple(AffineMap(q) for q in lifts)
    for j, (q, a) in enumerate(zip(lifts, spec.autos)):
        if q.dim != rho.n:
            raise InvariantError(f"lift {j + 1} has the wrong size")
        if exact_order(q.linear_part, a.order) != a.order:
            raise InvariantError(f"linear part of lift {j + 1} does not have order {a.order}")
        if not check_lift(rho, q, a.phi):
            raise InvariantError(f"lift {j + 1} does not realize its automorphism")
    base = tuple(rho.generators())
    gens = lifts + base
    ident = Matrix.identity(rho.n + 1)
    results = []
    for w in spec.relations:
        val = evaluate_word(gens, w)
        res = val - ident
        results.append(RelationResult(tuple(w), res.is_zero(), res))
        if strict and not res.is_zero():
            raise RelationError(list(w), res)
    return SplitExtension(gens, lifts, tuple(results))


def _adjust_translations(spec: ExtensionSpec, lifts: list[AffineMap]) -> list[AffineMap] | None:
    """Shift lift translations by vectors fixed by the lift's linear part so that relations hold.

    Such a shift keeps each lift a realizing lift of finite order only if it also
    commutes with the base image; both properties are rechecked by the caller. Each
    relation word is affine in the unknown shifts once the linear parts are fixed,
    so the shifts come from one exact linear solve.
    """
    n = spec.rep.n
    m = len(lifts)
    if not m:
        return None
    # basis of admissible shifts per lift: t with A t = t
    shift_bases = []
    for q in lifts:
        A = q.linear_part
        shift_bases.append(nullspace(A - Matrix.identity(n)))
    unknowns = [(j, b) for j, basis in enumerate(shift_bases) for b in basis]
    if not unknowns:
        return None
    base = list(spec.rep.generators())

    def gens_with(shift_coeffs):
        out = []
        for j, q in enumerate(lifts):
            t = list(q.translation)
            for (jj, b), c in zip(unknowns, shift_coeffs):
                if jj == j and c:
                    t = [x + c * y for x, y in zip(t, b)]
            out.append(AffineMap.from_parts(q.linear_part, t))
        return out + base

    nvar = len(unknowns)
    zero = [ZERO] * nvar
    rows, rhs = [], []
    for w in spec.relations:
        v0 = evaluate_word(gens_with(zero), w)
        if v0.linear_part != Matrix.identity(n):
            return None
        t0 = v0.translation
        cols = []
        for idx in range(nvar):
            e = [ZERO] * nvar
            e[idx] = ONE
            t1 = evaluate_word(gens_with(e), w).translation
            cols.append([a - b for a, b in zip(t1, t0)])
        for r in range(n):
            rows.append([cols[idx][r] for idx in range(nvar)])
            rhs.append(-t0[r])
    if not rows:
        return None
    sol = solve(Matrix(rows), rhs)
    if sol is None:
        return None
    return gens_with(list(sol))[:m]


@dataclass(frozen=True)
class AutoReport:
    index: int
    order: int
    fixed: bool
    conjugator: AffineMap | None
    certified: bool
    lift: AffineMap | None
    corrected: bool


@dataclass(frozen=True)
class RealizationReport:
    realizable: bool
    base_crystallographic: bool
    autos: tuple[AutoReport, ...]
    extension: SplitExtension | None
    adjusted_translations: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)


def realize(spec: ExtensionSpec, cap: int = 4, seed: int = 0) -> RealizationReport:
    """Fixed-point search, lift construction and relation check for every automorphism.

    Lifts come from ``spec.lifts`` when supplied; otherwise each is a realizing conjugator
    corrected to finite order by :func:`cyclic_splitting`. When the relation words
    still fail, lift translations are shifted within the fixed space of their linear
    part and the result is re-verified.
    """
    rho = spec.rep
    base_ok = is_crystallographic(rho).crystallographic
    reports = []
    lifts: list[AffineMap | None] = []
    notes: list[str] = []
    for j, a in enumerate(spec.autos):
        found = search_conjugator(rho, precompose(rho, a.phi), cap=cap, seed=seed)
        fixed = found.conjugator is not None
        if spec.lifts is not None:
            lift, corrected = AffineMap(spec.lifts[j]), False
        elif fixed:
            raw = realizing_lift(rho, a.phi, cap=cap, seed=seed)
            if raw is None:
                lift, corrected = None, False
            else:
                try:
                    lift = cyclic_splitting(raw, a.order)
                except InvariantError as exc:
                    notes.append(f"automorphism {j + 1}: cyclic correction failed ({exc})")
                    lift = None
                corrected = lift is not None and lift != raw
        else:
            lift, corrected = None, False
        reports.append(AutoReport(j + 1, a.order, fixed, found.conjugator, found.certified, lift, corrected))
        lifts.append(lift)

    extension = None
    adjusted = False
    if base_ok and all(r.fixed for r in reports) and all(q is not None for q in lifts):
        extension = build_split_extension(spec, lifts, strict=False)
        if not extension.ok and spec.lifts is None:
            shifted = _adjust_translations(spec, lifts)
            if shifted is not None and all(
                exact_order(q.linear_part, a.order) == a.order and check_lift(rho, q, a.phi) for q, a in zip(shifted, spec.autos)
            ):
                candidate = build_split_extension(spec, shifted, strict=False)
                if candidate.ok:
                    extension, adjusted = candidate, True
                    reports = [
                        AutoReport(r.index, r.order, r.fixed, r.conjugator, r.certified, q, True)
                        for r, q in zip(reports, shifted)
                    ]
        if not extension.ok:
            notes.append("relations fail for the constructed lifts")
    realizable = base_ok and extension is not None and extension.ok
    return RealizationReport(realizable, base_ok, tuple(reports), extension, adjusted, tuple(notes))
