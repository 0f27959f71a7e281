"""Norm repair: exact functional extension and subspace-pinning equivalents.

Given an isometric inclusion of a subspace, ``repair_norm`` produces a new
norm on the big space that agrees with the old one on the subspace exactly
and differs from it by at most a factor (1 + delta) elsewhere.  The new
facet functionals are exact-norm extensions of the subspace facets (a
Hahn-Banach step, realized as an LP) together with the old facets shrunk
by (1 + delta)^{-1}.

``repair_operator`` upgrades this to a map T that must stay nonexpansive
while two pinned subspaces keep their norms: both norms are repaired, and
if T still exceeds norm 1 the domain ball is replaced by the hull of the
pinned ball with the (1 + delta)^{-2}-shrunk repaired ball.  All claimed
bounds are re-verified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .banach import (
    LinMap,
    Space,
    dual_norm_eval,
    is_isometric,
    norm_eval,
    operator_norm,
    space_from_hrep,
)
from .errors import DimensionMismatch, PreconditionError, VerificationError
from .exactlin import (
    LE,
    EQ,
    OPTIMAL,
    LpProblem,
    QMat,
    QVec,
    lp_solve,
    rat,
    solve_linear,
)
from .polytope import DIM_CAP, Ball, canon_set, symmetric_hull


@dataclass(frozen=True)
class NormRepair:
    original: Space
    repaired: Space
    delta: Fraction
    pinned: LinMap


def extend_functional(phi: QVec, incl: LinMap) -> QVec:
    """Extension of phi along an isometric inclusion with the same dual norm.

    Minimizes the dual norm over all extensions by LP; the optimum equals
    dual_norm_eval(incl.domain, phi) exactly, and the fixed pivot rule makes
    the chosen extension deterministic.
    """
    X, Y = incl.domain, incl.codomain
    if phi.dim != X.dim:
        raise DimensionMismatch(f"functional dim {phi.dim} != {X.dim}")
    if not is_isometric(incl):
        raise PreconditionError("extension requires an isometric inclusion")
    if Y.dim == 0:
        return QVec.zero(0)
    n = Y.dim
    constraints = []
    for v in Y.ball.signed_vrep():
        constraints.append((v.concat(QVec.of([-1])), LE, Fraction(0)))
    for k in range(X.dim):
        column = incl(QVec.unit(X.dim, k))
        constraints.append((column.concat(QVec.of([0])), EQ, phi[k]))
    problem = LpProblem(
        objective=QVec.of([0] * n + [1]),
        constraints=tuple(constraints),
        sense="min",
        nonneg=(False,) * (n + 1),
    )
    status, payload = lp_solve(problem)
    if status != OPTIMAL:
        raise VerificationError("extension LP failed; inclusion data corrupt")
    value, point = payload
    psi = QVec.of(point.entries[:n])
    if dual_norm_eval(Y, psi) != dual_norm_eval(X, phi):
        raise VerificationError("extension did not preserve the dual norm")
    return psi


def _check_equivalence(a: Space, b: Space, factor: Fraction) -> None:
    """Exact two-sided bound: norms of a and b within the given factor."""
    for v in a.ball.vrep:
        if norm_eval(b, v) > factor:
            raise VerificationError("norm equivalence bound violated")
    for w in b.ball.vrep:
        if norm_eval(a, w) > factor:
            raise VerificationError("norm equivalence bound violated")


def repair_norm(
    Y: Space, incl: LinMap, delta, dim_cap: int = DIM_CAP
) -> NormRepair:
    """New norm on Y pinning the subspace exactly, (1 + delta)-close overall.

    The repaired facets are the exact-norm extensions of the subspace
    facets plus the (1 + delta)^{-1}-scaled old facets; the subspace norm
    survives unchanged because its own facets are among the new ones.
    """
    delta = rat(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if incl.codomain != Y:
        raise DimensionMismatch("inclusion must land in the repaired space")
    if not is_isometric(incl):
        raise PreconditionError("repair_norm requires an isometric inclusion")
    if Y.dim == 0:
        return NormRepair(Y, Y, delta, LinMap(incl.matrix, incl.domain, Y))
    X = incl.domain
    shrink = 1 / (1 + delta)
    functionals = [extend_functional(phi, incl) for phi in X.ball.hrep]
    functionals += [psi.scale(shrink) for psi in Y.ball.hrep]
    repaired = space_from_hrep(Y.dim, functionals, dim_cap)
    pinned = LinMap(incl.matrix, X, repaired)
    if not is_isometric(pinned):
        raise VerificationError("repair failed to pin the subspace norm")
    _check_equivalence(Y, repaired, 1 + delta)
    return NormRepair(Y, repaired, delta, pinned)


def repair_operator(
    T: LinMap, i0: LinMap, j0: LinMap, delta, dim_cap: int = DIM_CAP
):
    """Repair both norms so T becomes nonexpansive with both pins intact.

    Returns (domain repair, codomain repair, T').  The domain may need the
    extra rescale step, in which case its repair is (1 + delta)^2 - 1
    equivalent rather than delta-equivalent; inputs with operator norm
    above (1 + delta)^2 are rejected, and a repair that still fails the
    exact nonexpansiveness check raises VerificationError.
    """
    delta = rat(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if i0.codomain != T.domain or j0.codomain != T.codomain:
        raise DimensionMismatch("pins must include into T's domain and codomain")
    if not is_isometric(i0) or not is_isometric(j0):
        raise PreconditionError("pins must be isometric inclusions")
    t0_cols = []
    for k in range(i0.domain.dim):
        rhs = T(i0(QVec.unit(i0.domain.dim, k)))
        sol = solve_linear(j0.matrix, rhs)
        if sol is None or j0.matrix.apply(sol) != rhs:
            raise PreconditionError(
                "T does not carry the pinned domain into the pinned codomain"
            )
        t0_cols.append(sol)
    T0 = LinMap(
        QMat.from_cols(t0_cols, rows=j0.domain.dim), i0.domain, j0.domain
    )
    norm_t = operator_norm(T)
    headroom = (1 + delta) ** 2
    if norm_t > headroom:
        raise PreconditionError(
            f"operator norm {norm_t} exceeds {headroom}; "
            "too large to repair at this delta"
        )
    rx = repair_norm(T.domain, i0, delta, dim_cap)
    ry = repair_norm(T.codomain, j0, delta, dim_cap)
    t_prime = LinMap(T.matrix, rx.repaired, ry.repaired)
    if operator_norm(t_prime) > 1 and T.domain.dim > 0:
        # Hull of the pinned ball with the shrunk repaired ball: the pinned
        # subspace keeps its norm, everything else grows by (1 + delta)^2.
        shrink = 1 / headroom
        parts = []
        if i0.domain.dim > 0:
            pinned_gens = [i0(v) for v in i0.domain.ball.vrep]
            parts.append(Ball(T.domain.dim, canon_set(pinned_gens), None))
        scaled = [v.scale(shrink) for v in rx.repaired.ball.vrep]
        parts.append(Ball(T.domain.dim, canon_set(scaled), None))
        ball = symmetric_hull(T.domain.dim, parts, dim_cap)
        rescaled = Space(T.domain.dim, ball)
        pinned = LinMap(i0.matrix, i0.domain, rescaled)
        if not is_isometric(pinned):
            raise VerificationError("rescale failed to keep the domain pin")
        _check_equivalence(T.domain, rescaled, headroom)
        rx = NormRepair(T.domain, rescaled, headroom - 1, pinned)
        t_prime = LinMap(T.matrix, rescaled, ry.repaired)
    final = operator_norm(t_prime)
    if final > 1:
        raise VerificationError(
            f"operator norm {final} > 1 after repair; delta too small"
        )
    if t_prime.matrix @ rx.pinned.matrix != ry.pinned.matrix @ T0.matrix:
        raise VerificationError("repaired operator broke the pinned square")
    return rx, ry, t_prime
