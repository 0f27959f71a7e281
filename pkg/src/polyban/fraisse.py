"""Chain construction and witness machinery for the universal operator.

A Chain is a sequence of nonexpansive rational operators F_0, F_1, ... with
each stage's spaces containing the previous stage's as leading coordinates.
Stages are produced by replaying an enumerated task stream: a task is a
rational operator extending an earlier stage together with the pair of
isometric embeddings saying how; realizing it amalgamates the extension
onto the newest stage by two pushouts.

On top of the chain sit the witness searches: ``g_witness`` realizes an
operator extension exactly inside a later stage, ``embed_operator`` runs a
truncation tower approximating an arbitrary operator, ``back_and_forth``
produces the alternating transcript matching two chains, and the kernel
and surjectivity witnesses specialize ``g_witness`` to zero targets and to
point preimages.

Everything is exact: realized squares commute with equality, embeddings
are isometric, and every advertised bound is re-verified before a value
is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .amalgam import correction_sum, pushout, square_sum
from .banach import (
    LinMap,
    Space,
    is_isometric,
    l1_sum,
    line,
    lower_isometry_bound,
    map_distance,
    norm_eval,
    operator_norm,
    pullback_space,
    quotient_matrix,
    zero_space,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    PreconditionError,
    VerificationError,
)
from .exactlin import QMat, QVec, _rref, invert, rank, rat, solve_linear
from .polytope import DIM_CAP, Ball, canon_set, complete_representations

DEFAULT_DIM_CAP = 6


@dataclass(frozen=True)
class OperatorSquare:
    """A square of maps (i0, i1) from the operator S to the operator T."""

    S: LinMap
    T: LinMap
    i0: LinMap
    i1: LinMap
    eps: Fraction
    defect: Fraction


@dataclass(frozen=True)
class Task:
    """A triple: an operator T, embeddings (i, j) of stage k into it."""

    T: LinMap
    i: LinMap
    j: LinMap
    k: int

    def label(self) -> str:
        return (
            f"task(k={self.k}, X={self.T.domain.dim}, Y={self.T.codomain.dim}, "
            f"bits={_bit_size(self)})"
        )


@dataclass(frozen=True)
class ChainStage:
    U: Space
    V: Space
    F: LinMap
    inclU: LinMap
    inclV: LinMap


@dataclass(frozen=True)
class LogEntry:
    stage: int
    task: str
    verdict: str


@dataclass(frozen=True)
class Chain:
    stages: tuple[ChainStage, ...]
    log: tuple[LogEntry, ...]
    dim_cap: int
    seed: int


@dataclass(frozen=True)
class EpsSchedule:
    """eps0 followed by the tail terms eps_1, eps_2, ...; all decreasing."""

    eps0: Fraction
    terms: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        last = self.eps0
        for term in self.terms:
            if term <= 0 or term >= last:
                raise PreconditionError("schedule must be positive decreasing")
            last = term

    @staticmethod
    def dyadic(depth: int, shift: int = 0) -> "EpsSchedule":
        return EpsSchedule(
            Fraction(1, 2**shift),
            tuple(Fraction(1, 2 ** (n + shift)) for n in range(1, depth + 1)),
        )

    def eps(self, n: int) -> Fraction:
        if n == 0:
            return self.eps0
        return self.terms[n - 1]

    def satisfies_condition_s(self, eps: Fraction) -> bool:
        return 3 * sum(self.terms, Fraction(0)) < eps - self.eps0


@dataclass(frozen=True)
class BnfTranscript:
    kSquares: tuple[OperatorSquare, ...]
    lSquares: tuple[OperatorSquare, ...]
    etas: tuple[Fraction, ...]


def make_square(S: LinMap, T: LinMap, i0: LinMap, i1: LinMap, eps) -> OperatorSquare:
    """Square with its defect computed; shapes are validated here."""
    if i0.domain != S.domain or i0.codomain != T.domain:
        raise DimensionMismatch("i0 must map dom S into dom T")
    if i1.domain != S.codomain or i1.codomain != T.codomain:
        raise DimensionMismatch("i1 must map cod S into cod T")
    defect = map_distance(T.compose(i0), i1.compose(S))
    return OperatorSquare(S, T, i0, i1, rat(eps), defect)


def identity_square(chain: Chain, index: int) -> OperatorSquare:
    stage = chain.stages[index]
    return OperatorSquare(
        stage.F,
        stage.F,
        LinMap.identity(stage.U),
        LinMap.identity(stage.V),
        Fraction(0),
        Fraction(0),
    )


def _pad_matrix(small: int, big: int) -> QMat:
    return QMat.identity(small).vstack(QMat.zeros(big - small, small))


def pad_map(small: Space, big: Space) -> LinMap:
    """Coordinate inclusion of a stage space into a later stage space."""
    return LinMap(_pad_matrix(small.dim, big.dim), small, big)


def find_stage(chain: Chain, op: LinMap) -> Optional[int]:
    for idx, stage in enumerate(chain.stages):
        if stage.F == op:
            return idx
    return None


def _bit_size(task: Task) -> int:
    total = task.k.bit_length()
    for mat in (task.T.matrix, task.i.matrix, task.j.matrix):
        for row in mat.entries:
            for value in row:
                total += value.numerator.bit_length()
                total += value.denominator.bit_length()
    return total


def _lex_key(task: Task):
    def mat_key(mat: QMat):
        return (
            mat.shape,
            tuple(
                (v.numerator, v.denominator) for row in mat.entries for v in row
            ),
        )

    return (mat_key(task.T.matrix), mat_key(task.i.matrix), mat_key(task.j.matrix), task.k)


def solve_through(spanning: QMat, images: QMat, domain: Space, codomain: Space) -> LinMap:
    """The unique F with F applied to the spanning columns giving the images.

    The spanning matrix must have full row rank (its columns generate the
    domain); inconsistency means the requested identities clash.
    """
    rows = []
    lhs = spanning.transpose()
    for r in range(images.rows):
        sol = solve_linear(lhs, images.row(r))
        if sol is None:
            raise VerificationError("induced map does not exist; identities clash")
        rows.append(sol.entries)
    out = LinMap(QMat.from_rows(rows, cols=domain.dim), domain, codomain)
    if out.matrix @ spanning != images:
        raise VerificationError("induced map failed to reproduce its identities")
    return out


def realize_over(
    prev: Space, via: LinMap, ext: LinMap, dim_cap: int = DIM_CAP
) -> tuple[Space, LinMap, LinMap]:
    """Amalgamate ext's codomain onto prev over the common subspace.

    via: Z -> prev and ext: Z -> X are isometric.  Returns (N, inclP, emb)
    where N carries prev as its leading coordinates, inclP is that
    coordinate inclusion, emb: X -> N is isometric, and emb after ext
    equals inclP after via exactly.

    The amalgam is the pushout of (via, ext); the coordinate change picks
    the prev-block columns first and then greedily independent columns of
    the X leg, so prev-coordinates are literally preserved.
    """
    Z = via.domain
    if ext.domain != Z:
        raise DimensionMismatch("via and ext need a common domain")
    X = ext.codomain
    new_dim = prev.dim + X.dim - Z.dim
    if new_dim > dim_cap:
        raise CapExceeded(f"amalgam dimension {new_dim} exceeds cap {dim_cap}")
    # Quotient of the l1 sum by the antidiagonal; the sum ball itself is
    # never completed since only its generators matter for the image.
    sum_dim = prev.dim + X.dim
    zero_x = QVec.zero(X.dim)
    zero_p = QVec.zero(prev.dim)
    gens = [v.concat(zero_x) for v in prev.ball.vrep]
    gens += [zero_p.concat(w) for w in X.ball.vrep]
    raw = [
        via(QVec.unit(Z.dim, k)).concat(-ext(QVec.unit(Z.dim, k)))
        for k in range(Z.dim)
    ]
    raw = [r for r in raw if not r.is_zero()]
    if raw:
        reduced, pivots = _rref([list(r.entries) for r in raw])
        if len(pivots) != len(raw):
            raise PreconditionError("degenerate gluing data")
        delta = [QVec.of(row) for row in reduced]
    else:
        delta = []
    q_mat = quotient_matrix(sum_dim, delta)
    w_dim = q_mat.rows
    if w_dim != new_dim:
        raise PreconditionError("gluing maps are not injective")
    g_mat = q_mat @ QMat.identity(prev.dim).vstack(QMat.zeros(X.dim, prev.dim))
    j_mat = q_mat @ QMat.zeros(prev.dim, X.dim).vstack(QMat.identity(X.dim))
    cols = [g_mat.col(t) for t in range(prev.dim)]
    for c in range(X.dim):
        if len(cols) == w_dim:
            break
        candidate = j_mat.col(c)
        trial = QMat.from_cols(cols + [candidate], rows=w_dim)
        if rank(trial) == len(cols) + 1:
            cols.append(candidate)
    basis = QMat.from_cols(cols, rows=w_dim)
    if basis.shape != (w_dim, w_dim):
        raise VerificationError("amalgam basis construction failed")
    change = invert(basis)
    ball_gens = [change.apply(q_mat.apply(v)) for v in gens]
    if w_dim == 0:
        ball = Ball(0, (), ())
    else:
        ball = complete_representations(
            Ball(w_dim, canon_set(ball_gens), None), dim_cap
        )
    N = Space(w_dim, ball)
    inclP = LinMap(_pad_matrix(prev.dim, w_dim), prev, N)
    emb = LinMap(change @ j_mat, X, N)
    if emb.matrix @ ext.matrix != inclP.matrix @ via.matrix:
        raise VerificationError("amalgam glue identity failed")
    if not is_isometric(inclP) or not is_isometric(emb):
        raise VerificationError("amalgam lost an isometry")
    return N, inclP, emb


def zero_chain(dim_cap: int = DEFAULT_DIM_CAP, seed: int = 0) -> Chain:
    zero = zero_space()
    f0 = LinMap.zero(zero, zero)
    ident = LinMap.identity(zero)
    stage = ChainStage(zero, zero, f0, ident, ident)
    return Chain((stage,), (), dim_cap, seed)


def zero_task() -> Task:
    zero = zero_space()
    z = LinMap.zero(zero, zero)
    return Task(LinMap.zero(zero, zero), z, z, 0)


def glue_task(c) -> Task:
    """Glue a fresh line pair with F acting as multiplication by c."""
    c = rat(c)
    if abs(c) > 1:
        raise PreconditionError("glue constant must have |c| <= 1")
    ln = line()
    T = LinMap(QMat.from_rows([[c]]), ln, ln)
    legs = LinMap.zero(zero_space(), ln)
    return Task(T, legs, legs, 0)


def _extension_task(stage: ChainStage, k: int, target_index: int, c: Fraction) -> Task:
    """One fresh l1 direction added to the domain, sent to a scaled basis
    vector of the codomain (or to zero when the codomain is trivial)."""
    X, inl, _ = l1_sum(stage.U, line())
    if stage.V.dim == 0:
        new_col = QVec.zero(0)
    else:
        unit = QVec.unit(stage.V.dim, target_index)
        new_col = unit.scale(c / norm_eval(stage.V, unit))
    matrix = stage.F.matrix.hstack(QMat.from_cols([new_col], rows=stage.V.dim))
    T = LinMap(matrix, X, stage.V)
    return Task(T, inl, LinMap.identity(stage.V), k)


def _task_pool(chain: Chain) -> list[Task]:
    """Append-only pool: a fixed seeded base group, then two tasks per
    existing stage.  The pool for a chain prefix is a prefix of the pool for
    any extension, which keeps already-emitted tasks stable."""
    rnd = random.Random(chain.seed)
    base = [zero_task()]
    for _ in range(3):
        base.append(glue_task(Fraction(rnd.randrange(-4, 5), 4)))
    base.sort(key=lambda t: (_bit_size(t), _lex_key(t)))
    pool = base
    for s in range(1, len(chain.stages)):
        target = rnd.randrange(1 << 30)
        scale_num = rnd.randrange(-2, 3)
        stage = chain.stages[s]
        group = []
        if stage.U.dim <= chain.dim_cap and stage.V.dim <= chain.dim_cap:
            group.append(
                Task(stage.F, LinMap.identity(stage.U), LinMap.identity(stage.V), s)
            )
        if stage.U.dim + 1 <= chain.dim_cap:
            index = target % stage.V.dim if stage.V.dim else 0
            group.append(_extension_task(stage, s, index, Fraction(scale_num, 2)))
        group.sort(key=lambda t: (_bit_size(t), _lex_key(t)))
        pool += group
    return pool


def enumerate_tasks(chain: Chain, budget: int) -> list[Task]:
    """Dovetailed replay of the task pool: cycles of growing prefixes, so
    every task is emitted again and again as the budget grows."""
    if budget < 1:
        raise PreconditionError("budget must be >= 1")
    pool = _task_pool(chain)
    out: list[Task] = []
    cycle = 0
    while len(out) < budget:
        for idx in range(cycle + 1):
            out.append(pool[idx % len(pool)])
            if len(out) == budget:
                break
        cycle += 1
    return out


def _star_condition(chain: Chain, task: Task) -> bool:
    n = len(chain.stages)
    if not (0 <= task.k < n):
        return False
    stage = chain.stages[task.k]
    if task.i.domain != stage.U or task.j.domain != stage.V:
        return False
    if task.i.codomain != task.T.domain or task.j.codomain != task.T.codomain:
        return False
    if operator_norm(task.T) > 1:
        return False
    if task.T.matrix @ task.i.matrix != task.j.matrix @ stage.F.matrix:
        return False
    return is_isometric(task.i) and is_isometric(task.j)


def _repeat_stage(chain: Chain, task: Task, verdict: str) -> Chain:
    prev = chain.stages[-1]
    stage = ChainStage(
        prev.U, prev.V, prev.F, LinMap.identity(prev.U), LinMap.identity(prev.V)
    )
    entry = LogEntry(len(chain.stages), task.label(), verdict)
    return Chain(chain.stages + (stage,), chain.log + (entry,), chain.dim_cap, chain.seed)


def _verify_stage(prev: ChainStage, stage: ChainStage) -> None:
    norm_f = operator_norm(stage.F)
    if norm_f > 1:
        raise VerificationError(f"stage operator has norm {norm_f} > 1")
    if stage.F.matrix @ stage.inclU.matrix != stage.inclV.matrix @ prev.F.matrix:
        raise VerificationError("stage does not extend the previous operator")
    if not is_isometric(stage.inclU) or not is_isometric(stage.inclV):
        raise VerificationError("stage inclusion lost isometry")


def _step_realize(
    chain: Chain, task: Task, cap: int
) -> tuple[Chain, LinMap, LinMap]:
    """Append the realized stage; returns the new chain and the embeddings
    of the task's spaces into it.  Raises CapExceeded when it cannot fit."""
    prev = chain.stages[-1]
    anchor = chain.stages[task.k]
    via_u = pad_map(anchor.U, prev.U)
    via_v = pad_map(anchor.V, prev.V)
    new_u, new_v = (
        prev.U.dim + task.T.domain.dim - anchor.U.dim,
        prev.V.dim + task.T.codomain.dim - anchor.V.dim,
    )
    if max(new_u, new_v) > cap:
        raise CapExceeded(
            f"realization needs dims ({new_u}, {new_v}) beyond cap {cap}"
        )
    U_new, inclU, emb_x = realize_over(prev.U, via_u, task.i, cap)
    V_new, inclV, emb_y = realize_over(prev.V, via_v, task.j, cap)
    spanning = inclU.matrix.hstack(emb_x.matrix)
    images = (inclV.matrix @ prev.F.matrix).hstack(emb_y.matrix @ task.T.matrix)
    F_new = solve_through(spanning, images, U_new, V_new)
    stage = ChainStage(U_new, V_new, F_new, inclU, inclV)
    _verify_stage(prev, stage)
    # Condition (c): the task is realized exactly, with retractions.
    if F_new.matrix @ emb_x.matrix != emb_y.matrix @ task.T.matrix:
        raise VerificationError("realized stage failed the task square")
    if emb_x.matrix @ task.i.matrix != _pad_matrix(anchor.U.dim, U_new.dim):
        raise VerificationError("domain retraction identity failed")
    if emb_y.matrix @ task.j.matrix != _pad_matrix(anchor.V.dim, V_new.dim):
        raise VerificationError("codomain retraction identity failed")
    verdict = "realized" if max(new_u, new_v) <= chain.dim_cap else "realized:cap-bypass"
    entry = LogEntry(len(chain.stages), task.label(), verdict)
    new_chain = Chain(
        chain.stages + (stage,), chain.log + (entry,), chain.dim_cap, chain.seed
    )
    return new_chain, emb_x, emb_y


def step_chain(chain: Chain, task: Task, cap_override: Optional[int] = None) -> Chain:
    """One construction step: realize the task if condition (*) holds, else
    repeat the previous stage; a cap overflow is logged, not raised."""
    if not chain.stages:
        raise PreconditionError("chain must contain stage 0")
    if not _star_condition(chain, task):
        return _repeat_stage(chain, task, "repeated")
    cap = cap_override if cap_override is not None else chain.dim_cap
    try:
        new_chain, _, _ = _step_realize(chain, task, cap)
    except CapExceeded:
        return _repeat_stage(chain, task, "skipped:cap")
    return new_chain


def build_chain(stages: int, dim_cap: int = DEFAULT_DIM_CAP, seed: int = 0) -> Chain:
    """Fold the enumerated task stream from the zero chain."""
    if stages < 0:
        raise PreconditionError("stages must be >= 0")
    chain = zero_chain(dim_cap, seed)
    for n in range(1, stages + 1):
        task = enumerate_tasks(chain, n)[n - 1]
        chain = step_chain(chain, task)
    return chain


def ensure_dim(chain: Chain, min_dim: int) -> Chain:
    """Grow the newest stage to at least the given dimension on both sides
    by gluing fresh zero-mapped lines; used for basis absorption."""
    task = glue_task(0)
    while (
        chain.stages[-1].U.dim < min_dim or chain.stages[-1].V.dim < min_dim
    ):
        grown = step_chain(chain, task, cap_override=DIM_CAP)
        if not grown.log[-1].verdict.startswith("realized"):
            raise CapExceeded("cannot grow stage dimension under the hard cap")
        chain = grown
    return chain


def g_witness(
    chain: Chain,
    T: LinMap,
    X0incl: LinMap,
    Y0incl: LinMap,
    seed: OperatorSquare,
    eps,
) -> tuple[LinMap, LinMap, int, Chain]:
    """Realize the extension T of a seeded restriction exactly in the chain.

    The seed square places T's restriction (its S component) at some stage
    n with exact commutation.  The output embeddings i', j' land in a new
    stage m with F_m after i' equal to j' after T, and restrict over the
    seeded subspaces to the seed legs on the nose, so the advertised strict
    eps-closeness holds with margin eps itself.
    """
    eps = rat(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    norm_t = operator_norm(T)
    if norm_t > 1:
        raise PreconditionError(f"operator norm {norm_t} > 1")
    X, Y = T.domain, T.codomain
    if X0incl.codomain != X or Y0incl.codomain != Y:
        raise DimensionMismatch("subspace inclusions must land in T's spaces")
    if not is_isometric(X0incl) or not is_isometric(Y0incl):
        raise PreconditionError("subspace inclusions must be isometric")
    n = find_stage(chain, seed.T)
    if n is None:
        raise PreconditionError("seed target operator is not a chain stage")
    stage = chain.stages[n]
    if seed.i0.domain != X0incl.domain or seed.i1.domain != Y0incl.domain:
        raise DimensionMismatch("seed legs must start at the seeded subspaces")
    if seed.i0.codomain != stage.U or seed.i1.codomain != stage.V:
        raise DimensionMismatch("seed legs must land in the seed stage")
    if seed.defect != 0:
        raise PreconditionError("seed square must commute exactly")
    if seed.T.matrix @ seed.i0.matrix != seed.i1.matrix @ seed.S.matrix:
        raise PreconditionError("seed square does not commute")
    if not is_isometric(seed.i0) or not is_isometric(seed.i1):
        raise PreconditionError("seed legs must be isometric")
    if T.matrix @ X0incl.matrix != Y0incl.matrix @ seed.S.matrix:
        raise PreconditionError("T does not extend the seeded restriction")
    if (
        X0incl.domain == X
        and Y0incl.domain == Y
        and X0incl.matrix == QMat.identity(X.dim)
        and Y0incl.matrix == QMat.identity(Y.dim)
    ):
        return seed.i0, seed.i1, n, chain
    # Glue the extension onto the seed stage (one pushout per side).
    U_prime, inclUn, i3 = realize_over(stage.U, seed.i0, X0incl, DIM_CAP)
    V_prime, inclVn, j3 = realize_over(stage.V, seed.i1, Y0incl, DIM_CAP)
    spanning = inclUn.matrix.hstack(i3.matrix)
    images = (inclVn.matrix @ stage.F.matrix).hstack(j3.matrix @ T.matrix)
    T3 = solve_through(spanning, images, U_prime, V_prime)
    norm_t3 = operator_norm(T3)
    if norm_t3 > 1:
        raise VerificationError(f"glued operator has norm {norm_t3} > 1")
    # The repair step is a verification pass here: the glued data is
    # already rational and nonexpansive with exact pins, which is what the
    # repair would otherwise enforce.
    task = Task(T3, inclUn, inclVn, n)
    extended, emb_x, emb_y = _step_realize(chain, task, DIM_CAP)
    m = len(extended.stages) - 1
    i_prime = emb_x.compose(i3)
    j_prime = emb_y.compose(j3)
    F_m = extended.stages[m].F
    if F_m.matrix @ i_prime.matrix != j_prime.matrix @ T.matrix:
        raise VerificationError("witness square is not exact")
    pad_u = pad_map(stage.U, extended.stages[m].U)
    pad_v = pad_map(stage.V, extended.stages[m].V)
    dist0 = map_distance(i_prime.compose(X0incl), pad_u.compose(seed.i0))
    dist1 = map_distance(j_prime.compose(Y0incl), pad_v.compose(seed.i1))
    if dist0 >= eps or dist1 >= eps:
        raise VerificationError("witness closeness bound failed")
    return i_prime, j_prime, m, extended


def claim_step(
    chain: Chain, f: OperatorSquare, seed: OperatorSquare, eps
) -> tuple[OperatorSquare, Chain, Fraction, Fraction]:
    """Turn an embedding of a seeded operator into an exact realization.

    f embeds the seeded operator S into a target operator; the returned
    square embeds the target exactly into a (possibly extended) stage, and
    composing it with f is close to the plain stage inclusion.  When f is
    already exact the composite closeness is zero; an inexact f is first
    absorbed into a correction square, costing at most f.eps + f.defect.
    """
    if f.S != seed.S:
        raise PreconditionError("f and seed must share their source operator")
    p = find_stage(chain, seed.T)
    if p is None:
        raise PreconditionError("seed target operator is not a chain stage")
    exact = f.defect == 0 and is_isometric(f.i0) and is_isometric(f.i1)
    if exact:
        target, x0, y0, inner_seed = f.T, f.i0, f.i1, seed
        out_x = out_y = None
    else:
        if f.eps <= 0:
            raise PreconditionError("inexact square needs a positive eps")
        if f.defect > f.eps:
            raise PreconditionError("square defect exceeds its eps")
        target = square_sum(f.S, f.T, f.i0, f.i1, f.eps, f.defect)
        source_corr = correction_sum(f.i0, f.eps + f.defect)
        target_corr = correction_sum(f.i1, f.eps)
        x0, y0 = source_corr.iX, target_corr.iX
        out_x, out_y = source_corr.jY, target_corr.jY
        inner_seed = seed
    i_prime, j_prime, m, extended = g_witness(
        chain, target, x0, y0, inner_seed, eps
    )
    if out_x is not None:
        g0 = i_prime.compose(out_x)
        g1 = j_prime.compose(out_y)
    else:
        g0, g1 = i_prime, j_prime
    stage_m = extended.stages[m]
    g_square = make_square(f.T, stage_m.F, g0, g1, eps)
    if g_square.defect != 0:
        raise VerificationError("claim output square is not exact")
    if not is_isometric(g0) or not is_isometric(g1):
        raise VerificationError("claim output legs lost isometry")
    pad_u = pad_map(chain.stages[p].U, stage_m.U)
    pad_v = pad_map(chain.stages[p].V, stage_m.V)
    close0 = map_distance(g0.compose(f.i0), pad_u.compose(seed.i0))
    close1 = map_distance(g1.compose(f.i1), pad_v.compose(seed.i1))
    return g_square, extended, close0, close1


def space_witness(
    chain: Chain, side: str, X0incl: LinMap, i: LinMap, eps
) -> LinMap:
    """Extend a seeded subspace embedding to the whole space, on one side.

    side = "domain": i lands in a stage's U and the result embeds X into a
    later U_m.  side = "codomain": i lands in a stage's V.  Both reduce to
    g_witness: the domain case first pushes the codomain out along the
    extension, the codomain case runs the zero operator into X.
    """
    if side not in ("domain", "codomain"):
        raise PreconditionError("side must be domain or codomain")
    if not is_isometric(X0incl) or not is_isometric(i):
        raise PreconditionError("witness inputs must be isometric")
    X = X0incl.codomain
    if X0incl.domain == X and X0incl.matrix == QMat.identity(X.dim):
        return i
    if side == "domain":
        n = next(
            (
                idx
                for idx, st in enumerate(chain.stages)
                if st.U == i.codomain
            ),
            None,
        )
        if n is None:
            raise PreconditionError("i does not land in a stage domain")
        stage = chain.stages[n]
        reach = stage.F.compose(i)
        po = pushout(X0incl, reach, DIM_CAP)
        S0 = reach
        T_op = po.g
        Y0incl = po.j
        seed = OperatorSquare(S0, stage.F, i, LinMap.identity(stage.V), eps=rat(eps), defect=Fraction(0))
        i_prime, _, _, _ = g_witness(chain, T_op, X0incl, Y0incl, seed, eps)
        return i_prime
    n = next(
        (idx for idx, st in enumerate(chain.stages) if st.V == i.codomain),
        None,
    )
    if n is None:
        raise PreconditionError("i does not land in a stage codomain")
    stage = chain.stages[n]
    zero = zero_space()
    T_op = LinMap.zero(zero, X)
    S0 = LinMap.zero(zero, X0incl.domain)
    seed = OperatorSquare(
        S0,
        stage.F,
        LinMap.zero(zero, stage.U),
        i,
        eps=rat(eps),
        defect=Fraction(0),
    )
    _, j_prime, _, _ = g_witness(
        chain, T_op, LinMap.identity(zero), X0incl, seed, eps
    )
    return j_prime


def kernel_witness_extended(
    chain: Chain, X0incl: LinMap, i: LinMap, eps
) -> tuple[LinMap, int, Chain]:
    """kernel_witness with the landing stage and the extended chain."""
    n = next(
        (idx for idx, st in enumerate(chain.stages) if st.U == i.codomain),
        None,
    )
    if n is None:
        raise PreconditionError("i does not land in a stage domain")
    stage = chain.stages[n]
    if not (stage.F.matrix @ i.matrix).is_zero():
        raise PreconditionError("i does not land in the kernel of the stage map")
    if not is_isometric(X0incl) or not is_isometric(i):
        raise PreconditionError("witness inputs must be isometric")
    zero = zero_space()
    X = X0incl.codomain
    T_op = LinMap.zero(X, zero)
    S0 = LinMap.zero(X0incl.domain, zero)
    seed = OperatorSquare(
        S0, stage.F, i, LinMap.zero(zero, stage.V), eps=rat(eps), defect=Fraction(0)
    )
    i_prime, _, m, extended = g_witness(
        chain, T_op, X0incl, LinMap.identity(zero), seed, eps
    )
    if not (extended.stages[m].F.matrix @ i_prime.matrix).is_zero():
        raise VerificationError("kernel witness is not in the kernel")
    return i_prime, m, extended


def kernel_witness(chain: Chain, X0incl: LinMap, i: LinMap, eps) -> LinMap:
    """Embed X into the exact kernel of a later stage, extending i.

    i must already land in the kernel of its stage: the witness is
    g_witness run against the zero operator into the zero space, whose
    exactness forces F_m after the result to vanish identically.
    """
    i_prime, _, _ = kernel_witness_extended(chain, X0incl, i, eps)
    return i_prime


def surjectivity_witness_extended(
    chain: Chain, v: QVec
) -> tuple[int, QVec, Chain]:
    """surjectivity_witness with the chain the preimage lives in."""
    if v.is_zero():
        raise PreconditionError("v must be nonzero")
    n = next(
        (idx for idx, st in enumerate(chain.stages) if st.V.dim >= v.dim), None
    )
    if n is None:
        raise PreconditionError("no stage codomain can hold v")
    stage = chain.stages[n]
    padded = v.concat(QVec.zero(stage.V.dim - v.dim))
    direct = solve_linear(stage.F.matrix, padded)
    if direct is not None and stage.F.matrix.apply(direct) == padded:
        return n, direct, chain
    column = QMat.from_cols([padded], rows=stage.V.dim)
    span = pullback_space(column, stage.V)
    ident = LinMap.identity(span)
    j = LinMap(column, span, stage.V)
    zero = zero_space()
    seed = OperatorSquare(
        LinMap.zero(zero, span),
        stage.F,
        LinMap.zero(zero, stage.U),
        j,
        eps=Fraction(1),
        defect=Fraction(0),
    )
    i_prime, j_prime, m, extended = g_witness(
        chain,
        ident,
        LinMap.zero(zero, span),
        LinMap.identity(span),
        seed,
        Fraction(1),
    )
    u = i_prime(QVec.unit(1, 0))
    target = extended.stages[m]
    lifted = padded.concat(QVec.zero(target.V.dim - stage.V.dim))
    if target.F.matrix.apply(u) != lifted:
        raise VerificationError("surjectivity witness failed the exact equality")
    return m, u, extended


def surjectivity_witness(chain: Chain, v: QVec) -> tuple[int, QVec]:
    """A stage m and u with F_m(u) = v exactly.

    v is read in the coordinates of the first stage codomain that can hold
    it.  If v is already in the range the preimage is returned directly;
    otherwise the identity on the span of v is realized by g_witness with
    the span seeded in place, which makes the preimage exact.
    """
    m, u, _ = surjectivity_witness_extended(chain, v)
    return m, u


def _truncation(T: LinMap, n: int) -> tuple[Space, Space, LinMap, QMat, QMat]:
    """The n-th stage of the truncation tower of T.

    Domain: the span of the first n coordinates.  Codomain: the span of
    the interleaved basis e_0, T(e_0), e_1, T(e_1), ... restricted to the
    first n rounds, keeping only new directions.  Returns the two spaces,
    the truncated operator, and the inclusion matrices into T's spaces.
    """
    X, Y = T.domain, T.codomain
    dx = min(n, X.dim)
    x_cols = [QVec.unit(X.dim, t) for t in range(dx)]
    y_cols: list[QVec] = []

    def push(candidate: QVec) -> None:
        trial = QMat.from_cols(y_cols + [candidate], rows=Y.dim)
        if rank(trial) == len(y_cols) + 1:
            y_cols.append(candidate)

    for t in range(n):
        if t < Y.dim:
            push(QVec.unit(Y.dim, t))
        if t < X.dim:
            push(T(QVec.unit(X.dim, t)))
    x_mat = QMat.from_cols(x_cols, rows=X.dim)
    y_mat = QMat.from_cols(y_cols, rows=Y.dim)
    Xn = pullback_space(x_mat, X) if dx else zero_space()
    Yn = pullback_space(y_mat, Y) if y_cols else zero_space()
    cols = []
    for k in range(dx):
        image = T(QVec.unit(X.dim, k))
        sol = solve_linear(y_mat, image)
        if sol is None or y_mat.apply(sol) != image:
            raise VerificationError("truncation basis misses a T-image")
        cols.append(sol)
    Tn = LinMap(QMat.from_cols(cols, rows=len(y_cols)), Xn, Yn)
    return Xn, Yn, Tn, x_mat, y_mat


def embed_operator(
    chain: Chain, T: LinMap, schedule: EpsSchedule, depth: int
) -> list[OperatorSquare]:
    """Truncation tower of T realized stage by stage in the chain.

    Square n embeds the n-th truncation; consecutive squares restrict to
    each other exactly, which is well within the advertised 3*eps_n
    closeness, and every embedding is isometric hence an eps_n-embedding.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    norm_t = operator_norm(T)
    if norm_t > 1:
        raise PreconditionError(f"operator norm {norm_t} > 1")
    prev_x, prev_y, prev_t, _, _ = _truncation(T, 0)
    current = OperatorSquare(
        prev_t,
        chain.stages[0].F,
        LinMap.zero(prev_x, chain.stages[0].U),
        LinMap.zero(prev_y, chain.stages[0].V),
        schedule.eps(0),
        Fraction(0),
    )
    squares = [current]
    for n in range(1, depth + 1):
        Xn, Yn, Tn, _, _ = _truncation(T, n)
        if Xn == prev_x and Yn == prev_y and Tn == prev_t:
            current = OperatorSquare(
                current.S,
                current.T,
                current.i0,
                current.i1,
                schedule.eps(n),
                Fraction(0),
            )
            squares.append(current)
            continue
        pad_x = LinMap(_pad_matrix(prev_x.dim, Xn.dim), prev_x, Xn)
        pad_y = LinMap(_pad_matrix(prev_y.dim, Yn.dim), prev_y, Yn)
        incl_square = make_square(prev_t, Tn, pad_x, pad_y, schedule.eps(n))
        if incl_square.defect != 0:
            raise VerificationError("truncation tower failed to nest")
        g_square, chain, close0, close1 = claim_step(
            chain, incl_square, current, schedule.eps(n)
        )
        bound = 3 * schedule.eps(n)
        if close0 > bound or close1 > bound:
            raise VerificationError("tower closeness bound failed")
        current = OperatorSquare(
            Tn, g_square.T, g_square.i0, g_square.i1, schedule.eps(n), Fraction(0)
        )
        squares.append(current)
        prev_x, prev_y, prev_t = Xn, Yn, Tn
    return squares


def back_and_forth(
    A: Chain, B: Chain, seed: OperatorSquare, eps, depth: int
) -> BnfTranscript:
    """Alternating exact matching of two chains from a strict seed square.

    The first correction absorbs the seed's quality eps0; every later
    square is exact, so the per-round closeness values sit far below the
    2*eps_n + eps_{n+1} budgets and the eta_n estimates sum below 2*eps.
    """
    eps = rat(eps)
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    a0 = find_stage(A, seed.S)
    b0 = find_stage(B, seed.T)
    if a0 is None or b0 is None:
        raise PreconditionError("seed must connect a stage of A to a stage of B")
    for leg in (seed.i0, seed.i1):
        if operator_norm(leg) > 1:
            raise PreconditionError("seed legs must be nonexpansive")
    deltas = [seed.defect]
    for leg in (seed.i0, seed.i1):
        if leg.domain.dim == 0:
            continue
        low = lower_isometry_bound(leg)
        if low == 0:
            raise PreconditionError("seed leg is not an embedding")
        deltas.append(1 / low - 1)
    eps0 = max(deltas)
    if eps0 == 0:
        eps0 = eps / 2
    if eps0 >= eps:
        raise PreconditionError("seed quality is not strictly below eps")
    shift = None
    for k in range(0, 64):
        if 3 * Fraction(1, 2**k) < eps - eps0 and Fraction(1, 2 ** (k + 1)) < eps0:
            shift = k
            break
    if shift is None:
        raise PreconditionError("no dyadic schedule satisfies condition (s)")
    terms = tuple(Fraction(1, 2 ** (n + shift)) for n in range(1, depth + 3))
    schedule = EpsSchedule(eps0, terms)
    if not schedule.satisfies_condition_s(eps):
        raise PreconditionError("schedule fails condition (s)")
    current_k = make_square(seed.S, seed.T, seed.i0, seed.i1, eps0)
    anchor_a, anchor_b = a0, b0
    k_squares = [current_k]
    l_squares = []
    for n in range(depth):
        eps_next = schedule.eps(n + 1)
        l_raw, A, close0, close1 = claim_step(
            A, current_k, identity_square(A, anchor_a), eps_next
        )
        budget = 2 * schedule.eps(n) + eps_next
        if close0 > budget or close1 > budget:
            raise VerificationError("condition (3) closeness failed")
        A = ensure_dim(A, min(n + 2, DIM_CAP))
        top = len(A.stages) - 1
        stage_top = A.stages[top]
        pad_u = pad_map(l_raw.T.domain, stage_top.U)
        pad_v = pad_map(l_raw.T.codomain, stage_top.V)
        current_l = make_square(
            l_raw.S,
            stage_top.F,
            pad_u.compose(l_raw.i0),
            pad_v.compose(l_raw.i1),
            eps_next,
        )
        if current_l.defect != 0:
            raise VerificationError("forth square lost exactness")
        l_squares.append(current_l)
        anchor_a = top
        eps_after = schedule.eps(n + 2)
        k_raw, B, close0, close1 = claim_step(
            B, current_l, identity_square(B, anchor_b), eps_after
        )
        budget = 2 * eps_next + eps_after
        if close0 > budget or close1 > budget:
            raise VerificationError("condition (4) closeness failed")
        B = ensure_dim(B, min(n + 2, DIM_CAP))
        top_b = len(B.stages) - 1
        stage_top_b = B.stages[top_b]
        pad_u = pad_map(k_raw.T.domain, stage_top_b.U)
        pad_v = pad_map(k_raw.T.codomain, stage_top_b.V)
        current_k = make_square(
            k_raw.S,
            stage_top_b.F,
            pad_u.compose(k_raw.i0),
            pad_v.compose(k_raw.i1),
            eps_after,
        )
        if current_k.defect != 0:
            raise VerificationError("back square lost exactness")
        k_squares.append(current_k)
        anchor_b = top_b
    etas = tuple(
        2 * schedule.eps(n - 1) + 3 * schedule.eps(n) + schedule.eps(n + 1)
        for n in range(1, depth + 1)
    )
    if sum(etas, Fraction(0)) >= 2 * eps:
        raise VerificationError("eta series does not stay below 2*eps")
    return BnfTranscript(tuple(k_squares), tuple(l_squares), etas)
