"""Exact rational scalars, vectors, matrices, and linear programming.

Every quantity is a ``fractions.Fraction``; nothing in this module (or in the
modules built on it) touches floating point.  Determinism matters as much as
exactness here: elimination pivots, simplex pivots, and tie-breaks all follow
fixed index order so that repeated runs produce identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatch, ParseError

Rat = Fraction

RatLike = Union[int, str, Fraction]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE = "<="
EQ = "="
GE = ">="


def rat(value: RatLike) -> Fraction:
    """Convert an int, a ``p/q`` string, or a Fraction to an exact rational.

    Examples:
        >>> rat("3/4")
        Fraction(3, 4)
        >>> rat(-2)
        Fraction(-2, 1)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def rat_str(value: Fraction) -> str:
    """Canonical ``p/q`` form; the denominator is omitted when it is 1."""
    return str(value)


@dataclass(frozen=True)
class QVec:
    """Immutable rational vector."""

    entries: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable[RatLike]) -> "QVec":
        return QVec(tuple(rat(v) for v in values))

    @staticmethod
    def zero(dim: int) -> "QVec":
        return QVec((Fraction(0),) * dim)

    @staticmethod
    def unit(dim: int, index: int) -> "QVec":
        return QVec(tuple(Fraction(1 if i == index else 0) for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def __add__(self, other: "QVec") -> "QVec":
        self._check(other)
        return QVec(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QVec") -> "QVec":
        self._check(other)
        return QVec(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QVec":
        return QVec(tuple(-a for a in self.entries))

    def scale(self, factor: RatLike) -> "QVec":
        c = rat(factor)
        return QVec(tuple(c * a for a in self.entries))

    def dot(self, other: "QVec") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def concat(self, other: "QVec") -> "QVec":
        return QVec(self.entries + other.entries)

    def _check(self, other: "QVec") -> None:
        if len(self.entries) != len(other.entries):
            raise DimensionMismatch(
                f"vector dims {len(self.entries)} != {len(other.entries)}"
            )


@dataclass(frozen=True)
class QMat:
    """Immutable rational matrix, stored by rows.

    ``rows == 0`` or ``cols == 0`` is legal; maps in and out of the
    zero-dimensional space are everywhere in the chain construction.
    """

    entries: tuple[tuple[Fraction, ...], ...]
    shape: tuple[int, int]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[RatLike]], cols: Optional[int] = None) -> "QMat":
        data = tuple(tuple(rat(v) for v in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != width:
                raise DimensionMismatch(f"declared cols {cols} != row width {width}")
        else:
            width = 0 if cols is None else cols
        return QMat(data, (len(data), width))

    @staticmethod
    def identity(n: int) -> "QMat":
        return QMat.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "QMat":
        return QMat(tuple((Fraction(0),) * cols for _ in range(rows)), (rows, cols))

    @staticmethod
    def from_cols(cols: Sequence[QVec], rows: Optional[int] = None) -> "QMat":
        if cols:
            height = cols[0].dim
            if any(c.dim != height for c in cols):
                raise DimensionMismatch("ragged columns")
        else:
            height = 0 if rows is None else rows
        return QMat.from_rows(
            [[cols[j][i] for j in range(len(cols))] for i in range(height)],
            cols=len(cols),
        )

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def row(self, i: int) -> QVec:
        return QVec(self.entries[i])

    def col(self, j: int) -> QVec:
        return QVec(tuple(self.entries[i][j] for i in range(self.rows)))

    def transpose(self) -> "QMat":
        return QMat(
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
            (self.cols, self.rows),
        )

    def apply(self, v: QVec) -> QVec:
        if v.dim != self.cols:
            raise DimensionMismatch(f"matrix cols {self.cols} != vector dim {v.dim}")
        return QVec(
            tuple(
                sum((self.entries[i][j] * v.entries[j] for j in range(self.cols)), Fraction(0))
                for i in range(self.rows)
            )
        )

    def __matmul__(self, other: "QMat") -> "QMat":
        if self.cols != other.rows:
            raise DimensionMismatch(f"inner dims {self.cols} != {other.rows}")
        ot = other.transpose()
        return QMat(
            tuple(
                tuple(
                    sum((a * b for a, b in zip(row, col)), Fraction(0))
                    for col in ot.entries
                )
                for row in self.entries
            ),
            (self.rows, other.cols),
        )

    def __add__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} != {other.shape}")
        return QMat(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
            self.shape,
        )

    def __sub__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} != {other.shape}")
        return QMat(
            tuple(
                tuple(a - b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
            self.shape,
        )

    def scale(self, factor: RatLike) -> "QMat":
        c = rat(factor)
        return QMat(tuple(tuple(c * a for a in row) for row in self.entries), self.shape)

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)

    def hstack(self, other: "QMat") -> "QMat":
        if self.rows != other.rows:
            raise DimensionMismatch(f"row counts {self.rows} != {other.rows}")
        return QMat(
            tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)),
            (self.rows, self.cols + other.cols),
        )

    def vstack(self, other: "QMat") -> "QMat":
        if self.cols != other.cols:
            raise DimensionMismatch(f"col counts {self.cols} != {other.cols}")
        return QMat(self.entries + other.entries, (self.rows + other.rows, self.cols))


def block_diag(a: QMat, b: QMat) -> QMat:
    top = a.hstack(QMat.zeros(a.rows, b.cols))
    bottom = QMat.zeros(b.rows, a.cols).hstack(b)
    return top.vstack(bottom)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (reduced rows, pivot columns).

    Pivot choice is the first row with a nonzero entry in the current column,
    scanning columns left to right: fully deterministic.
    """
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(a: QMat) -> int:
    reduced, pivots = _rref([list(row) for row in a.entries])
    return len(pivots)


def solve_linear(a: QMat, b: QVec) -> Optional[QVec]:
    """One exact solution of ``a x = b`` with free variables set to 0, or None.

    Examples:
        >>> solve_linear(QMat.from_rows([[2, 0], [0, 4]]), QVec.of([1, 1]))
        QVec(entries=(Fraction(1, 2), Fraction(1, 4)))
    """
    if b.dim != a.rows:
        raise DimensionMismatch(f"matrix rows {a.rows} != vector dim {b.dim}")
    aug = [list(row) + [b[i]] for i, row in enumerate(a.entries)]
    if not aug:
        return QVec.zero(a.cols)
    reduced, pivots = _rref(aug)
    for row in reduced:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    solution = [Fraction(0)] * a.cols
    for row, col in zip(reduced, pivots):
        if col == a.cols:
            return None
        solution[col] = row[-1]
    return QVec(tuple(solution))


def kernel_basis(a: QMat) -> list[QVec]:
    """Deterministic kernel basis from the reduced echelon form.

    One basis vector per free column, in ascending column order: the free
    coordinate is 1 and pivot coordinates are back-filled.

    Examples:
        >>> kernel_basis(QMat.from_rows([[1, 1]]))
        [QVec(entries=(Fraction(-1, 1), Fraction(1, 1)))]
    """
    reduced, pivots = _rref([list(row) for row in a.entries])
    pivot_set = set(pivots)
    basis: list[QVec] = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * a.cols
        vec[free] = Fraction(1)
        for row, col in zip(reduced, pivots):
            vec[col] = -row[free]
        basis.append(QVec(tuple(vec)))
    return basis


def invert(a: QMat) -> QMat:
    """Exact inverse of a square matrix; raises if singular."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"not square: {a.shape}")
    n = a.rows
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(a.entries)]
    reduced, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return QMat.from_rows([row[n:] for row in reduced], cols=n)


@dataclass(frozen=True)
class LpProblem:
    """A linear program over free rational variables.

    ``constraints`` are (coefficients, relation, bound) with relation one of
    ``<=``, ``=``, ``>=``.  ``nonneg`` optionally marks variables as >= 0 so
    the solver does not have to split them; it defaults to all-free.
    """

    objective: QVec
    constraints: tuple[tuple[QVec, str, Fraction], ...]
    sense: str = "max"
    nonneg: Optional[tuple[bool, ...]] = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"bad sense: {self.sense}")
        for coeffs, relation, _ in self.constraints:
            if relation not in (LE, EQ, GE):
                raise ValueError(f"bad relation: {relation}")
            if coeffs.dim != self.objective.dim:
                raise DimensionMismatch("constraint width != objective width")
        if self.nonneg is not None and len(self.nonneg) != self.objective.dim:
            raise DimensionMismatch("nonneg flags width != objective width")


def lp_solve(problem: LpProblem) -> tuple[str, Optional[tuple[Fraction, QVec]]]:
    """Exact two-phase simplex with Bland's rule.

    Returns (status, payload) with payload = (optimal value, witness point)
    when status is ``optimal`` and None otherwise.  Bland's rule (least index
    entering, least ratio then least basic index leaving) makes the run
    deterministic and cycle-free.
    """
    n = problem.objective.dim
    nonneg = problem.nonneg or (False,) * n
    # Column layout: one column per nonnegative variable, two (plus/minus) per
    # free variable, then slack columns, then artificials.
    col_of_var: list[tuple[int, Optional[int]]] = []
    n_struct = 0
    for flag in nonneg:
        if flag:
            col_of_var.append((n_struct, None))
            n_struct += 1
        else:
            col_of_var.append((n_struct, n_struct + 1))
            n_struct += 2

    def expand(coeffs: QVec) -> list[Fraction]:
        row = [Fraction(0)] * n_struct
        for j, value in enumerate(coeffs.entries):
            if value == 0:
                continue
            pos, neg = col_of_var[j]
            row[pos] += value
            if neg is not None:
                row[neg] -= value
        return row

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_info: list[tuple[int, Fraction]] = []  # (row index, slack sign)
    for coeffs, relation, bound in problem.constraints:
        row = expand(coeffs)
        b = rat(bound)
        if relation == LE:
            sign = Fraction(1)
        elif relation == GE:
            sign = Fraction(-1)
        else:
            sign = Fraction(0)
        rows.append(row)
        rhs.append(b)
        slack_info.append((len(rows) - 1, sign))

    m = len(rows)
    n_slack = sum(1 for _, sign in slack_info if sign != 0)
    slack_col = {}
    k = n_struct
    for i, sign in slack_info:
        if sign != 0:
            slack_col[i] = k
            k += 1
    total_core = n_struct + n_slack

    # Tableau rows over core columns; normalize to b >= 0.
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * n_slack + [rhs[i]]
        if i in slack_col:
            row[slack_col[i]] = slack_info[i][1]
        if row[-1] < 0:
            row = [-x for x in row]
        tab.append(row)

    # Initial basis: slack column where it is +1 after normalization,
    # otherwise an artificial.
    basis: list[int] = [-1] * m
    art_cols: list[int] = []
    width = total_core
    for i in range(m):
        j = slack_col.get(i)
        if j is not None and tab[i][j] == 1:
            basis[i] = j
        else:
            basis[i] = width
            art_cols.append(width)
            width += 1
    for i in range(m):
        row = tab[i]
        core, b = row[:-1], row[-1]
        padded = core + [Fraction(0)] * (width - total_core) + [b]
        if basis[i] >= total_core:
            padded[basis[i]] = Fraction(1)
        tab[i] = padded

    def pivot(row_index: int, col_index: int) -> None:
        inv = Fraction(1) / tab[row_index][col_index]
        tab[row_index] = [x * inv for x in tab[row_index]]
        pivot_row = tab[row_index]
        for i in range(m):
            if i != row_index and tab[i][col_index] != 0:
                factor = tab[i][col_index]
                tab[i] = [x - factor * y for x, y in zip(tab[i], pivot_row)]
        basis[row_index] = col_index

    def run_simplex(cost: list[Fraction], allowed: int, banned: frozenset[int]) -> str:
        while True:
            in_basis = set(basis)
            # Reduced costs: cost_j - cost_B . column_j, Bland: least index < 0.
            dual = [cost[basis[i]] for i in range(m)]
            entering = -1
            for j in range(allowed):
                if j in in_basis or j in banned:
                    continue
                reduced = cost[j] - sum(
                    (dual[i] * tab[i][j] for i in range(m)), Fraction(0)
                )
                if reduced < 0:
                    entering = j
                    break
            if entering < 0:
                return OPTIMAL
            leaving = -1
            best: Optional[Fraction] = None
            for i in range(m):
                a = tab[i][entering]
                if a > 0:
                    ratio = tab[i][-1] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leaving]
                    ):
                        best = ratio
                        leaving = i
            if leaving < 0:
                return UNBOUNDED
            pivot(leaving, entering)

    # Phase 1: minimize sum of artificials.
    if art_cols:
        cost1 = [Fraction(0)] * width
        for j in art_cols:
            cost1[j] = Fraction(1)
        status = run_simplex(cost1, width, frozenset(art_cols))
        if status != OPTIMAL:
            raise AssertionError("phase 1 cannot be unbounded")
        phase1_value = sum(
            (tab[i][-1] for i in range(m) if basis[i] in art_cols), Fraction(0)
        )
        if phase1_value != 0:
            return INFEASIBLE, None
        # Drive lingering artificials out of the basis.
        for i in range(m):
            if basis[i] in art_cols:
                entering = -1
                for j in range(total_core):
                    if tab[i][j] != 0:
                        entering = j
                        break
                if entering >= 0:
                    pivot(i, entering)
        # Rows still basic in an artificial are identically zero: harmless.

    # Phase 2 over core columns only.
    sense_factor = Fraction(1) if problem.sense == "min" else Fraction(-1)
    cost2 = [Fraction(0)] * width
    objective_row = expand(problem.objective)
    for j in range(n_struct):
        cost2[j] = sense_factor * objective_row[j]
    status = run_simplex(cost2, total_core, frozenset())
    if status == UNBOUNDED:
        return UNBOUNDED, None

    values = [Fraction(0)] * width
    for i in range(m):
        values[basis[i]] = tab[i][-1]
    point = []
    for j in range(n):
        pos, neg = col_of_var[j]
        x = values[pos] - (values[neg] if neg is not None else Fraction(0))
        point.append(x)
    value = sum(
        (problem.objective[j] * point[j] for j in range(n)), Fraction(0)
    )
    return OPTIMAL, (value, QVec(tuple(point)))
