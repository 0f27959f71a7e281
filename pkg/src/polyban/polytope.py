"""Centrally symmetric rational polytopes serving as unit balls.

A ball is carried in up to two forms: the V-representation (vertices, one
canonical representative per +-pair) and the H-representation (facet
functionals, same convention).  The norm is ``max_j |phi_j(x)|`` and the dual
norm is ``max_v |phi(v)|``; conversion between the two forms is the double
description method, run incrementally with bitmask tight sets.

Symmetry is exploited throughout: only one representative per antipodal pair
is stored, with the canonical sign making the first nonzero coordinate
positive, and representatives sorted lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapExceeded, DimensionMismatch, NotANorm
from .exactlin import OPTIMAL, LpProblem, QMat, QVec, invert, lp_solve, rank

DIM_CAP = 8


def canon_sign(vec: QVec) -> QVec:
    """Flip the sign so the first nonzero coordinate is positive."""
    for value in vec.entries:
        if value > 0:
            return vec
        if value < 0:
            return -vec
    return vec


def canon_set(vectors: Sequence[QVec]) -> tuple[QVec, ...]:
    """Canonical storage: one representative per +-pair, deduped, sorted."""
    seen = {canon_sign(v).entries for v in vectors if not v.is_zero()}
    return tuple(QVec(e) for e in sorted(seen))


@dataclass(frozen=True)
class Ball:
    """Unit ball data; either representation may be missing before completion.

    Invariants once completed: both reps present, minimal, canonically
    ordered, and describing the same centrally symmetric full-dimensional
    polytope.
    """

    dim: int
    vrep: Optional[tuple[QVec, ...]] = None
    hrep: Optional[tuple[QVec, ...]] = None

    @staticmethod
    def from_vrep(dim: int, vectors: Sequence[QVec]) -> "Ball":
        return Ball(dim, canon_set(vectors), None)

    @staticmethod
    def from_hrep(dim: int, functionals: Sequence[QVec]) -> "Ball":
        return Ball(dim, None, canon_set(functionals))

    def signed_vrep(self) -> list[QVec]:
        assert self.vrep is not None
        out: list[QVec] = []
        for v in self.vrep:
            out.append(v)
            out.append(-v)
        return out

    def signed_hrep(self) -> list[QVec]:
        assert self.hrep is not None
        out: list[QVec] = []
        for phi in self.hrep:
            out.append(phi)
            out.append(-phi)
        return out

    def is_complete(self) -> bool:
        return self.vrep is not None and self.hrep is not None


def _check_cap(dim: int, dim_cap: int) -> None:
    if dim > dim_cap:
        raise CapExceeded(f"dimension {dim} exceeds cap {dim_cap}")


def _enumerate_vertices(
    functionals: Sequence[QVec], dim: int
) -> tuple[list[QVec], list[int]]:
    """Vertices of {x : |phi(x)| <= 1 for all phi}, with tight bitmasks.

    Constraints are indexed by signed functionals (+phi at 2k, -phi at 2k+1);
    the i-th returned mask has bit c set when signed constraint c is tight at
    the i-th vertex.  Raises NotANorm when the region is unbounded.
    """
    if dim == 0:
        return [], []
    # Greedy independent subset to form the initial parallelotope.
    chosen: list[int] = []
    for k, phi in enumerate(functionals):
        trial = [functionals[i].entries for i in chosen] + [phi.entries]
        if rank(QMat.from_rows(trial, cols=dim)) == len(chosen) + 1:
            chosen.append(k)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise NotANorm("functionals do not span; the region is unbounded")
    base = QMat.from_rows([functionals[i].entries for i in chosen], cols=dim)
    base_inv = invert(base)

    signed: list[QVec] = []
    for phi in functionals:
        signed.append(phi)
        signed.append(-phi)

    def tight_mask(point: QVec, upto: int) -> int:
        mask = 0
        for c in range(upto):
            if signed[c].dot(point) == 1:
                mask |= 1 << c
        return mask

    # Initial vertices: base_inv applied to every sign vector.
    vertices: list[QVec] = []
    masks: list[int] = []
    processed = set()
    for bits in range(1 << dim):
        s = QVec.of([1 if (bits >> i) & 1 == 0 else -1 for i in range(dim)])
        point = base_inv.apply(s)
        vertices.append(point)
    initial_signed_indices = []
    for k in chosen:
        initial_signed_indices.extend((2 * k, 2 * k + 1))
        processed.add(2 * k)
        processed.add(2 * k + 1)
    for point in vertices:
        mask = 0
        for c in initial_signed_indices:
            if signed[c].dot(point) == 1:
                mask |= 1 << c
        masks.append(mask)

    # Add the remaining signed constraints one at a time.
    for c in range(len(signed)):
        if c in processed:
            continue
        processed.add(c)
        row = signed[c]
        values = [row.dot(v) for v in vertices]
        inside = [i for i, g in enumerate(values) if g < 1]
        on = [i for i, g in enumerate(values) if g == 1]
        outside = [i for i, g in enumerate(values) if g > 1]
        if not outside:
            for i in on:
                masks[i] |= 1 << c
            continue
        new_vertices: list[QVec] = []
        new_masks: list[int] = []
        for i in inside:
            for j in outside:
                common = masks[i] & masks[j]
                # Combinatorial adjacency: no third vertex's tight set
                # contains the common tight set.
                adjacent = True
                for k, mk in enumerate(masks):
                    if k != i and k != j and common & mk == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                lam = (1 - values[i]) / (values[j] - values[i])
                point = vertices[i] + (vertices[j] - vertices[i]).scale(lam)
                new_vertices.append(point)
                new_masks.append(common | (1 << c))
        on_set = set(on)
        keep_idx = inside + on
        vertices = [vertices[i] for i in keep_idx] + new_vertices
        masks = [
            masks[i] | ((1 << c) if i in on_set else 0) for i in keep_idx
        ] + new_masks
        # Merge coincident points (degenerate inputs).
        merged: dict[tuple, int] = {}
        out_vertices: list[QVec] = []
        out_masks: list[int] = []
        for v, m in zip(vertices, masks):
            key = v.entries
            if key in merged:
                out_masks[merged[key]] |= m
            else:
                merged[key] = len(out_vertices)
                out_vertices.append(v)
                out_masks.append(m)
        vertices, masks = out_vertices, out_masks

    # Safety: a vertex must have tight normals of full rank.
    final_vertices: list[QVec] = []
    final_masks: list[int] = []
    for v, m in zip(vertices, masks):
        normals = [signed[c].entries for c in range(len(signed)) if (m >> c) & 1]
        if rank(QMat.from_rows(normals, cols=dim)) == dim:
            final_vertices.append(v)
            final_masks.append(m)
    return final_vertices, final_masks


def _affine_rank(points: list[QVec]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [(p - base).entries for p in points[1:]]
    return rank(QMat.from_rows(diffs, cols=base.dim))


def complete_representations(ball: Ball, dim_cap: int = DIM_CAP) -> Ball:
    """Fill in the missing representation and canonically minimalize both.

    V -> H goes through the polar (the polar's vertices are exactly the
    facet functionals); H -> V is direct vertex enumeration.  Idempotent.
    Raises NotANorm when the data does not describe a norm and CapExceeded
    past the dimension cap.
    """
    _check_cap(ball.dim, dim_cap)
    dim = ball.dim
    if dim == 0:
        return Ball(0, (), ())
    if ball.vrep is None and ball.hrep is None:
        raise NotANorm("ball has neither representation")

    if ball.vrep is not None:
        gens = canon_set(ball.vrep)
        if rank(QMat.from_rows([g.entries for g in gens], cols=dim)) < dim:
            raise NotANorm("vertices do not span; the ball is degenerate")
        # Polar vertices = facet functionals of the ball.
        facets, _ = _enumerate_vertices(gens, dim)
        hrep = canon_set(facets)
        # A generator is a vertex iff its tight facet normals span.
        signed_h = []
        for phi in hrep:
            signed_h.append(phi)
            signed_h.append(-phi)
        vrep_min = []
        for g in gens:
            if any(abs(phi.dot(g)) > 1 for phi in hrep):
                raise NotANorm("inconsistent vrep: generator outside its own hull")
            tight = [phi.entries for phi in signed_h if phi.dot(g) == 1]
            if rank(QMat.from_rows(tight, cols=dim)) == dim:
                vrep_min.append(g)
        vrep = canon_set(vrep_min)
        if ball.hrep is not None:
            # Mutual containment against the declared hrep.
            declared = canon_set(ball.hrep)
            for g in gens:
                if any(abs(phi.dot(g)) > 1 for phi in declared):
                    raise NotANorm("vrep point violates declared hrep")
            hull_check, _ = _enumerate_vertices(declared, dim)
            for v in hull_check:
                if any(abs(phi.dot(v)) > 1 for phi in hrep):
                    raise NotANorm("declared hrep region is larger than the hull")
        return Ball(dim, vrep, hrep)

    functionals = canon_set(ball.hrep)
    vertices, masks = _enumerate_vertices(functionals, dim)
    if not vertices:
        raise NotANorm("empty vertex set")
    signed = []
    for phi in functionals:
        signed.append(phi)
        signed.append(-phi)
    # A constraint is a facet iff its tight vertices have affine rank dim-1.
    hrep_min = []
    for k, phi in enumerate(functionals):
        tight = [v for v, m in zip(vertices, masks) if (m >> (2 * k)) & 1]
        if _affine_rank(tight) == dim - 1:
            hrep_min.append(phi)
    return Ball(dim, canon_set(vertices), canon_set(hrep_min))


def gauge_vrep(ball: Ball, point: QVec) -> Fraction:
    """Gauge of the ball at a point, via LP over the V-representation.

    This is the vrep-side route; `polyban.banach.norm_eval` is the hrep-side
    route.  The two must agree exactly on completed balls.
    """
    if ball.vrep is None:
        raise ValueError("gauge_vrep needs a vrep")
    if point.dim != ball.dim:
        raise DimensionMismatch(f"point dim {point.dim} != ball dim {ball.dim}")
    if ball.dim == 0:
        return Fraction(0)
    signed = ball.signed_vrep()
    n = len(signed)
    rows = []
    for i in range(ball.dim):
        coeffs = QVec.of([g[i] for g in signed])
        rows.append((coeffs, "=", point[i]))
    problem = LpProblem(
        objective=QVec.of([1] * n),
        constraints=tuple(rows),
        sense="min",
        nonneg=(True,) * n,
    )
    status, payload = lp_solve(problem)
    if status != OPTIMAL:
        raise NotANorm("point is outside the span of the ball")
    return payload[0]


def image_ball(ball: Ball, matrix: QMat, dim_cap: int = DIM_CAP) -> Ball:
    """Ball of the pushforward norm: the image polytope A(B).

    Requires A surjective (rows = target dim = rank), otherwise the image is
    degenerate and not the ball of a norm.
    """
    if ball.vrep is None:
        raise ValueError("image_ball needs a vrep")
    if matrix.cols != ball.dim:
        raise DimensionMismatch(f"matrix cols {matrix.cols} != ball dim {ball.dim}")
    _check_cap(matrix.rows, dim_cap)
    if matrix.rows == 0:
        return Ball(0, (), ())
    if rank(matrix) < matrix.rows:
        raise NotANorm("matrix is not surjective; image ball is degenerate")
    images = [matrix.apply(v) for v in ball.signed_vrep()]
    return complete_representations(
        Ball.from_vrep(matrix.rows, images), dim_cap=dim_cap
    )


def symmetric_hull(dim: int, parts: Sequence[Ball], dim_cap: int = DIM_CAP) -> Ball:
    """Hull of the union of the parts' vreps (parts may be degenerate alone).

    The union must span; each part only contributes generators.
    """
    _check_cap(dim, dim_cap)
    gens: list[QVec] = []
    for part in parts:
        if part.dim != dim:
            raise DimensionMismatch(f"part dim {part.dim} != hull dim {dim}")
        if part.vrep is None:
            raise ValueError("symmetric_hull needs vreps")
        gens.extend(part.vrep)
    if dim == 0:
        return Ball(0, (), ())
    return complete_representations(Ball.from_vrep(dim, gens), dim_cap=dim_cap)
