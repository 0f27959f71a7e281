"""Canonical JSON exchange formats.

Rationals travel as "p/q" strings (denominator omitted when 1), balls as
{"dim", "vrep", "hrep"}, spaces as {"dim", "ball"}, linear maps as
{"matrix", "domain", "codomain"} where either space may be a named
reference into a file-level "spaces" table.  Writing is canonical: keys
sorted, two-space indent, one trailing newline, so equal values produce
byte-equal files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .banach import LinMap, Space
from .errors import DimensionMismatch, ParseError
from .exactlin import QMat, QVec, rat, rat_str
from .fraisse import Chain, ChainStage, LogEntry, _verify_stage, pad_map
from .polytope import Ball, complete_representations


def rat_from_json(obj) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise ParseError(f"expected a rational string, got {obj!r}")
    return rat(obj)


def rat_to_json(value: Fraction) -> str:
    return rat_str(value)


def vec_from_json(obj, dim: Optional[int] = None) -> QVec:
    if not isinstance(obj, list):
        raise ParseError(f"expected a vector list, got {obj!r}")
    vec = QVec.of(rat_from_json(v) for v in obj)
    if dim is not None and vec.dim != dim:
        raise DimensionMismatch(f"vector has dim {vec.dim}, expected {dim}")
    return vec


def vec_to_json(vec: QVec) -> list:
    return [rat_to_json(v) for v in vec.entries]


def mat_from_json(obj, rows: int, cols: int) -> QMat:
    if not isinstance(obj, list):
        raise ParseError(f"expected a matrix list, got {obj!r}")
    if len(obj) != rows:
        raise DimensionMismatch(f"matrix has {len(obj)} rows, expected {rows}")
    parsed = [vec_from_json(row, cols).entries for row in obj]
    return QMat.from_rows(parsed, cols=cols)


def mat_to_json(mat: QMat) -> list:
    return [[rat_to_json(v) for v in row] for row in mat.entries]


def ball_from_json(obj) -> Ball:
    if not isinstance(obj, dict) or "dim" not in obj:
        raise ParseError("ball object needs a dim field")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise ParseError(f"ball dim must be a nonnegative integer, got {dim!r}")
    vrep = obj.get("vrep")
    hrep = obj.get("hrep")
    if vrep is None and hrep is None and dim > 0:
        raise ParseError("ball needs a vrep or an hrep")
    parse_side = lambda side: tuple(vec_from_json(v, dim) for v in side)
    return Ball(
        dim,
        parse_side(vrep) if vrep is not None else None,
        parse_side(hrep) if hrep is not None else None,
    )


def ball_to_json(ball: Ball) -> dict:
    doc = {"dim": ball.dim}
    if ball.vrep is not None:
        doc["vrep"] = [vec_to_json(v) for v in ball.vrep]
    if ball.hrep is not None:
        doc["hrep"] = [vec_to_json(v) for v in ball.hrep]
    return doc


def space_from_json(obj) -> Space:
    if not isinstance(obj, dict) or "ball" not in obj or "dim" not in obj:
        raise ParseError("space object needs dim and ball fields")
    ball = ball_from_json(obj["ball"])
    if ball.dim != obj["dim"]:
        raise DimensionMismatch("space dim disagrees with its ball")
    return Space(obj["dim"], complete_representations(ball))


def space_to_json(space: Space) -> dict:
    return {"dim": space.dim, "ball": ball_to_json(space.ball)}


def resolve_space(obj, table: dict) -> Space:
    if isinstance(obj, str):
        if obj not in table:
            raise ParseError(f"unknown space reference {obj!r}")
        return table[obj]
    return space_from_json(obj)


def spaces_table_from_json(doc: dict) -> dict:
    table = {}
    raw = doc.get("spaces", {})
    if not isinstance(raw, dict):
        raise ParseError("spaces table must be an object")
    for name, obj in raw.items():
        table[name] = space_from_json(obj)
    return table


def linmap_from_json(obj, table: Optional[dict] = None) -> LinMap:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError("map object needs matrix, domain, codomain fields")
    table = table or {}
    domain = resolve_space(obj["domain"], table)
    codomain = resolve_space(obj["codomain"], table)
    matrix = mat_from_json(obj["matrix"], codomain.dim, domain.dim)
    return LinMap(matrix, domain, codomain)


def linmap_to_json(m: LinMap) -> dict:
    return {
        "matrix": mat_to_json(m.matrix),
        "domain": space_to_json(m.domain),
        "codomain": space_to_json(m.codomain),
    }


def chain_to_json(chain: Chain) -> dict:
    stages = []
    by_stage = {entry.stage: entry for entry in chain.log}
    for idx, stage in enumerate(chain.stages):
        entry = by_stage.get(idx)
        stages.append(
            {
                "U": space_to_json(stage.U),
                "V": space_to_json(stage.V),
                "F": mat_to_json(stage.F.matrix),
                "log": None
                if entry is None
                else {"task": entry.task, "verdict": entry.verdict},
            }
        )
    return {"dim_cap": chain.dim_cap, "seed": chain.seed, "stages": stages}


def chain_from_json(obj, verify: bool = True) -> Chain:
    if not isinstance(obj, dict) or "stages" not in obj:
        raise ParseError("chain object needs a stages list")
    dim_cap = obj.get("dim_cap")
    seed = obj.get("seed")
    for name, value in (("dim_cap", dim_cap), ("seed", seed)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"chain {name} must be an integer")
    raw_stages = obj["stages"]
    if not raw_stages:
        raise ParseError("chain needs at least stage 0")
    stages: list[ChainStage] = []
    log: list[LogEntry] = []
    for idx, record in enumerate(raw_stages):
        U = space_from_json(record["U"])
        V = space_from_json(record["V"])
        F = LinMap(mat_from_json(record["F"], V.dim, U.dim), U, V)
        if idx == 0:
            incl_u, incl_v = LinMap.identity(U), LinMap.identity(V)
        else:
            prev = stages[-1]
            incl_u, incl_v = pad_map(prev.U, U), pad_map(prev.V, V)
        stage = ChainStage(U, V, F, incl_u, incl_v)
        if idx > 0 and verify:
            _verify_stage(stages[-1], stage)
        stages.append(stage)
        entry = record.get("log")
        if idx > 0:
            if not isinstance(entry, dict):
                raise ParseError(f"stage {idx} is missing its log entry")
            log.append(LogEntry(idx, str(entry["task"]), str(entry["verdict"])))
    return Chain(tuple(stages), tuple(log), dim_cap, seed)


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_canonical(doc))


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
