"""Plain-text formats for relations, matrix pairs, representations and matrices.

All formats are line oriented, ``#`` starts a comment and an optional
``field Q`` / ``field F <p>`` line picks the scalars (default Q).

relation::

    dim 2
    pair 1,0 1,0        # (output, input)

Kronecker pair (p and q are y x x)::

    dims 3 2            # x_dim y_dim
    p:
    1 0 0
    0 0 1
    q:
    ...

representation (needs a presentation for the arrows)::

    vertex v 2
    arrow x
    0 1
    0 0
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional

import numpy as np

from .exactla import QQ, Field, Subspace, field_from_spec, field_name
from .kronecker import KroneckerModule
from .presentation import StringPresentation
from .relations import LinearRelation
from .strmod import Representation, from_blocks


class FormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _entries(field: Field, token_text: str, lineno) -> List:
    toks = [t for t in re.split(r"[,\s]+", token_text.strip()) if t]
    try:
        return [field.parse(t) for t in toks]
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad entry: {exc}", lineno)


def _field_line(line, lineno) -> Optional[Field]:
    if line.split()[0] != "field":
        return None
    try:
        return field_from_spec(line[len("field"):].strip())
    except ValueError as exc:
        raise FormatError(str(exc), lineno)


def fmt(x) -> str:
    return str(x)


def matrix_rows(m) -> List[List[str]]:
    return [[fmt(x) for x in row] for row in m]


def format_matrix(m, indent="") -> str:
    if m.shape[0] == 0:
        return indent + "(empty)"
    return "\n".join(indent + " ".join(fmt(x) for x in row) for row in m)


# relations -----------------------------------------------------------------


def parse_relation(text: str, field: Field = None) -> LinearRelation:
    field = field or QQ
    n = None
    pairs = []
    for lineno, line in _lines(text):
        f = _field_line(line, lineno)
        if f is not None:
            field = f
            continue
        parts = line.split()
        if parts[0] == "dim":
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError("expected 'dim <n>'", lineno)
            n = int(parts[1])
        elif parts[0] == "pair":
            if n is None:
                raise FormatError("'pair' before 'dim'", lineno)
            if len(parts) != 3 and n:
                raise FormatError("expected 'pair <out> <in>' with comma-separated entries", lineno)
            out = _entries(field, parts[1], lineno) if n else []
            inp = _entries(field, parts[2], lineno) if n else []
            if len(out) != n or len(inp) != n:
                raise FormatError(f"vectors must have {n} entries", lineno)
            pairs.append(out + inp)
        else:
            raise FormatError(f"unknown keyword {parts[0]!r}", lineno)
    if n is None:
        raise FormatError("missing 'dim' line")
    graph = Subspace(field, 2 * n, field.array(pairs, (len(pairs), 2 * n)) if pairs else None)
    return LinearRelation(field, n, n, graph)


def format_relation(C: LinearRelation) -> str:
    n = C.dim
    lines = [f"field {field_name(C.field)}", f"dim {n}"]
    for row in C.graph.basis:
        lines.append("pair " + ",".join(fmt(x) for x in row[:n]) + " "
                     + ",".join(fmt(x) for x in row[n:]))
    return "\n".join(lines) + "\n"


# Kronecker pairs -----------------------------------------------------------


def parse_kronecker(text: str, field: Field = None) -> KroneckerModule:
    field = field or QQ
    dims = None
    rows: Dict[str, list] = {"p": [], "q": []}
    current = None
    for lineno, line in _lines(text):
        f = _field_line(line, lineno)
        if f is not None:
            field = f
            continue
        parts = line.split()
        if parts[0] == "dims":
            if len(parts) != 3 or not all(p.isdigit() for p in parts[1:]):
                raise FormatError("expected 'dims <x_dim> <y_dim>'", lineno)
            dims = (int(parts[1]), int(parts[2]))
        elif parts[0] in ("p:", "q:"):
            current = parts[0][0]
            if len(parts) > 1:
                raise FormatError("matrix rows go on the lines after 'p:' / 'q:'", lineno)
        else:
            if current is None:
                raise FormatError("matrix row before 'p:' or 'q:'", lineno)
            rows[current].append((lineno, _entries(field, line, lineno)))
    if dims is None:
        raise FormatError("missing 'dims' line")
    x, y = dims
    mats = {}
    for name in "pq":
        rs = rows[name]
        if len(rs) != y:
            raise FormatError(f"{name} needs {y} rows, got {len(rs)}")
        for lineno, r in rs:
            if len(r) != x:
                raise FormatError(f"{name} rows need {x} entries", lineno)
        mats[name] = field.array([r for _, r in rs], (y, x))
    return KroneckerModule(field, x, y, mats["p"], mats["q"])


def format_kronecker(M: KroneckerModule) -> str:
    lines = [f"field {field_name(M.field)}", f"dims {M.x_dim} {M.y_dim}", "p:"]
    lines += [" ".join(fmt(v) for v in row) for row in M.p]
    lines.append("q:")
    lines += [" ".join(fmt(v) for v in row) for row in M.q]
    return "\n".join(lines) + "\n"


# representations -----------------------------------------------------------


def parse_representation(text: str, P: StringPresentation) -> Representation:
    f = P.field
    dims: Dict[str, int] = {}
    blocks: Dict[str, list] = {}
    current = None
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "field":
            g = _field_line(line, lineno)
            if g != f:
                raise FormatError("module field differs from the algebra's", lineno)
            continue
        if parts[0] == "vertex":
            if len(parts) != 3 or not parts[2].isdigit():
                raise FormatError("expected 'vertex <name> <dim>'", lineno)
            if parts[1] not in P.vertices:
                raise FormatError(f"unknown vertex {parts[1]!r}", lineno)
            dims[parts[1]] = int(parts[2])
            current = None
        elif parts[0] == "arrow":
            if len(parts) < 2:
                raise FormatError("expected 'arrow <name>'", lineno)
            try:
                P.arrow(parts[1])
            except KeyError:
                raise FormatError(f"unknown arrow {parts[1]!r}", lineno)
            current = parts[1]
            blocks[current] = []
        else:
            if current is None:
                raise FormatError("matrix row outside an 'arrow' block", lineno)
            blocks[current].append(_entries(f, line, lineno))
    mats = {}
    for name, rows in blocks.items():
        a = P.arrow(name)
        h, t = dims.get(a.head, 0), dims.get(a.tail, 0)
        if len(rows) != h or any(len(r) != t for r in rows):
            raise FormatError(f"arrow {name} needs a {h}x{t} matrix")
        mats[name] = f.array(rows, (h, t))
    rep = from_blocks(P, dims, mats)
    return rep


def parse_matrix(text: str, field: Field) -> np.ndarray:
    rows = []
    for lineno, line in _lines(text):
        if line.split()[0] == "field":
            continue
        rows.append(_entries(field, line, lineno))
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise FormatError("expected a rectangular matrix")
    return field.array(rows, (len(rows), len(rows[0])))
