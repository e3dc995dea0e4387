"""String-algebra presentations KQ/(rho): parsing, axiom checks, sign tables.

Paths are written left to right with the first-traversed arrow last, so the
path ``x y`` runs along ``y`` and then ``x`` (head of ``y`` = tail of ``x``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from .exactla import QQ, Field, field_from_spec


class PresentationError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str


@dataclass(frozen=True)
class Letter:
    """An arrow or its formal inverse."""

    arrow: str
    inverse: bool = False

    def inv(self) -> "Letter":
        return Letter(self.arrow, not self.inverse)

    def __str__(self):
        return self.arrow + ("-" if self.inverse else "")


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)


@dataclass(frozen=True)
class StringPresentation:
    quiver: Quiver
    rho: Tuple[Tuple[str, ...], ...]
    field: Field = dc_field(default=QQ, compare=False)

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    def arrow(self, name):
        return self.quiver.arrow(name)

    def head(self, letter: Letter) -> str:
        a = self.arrow(letter.arrow)
        return a.tail if letter.inverse else a.head

    def tail(self, letter: Letter) -> str:
        a = self.arrow(letter.arrow)
        return a.head if letter.inverse else a.tail

    def letters(self) -> List[Letter]:
        """Canonical order: all arrows (declaration order), then inverses."""
        return ([Letter(a.name) for a in self.arrows]
                + [Letter(a.name, True) for a in self.arrows])

    def max_relation_length(self) -> int:
        return max((len(r) for r in self.rho), default=0)

    def is_zero_path(self, path) -> bool:
        """Whether ``path`` (first-traversed arrow last) contains a member of rho."""
        path = tuple(path)
        for r in self.rho:
            m = len(r)
            for i in range(len(path) - m + 1):
                if path[i:i + m] == r:
                    return True
        return False

    def is_finite_dimensional(self) -> bool:
        """No arbitrarily long path avoids rho."""
        # in a string algebra every nonzero path extends in at most one way,
        # but stay general: BFS over nonzero paths with a pigeonhole cutoff
        arrows = [a.name for a in self.arrows]
        if not arrows:
            return True
        window = max(self.max_relation_length() - 1, 1)
        bound = len(arrows) ** window + window + 1
        layer = [(a,) for a in arrows]
        for _ in range(bound):
            nxt = []
            for p in layer:
                for a in arrows:
                    if self.arrow(a).tail == self.arrow(p[0]).head:
                        q = (a,) + p
                        if not self.is_zero_path(q):
                            nxt.append(q)
            if not nxt:
                return True
            # only the last ``window`` arrows matter for continuation
            seen = {}
            for q in nxt:
                seen.setdefault(q[:window], q)
            layer = list(seen.values())
        return False


def parse_presentation(text: str) -> StringPresentation:
    vertices: List[str] = []
    arrows: List[Arrow] = []
    rels: List[Tuple[str, ...]] = []
    field = QQ
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "field":
            try:
                field = field_from_spec(" ".join(parts[1:]))
            except ValueError as exc:
                raise PresentationError(str(exc), lineno)
        elif kw == "vertex":
            if len(parts) != 2:
                raise PresentationError("expected 'vertex <name>'", lineno)
            if parts[1] in vertices:
                raise PresentationError(f"duplicate vertex {parts[1]!r}", lineno)
            vertices.append(parts[1])
        elif kw == "arrow":
            rest = " ".join(parts[1:]).replace(":", " : ").replace("->", " -> ").split()
            if len(rest) != 5 or rest[1] != ":" or rest[3] != "->":
                raise PresentationError("expected 'arrow <name> : <tail> -> <head>'", lineno)
            name, tail, head = rest[0], rest[2], rest[4]
            if any(a.name == name for a in arrows):
                raise PresentationError(f"duplicate arrow {name!r}", lineno)
            if name in vertices:
                raise PresentationError(f"arrow name {name!r} clashes with a vertex", lineno)
            for v in (tail, head):
                if v not in vertices:
                    raise PresentationError(f"unknown vertex {v!r}", lineno)
            arrows.append(Arrow(name, tail, head))
        elif kw == "rel":
            path = tuple(parts[1:])
            if len(path) < 2:
                raise PresentationError("relations have length at least 2", lineno)
            names = {a.name: a for a in arrows}
            for a in path:
                if a not in names:
                    raise PresentationError(f"relation names unknown arrow {a!r}", lineno)
            for left, right in zip(path, path[1:]):
                if names[right].head != names[left].tail:
                    raise PresentationError(
                        f"relation path not composable at {left} {right}", lineno)
            if path in rels:
                raise PresentationError(f"duplicate relation {' '.join(path)}", lineno)
            rels.append(path)
        else:
            raise PresentationError(f"unknown keyword {kw!r}", lineno)
    return StringPresentation(Quiver(tuple(vertices), tuple(arrows)), tuple(rels), field)


def format_presentation(p: StringPresentation) -> str:
    from .exactla import field_name
    lines = [f"field {field_name(p.field)}"]
    lines += [f"vertex {v}" for v in p.vertices]
    lines += [f"arrow {a.name} : {a.tail} -> {a.head}" for a in p.arrows]
    lines += ["rel " + " ".join(r) for r in p.rho]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Violation:
    axiom: str
    where: str
    message: str

    def __str__(self):
        return f"({self.axiom}) {self.where}: {self.message}"


def validate_string_algebra(p: StringPresentation) -> List[Violation]:
    """Every violation of axioms (a) and (b); an empty list means string algebra."""
    out = []
    for v in p.vertices:
        heads = [a.name for a in p.arrows if a.head == v]
        tails = [a.name for a in p.arrows if a.tail == v]
        if len(heads) > 2:
            out.append(Violation("a", v, f"head of {len(heads)} arrows: {', '.join(heads)}"))
        if len(tails) > 2:
            out.append(Violation("a", v, f"tail of {len(tails)} arrows: {', '.join(tails)}"))
    length2 = {r for r in p.rho if len(r) == 2}
    for y in p.arrows:
        after = [x.name for x in p.arrows
                 if x.tail == y.head and (x.name, y.name) not in length2]
        before = [z.name for z in p.arrows
                  if z.head == y.tail and (y.name, z.name) not in length2]
        if len(after) > 1:
            paths = ", ".join(f"{x}{y.name}" for x in after)
            out.append(Violation("b", y.name, f"several paths x{y.name} avoid rho: {paths}"))
        if len(before) > 1:
            paths = ", ".join(f"{y.name}{z}" for z in before)
            out.append(Violation("b", y.name, f"several paths {y.name}z avoid rho: {paths}"))
    return out


class SignError(ValueError):
    pass


SignTable = Dict[Letter, int]


def sign_conflicts(p: StringPresentation, a: Letter, b: Letter) -> bool:
    """Whether distinct letters with a common head are forced to differ in sign."""
    length2 = {r for r in p.rho if len(r) == 2}
    for l1, l2 in ((a, b), (b, a)):
        # {x^-1, y} with xy in rho
        if l1.inverse and not l2.inverse and (l1.arrow, l2.arrow) in length2:
            return False
    return True


def assign_signs(p: StringPresentation) -> SignTable:
    """Lexicographically first valid sign table, +1 tried before -1."""
    letters = p.letters()
    table: SignTable = {}
    for v in p.vertices:
        group = [l for l in letters if p.head(l) == v]
        pairs = [(i, j) for i, j in itertools.combinations(range(len(group)), 2)
                 if sign_conflicts(p, group[i], group[j])]
        choice = _colour(len(group), pairs)
        if choice is None:
            raise SignError(f"no sign assignment at vertex {v}")
        for l, s in zip(group, choice):
            table[l] = s
    return table


def _colour(n, differ):
    signs = [0] * n

    def go(k):
        if k == n:
            return True
        for s in (1, -1):
            if all(signs[i] != s for i, j in differ if j == k and i < k):
                signs[k] = s
                if go(k + 1):
                    return True
        signs[k] = 0
        return False

    return list(signs) if go(0) else None


def check_sign_table(p: StringPresentation, table: SignTable) -> List[str]:
    """Independent check of the sign condition; returns violations."""
    errs = []
    letters = p.letters()
    length2 = {r for r in p.rho if len(r) == 2}
    for l in letters:
        if table.get(l) not in (1, -1):
            errs.append(f"letter {l} has no sign")
    for a, b in itertools.combinations(letters, 2):
        if p.head(a) != p.head(b) or table.get(a) != table.get(b):
            continue
        ok = any(x.inverse and not y.inverse and (x.arrow, y.arrow) in length2
                 for x, y in ((a, b), (b, a)))
        if not ok:
            errs.append(f"letters {a} and {b} share head {p.head(a)} and sign {table[a]:+d}")
    return errs
