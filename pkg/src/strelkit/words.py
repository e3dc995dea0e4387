"""Words over a string algebra: validity, inverse, shift, composition,
slicing, periodicity and the total order used by the sigma criterion.

Infinite words are eventually periodic and stored as

    ... L L L | core | R R R ...

where ``start`` is the index of the first core letter.  Letters carry indices
1..n for finite words, 1, 2, ... for N-words, ..., -1, 0 for (-N)-words and
all integers for Z-words (the bar sits between indices 0 and 1).  Positions,
the index set I of the word, are the gaps between letters: position i lies
between letters i and i+1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .presentation import Letter, SignTable, StringPresentation, assign_signs


class WordError(ValueError):
    """Raised for invalid words or undefined word operations."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


Letters = Tuple[Letter, ...]


def _primitive(block: Letters) -> Letters:
    n = len(block)
    for d in range(1, n + 1):
        if n % d == 0 and block[:d] * (n // d) == block:
            return block[:d]
    return block


def _least_rotation(block: Letters) -> Tuple[Letters, int]:
    key = lambda l: (l.arrow, l.inverse)
    best, shift = block, 0
    for k in range(1, len(block)):
        rot = block[k:] + block[:k]
        if [key(l) for l in rot] < [key(l) for l in best]:
            best, shift = rot, k
    return best, shift


def invert_letters(letters: Sequence[Letter]) -> Letters:
    return tuple(l.inv() for l in reversed(letters))


@dataclass(frozen=True)
class Word:
    """Canonical eventually periodic word; build with :func:`make_word`."""

    left: Letters = ()
    core: Letters = ()
    right: Letters = ()
    start: int = 1
    vertex: Optional[str] = None
    sign: int = 0

    # shape ---------------------------------------------------------------

    @property
    def kind(self) -> str:
        if self.vertex is not None:
            return "trivial"
        if self.left and self.right:
            return "Z"
        if self.right:
            return "N"
        if self.left:
            return "-N"
        return "finite"

    @property
    def is_trivial(self):
        return self.vertex is not None

    @property
    def is_finite(self):
        return self.kind in ("trivial", "finite")

    def __len__(self):
        if not self.is_finite:
            raise TypeError("infinite word has no length")
        return len(self.core)

    @property
    def end(self) -> int:
        """Index just past the core."""
        return self.start + len(self.core)

    # letters and positions -------------------------------------------------

    def has_letter(self, i: int) -> bool:
        k = self.kind
        if k == "trivial":
            return False
        if k == "finite":
            return 1 <= i <= len(self.core)
        if k == "N":
            return i >= 1
        if k == "-N":
            return i <= 0
        return True

    def letter(self, i: int) -> Letter:
        if not self.has_letter(i):
            raise IndexError(f"word has no letter at index {i}")
        if i < self.start:
            return self.left[(i - self.start) % len(self.left)]
        if i < self.end:
            return self.core[i - self.start]
        return self.right[(i - self.end) % len(self.right)]

    def letters(self, lo: int, hi: int) -> Letters:
        """Letters with indices lo..hi inclusive."""
        return tuple(self.letter(i) for i in range(lo, hi + 1))

    def has_position(self, i: int) -> bool:
        k = self.kind
        if k == "trivial":
            return i == 0
        if k == "finite":
            return 0 <= i <= len(self.core)
        if k == "N":
            return i >= 0
        if k == "-N":
            return i <= 0
        return True

    def positions(self) -> Optional[range]:
        """All positions for finite words, ``None`` for infinite ones."""
        if self.is_finite:
            return range(0, len(self.core) + 1)
        return None

    def left_block_before(self, i: int) -> Letters:
        """The |L| letters ending at index i-1 (requires i <= start)."""
        q = len(self.left)
        return tuple(self.letter(j) for j in range(i - q, i))

    def right_block_from(self, i: int) -> Letters:
        p = len(self.right)
        return tuple(self.letter(j) for j in range(i, i + p))

    def __str__(self):
        return format_word(self)


def trivial(vertex: str, sign: int) -> Word:
    if sign not in (1, -1):
        raise WordError("trivial word sign must be +1 or -1")
    return Word(vertex=vertex, sign=sign, start=1)


def make_word(core: Sequence[Letter] = (), left: Sequence[Letter] = (),
              right: Sequence[Letter] = (), start: Optional[int] = None) -> Word:
    """Canonical form of the letter sequence ``...left left | core | right right...``.

    ``start`` is the index of ``core[0]``; defaults follow the indexing rules of
    each shape (1 for finite and N-words, ending at 0 for (-N)-words).
    """
    core, left, right = tuple(core), tuple(left), tuple(right)
    if not core and not left and not right:
        raise WordError("empty letter sequence; use trivial() for trivial words")
    left, right = _primitive(left), _primitive(right)
    if start is None:
        start = 1 - len(core) if (left and not right) else 1
    if not left and not right:
        return Word(core=core, start=1)
    if right and not left:
        if start != 1:
            raise WordError("N-words start at index 1")
        while core and core[-1] == right[-1]:
            right = right[-1:] + right[:-1]
            core = core[:-1]
        return Word(core=core, right=right, start=1)
    if left and not right:
        if start + len(core) != 1:
            raise WordError("(-N)-words end at index 0")
        while core and core[0] == left[0]:
            left = left[1:] + left[:1]
            core = core[1:]
            start += 1
        return Word(left=left, core=core, start=start)
    # Z-word
    raw = Word(left=left, core=core, right=right, start=start)
    p = len(right)
    if len(left) == p and all(raw.letter(i) == raw.letter(i + p)
                              for i in range(start - p, raw.end + p)):
        block, _ = _least_rotation(right)
        for s in range(1, p + 1):
            if raw.letters(s, s + p - 1) == block:
                return Word(left=block, right=block, start=s)
    q = len(left)
    budget = len(core) + q * p + q + p + 1
    while budget > 0:
        budget -= 1
        if core:
            if core[-1] != right[-1]:
                break
            core = core[:-1]
        else:
            if left[-1] != right[-1]:
                break
            left = left[-1:] + left[:-1]
            start -= 1
        right = right[-1:] + right[:-1]
    else:  # pragma: no cover - periodic words are caught above
        raise WordError("failed to canonicalise Z-word")
    while core and core[0] == left[0]:
        left = left[1:] + left[:1]
        core = core[1:]
        start += 1
    return Word(left=left, core=core, right=right, start=start)


def finite(*letters: Letter) -> Word:
    return make_word(letters)


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(1\([^)]*\)|\)\^-inf|\)\^inf|\(|\||[A-Za-z_][A-Za-z0-9_]*(?:\^-1|⁻¹|-)?)")


def parse_letter(tok: str) -> Letter:
    for suffix in ("^-1", "⁻¹", "-"):
        if tok.endswith(suffix):
            return Letter(tok[: -len(suffix)], True)
    return Letter(tok)


def parse_word(text: str) -> Word:
    """Parse e.g. ``x y-``, ``1(v,+)``, ``x (x- y)^inf``, ``(x y-)^-inf | (x y-)^inf``."""
    text = text.strip()
    pos, toks = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordError(f"cannot parse word at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if len(toks) == 1 and toks[0].startswith("1("):
        inner = toks[0][2:-1].split(",")
        if len(inner) != 2 or inner[1].strip() not in ("+", "-", "+1", "-1"):
            raise WordError(f"bad trivial word {toks[0]!r}")
        return trivial(inner[0].strip(), 1 if inner[1].strip().startswith("+") else -1)
    left: Letters = ()
    right: Letters = ()
    before: List[Letter] = []
    after: List[Letter] = []
    bar = False
    i = 0
    while i < len(toks):
        t = toks[i]
        if t == "(":
            j = i + 1
            block = []
            while j < len(toks) and toks[j] not in (")^inf", ")^-inf"):
                if toks[j] in ("(", "|") or toks[j].startswith("1("):
                    raise WordError("unexpected token inside repeating block")
                block.append(parse_letter(toks[j]))
                j += 1
            if j == len(toks) or not block:
                raise WordError("unterminated or empty repeating block")
            if toks[j] == ")^-inf":
                if left or before or after or bar:
                    raise WordError("left block must come first")
                left = tuple(block)
            else:
                if right or j != len(toks) - 1:
                    raise WordError("right block must come last")
                right = tuple(block)
            i = j + 1
        elif t == "|":
            if bar:
                raise WordError("more than one bar")
            bar = True
            i += 1
        elif t.startswith("1(") or t in (")^inf", ")^-inf"):
            raise WordError(f"unexpected token {t!r}")
        else:
            (after if bar else before).append(parse_letter(t))
            i += 1
    core = tuple(before) + tuple(after)
    if bar and not (left and right):
        raise WordError("the bar is only used in Z-words")
    if not core and not left and not right:
        raise WordError("empty word")
    start = 1 - len(before) if bar else None
    return make_word(core, left, right, start)


def format_word(w: Word) -> str:
    if w.is_trivial:
        return f"1({w.vertex},{'+' if w.sign > 0 else '-'})"
    k = w.kind
    if k == "finite":
        return " ".join(map(str, w.core))
    if k == "N":
        core = " ".join(map(str, w.core))
        return (core + " " if core else "") + "(" + " ".join(map(str, w.right)) + ")^inf"
    if k == "-N":
        core = " ".join(map(str, w.core))
        return "(" + " ".join(map(str, w.left)) + ")^-inf" + (" " + core if core else "")
    lo, hi = min(w.start, 1), max(w.end - 1, 0)
    left = w.left_block_before(lo)
    right = w.right_block_from(hi + 1)
    parts = ["(" + " ".join(map(str, left)) + ")^-inf"]
    parts += [str(w.letter(i)) for i in range(lo, 1)]
    parts.append("|")
    parts += [str(w.letter(i)) for i in range(1, hi + 1)]
    parts.append("(" + " ".join(map(str, right)) + ")^inf")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# validity


@dataclass(frozen=True)
class WordViolation:
    condition: str
    index: int
    message: str

    def __str__(self):
        return f"condition ({self.condition}) at index {self.index}: {self.message}"


def word_violations(w: Word, P: StringPresentation) -> List[WordViolation]:
    names = {a.name for a in P.arrows}
    if w.is_trivial:
        if w.vertex not in P.vertices:
            return [WordViolation("a", 0, f"unknown vertex {w.vertex!r}")]
        return []
    used = set(w.left) | set(w.core) | set(w.right)
    bad = sorted(l.arrow for l in used if l.arrow not in names)
    if bad:
        return [WordViolation("a", 0, f"unknown arrow {bad[0]!r}")]
    m = max(2, P.max_relation_length())
    lo = w.start - len(w.left) - m if w.left else 1
    hi = w.end + len(w.right) + m if w.right else w.end - 1
    rels = [tuple(Letter(a) for a in r) for r in P.rho]
    rels += [invert_letters(r) for r in rels]
    out = []
    for i in range(lo, hi):
        a, b = w.letter(i), w.letter(i + 1)
        if P.tail(a) != P.head(b):
            out.append(WordViolation("a", i, f"tail of {a} is not the head of {b}"))
        if a.inv() == b:
            out.append(WordViolation("b", i, f"{a} followed by its inverse"))
    for i in range(lo, hi + 1):
        for r in rels:
            if i + len(r) - 1 <= hi and w.letters(i, i + len(r) - 1) == r:
                out.append(WordViolation("c", i, "zero relation " + " ".join(map(str, r))))
    seen, uniq = set(), []
    for v in out:
        # infinite blocks repeat the same violation; report one per residue
        key = (v.condition, v.message)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    return uniq


def is_valid(w: Word, P: StringPresentation) -> bool:
    return not word_violations(w, P)


def check_word(w, P: StringPresentation) -> Word:
    """Validate a word (or its text form) and return it."""
    if isinstance(w, str):
        w = parse_word(w)
    bad = word_violations(w, P)
    if bad:
        raise WordError("; ".join(map(str, bad)), bad)
    return w


# ---------------------------------------------------------------------------
# basic operations


def inverse(w: Word) -> Word:
    if w.is_trivial:
        return trivial(w.vertex, -w.sign)
    c = len(w.core) + 1 if w.kind == "finite" else 1
    start = c - w.start - len(w.core) + 1
    return make_word(invert_letters(w.core), invert_letters(w.right),
                     invert_letters(w.left), start if w.kind == "Z" else None)


def shift(w: Word, n: int) -> Word:
    """C[n]: the letter C_n moves to index 0.  Only Z-words move."""
    if w.kind != "Z":
        return w
    return make_word(w.core, w.left, w.right, w.start - n)


def is_periodic(w: Word) -> Optional[int]:
    if w.kind == "Z" and not w.core and w.left == w.right:
        return len(w.right)
    return None


def vertex_at(w: Word, i: int, P: StringPresentation) -> str:
    if not w.has_position(i):
        raise IndexError(f"position {i} not in the index set")
    if w.is_trivial:
        return w.vertex
    if w.has_letter(i + 1):
        return P.head(w.letter(i + 1))
    return P.tail(w.letter(i))


def head(w: Word, P: StringPresentation) -> str:
    if w.kind not in ("trivial", "finite", "N"):
        raise WordError("head is defined for finite words and N-words")
    return vertex_at(w, 0, P)


def tail(w: Word, P: StringPresentation) -> str:
    if w.kind == "trivial":
        return w.vertex
    if w.kind == "finite":
        return P.tail(w.core[-1])
    if w.kind == "-N":
        return P.tail(w.letter(0))
    raise WordError("tail is defined for finite words and (-N)-words")


def word_sign(w: Word, signs: SignTable) -> int:
    if w.is_trivial:
        return w.sign
    if w.kind not in ("finite", "N"):
        raise WordError("sign is defined for finite words and N-words")
    return signs[w.letter(1)]


def _signs(P, signs):
    return signs if signs is not None else assign_signs(P)


def compose(C: Word, D: Word, P: StringPresentation, signs: SignTable = None) -> Word:
    signs = _signs(P, signs)
    if C.kind in ("N", "Z") or D.kind in ("-N", "Z"):
        raise WordError("composition needs C finite or (-N) and D finite or N")
    if tail(C, P) != head(D, P):
        raise WordError(f"tail {tail(C, P)} of C is not the head {head(D, P)} of D")
    if word_sign(inverse(C), signs) == word_sign(D, signs):
        raise WordError("C^-1 and D have the same sign")
    if C.is_trivial and D.is_trivial:
        return D
    if C.is_trivial:
        return D
    if D.is_trivial:
        return C
    if C.kind == "finite":
        out = make_word(C.core + D.core, (), D.right)
    elif D.kind == "finite":
        out = make_word(C.core + D.core, C.left, ())
    else:
        out = make_word(C.core + D.core, C.left, D.right, C.start)
    bad = word_violations(out, P)
    if bad:
        raise WordError("composite is not a word: " + "; ".join(map(str, bad)), bad)
    return out


def slice_word(C: Word, i: int, P: StringPresentation,
               signs: SignTable = None) -> Tuple[Word, Word]:
    """(C_{<=i}, C_{>i}).  At an end of I the missing side is a trivial word."""
    if not C.has_position(i):
        raise IndexError(f"position {i} not in the index set of {C}")
    if C.is_trivial:
        return C, C
    signs = _signs(P, signs)
    v = vertex_at(C, i, P)
    # left part
    if C.has_letter(i):
        if C.left:
            lo = min(C.start, i + 1)
            le = make_word(C.letters(lo, i), C.left_block_before(lo), ())
        else:
            le = make_word(C.letters(1, i))
    else:
        le = None
    if C.has_letter(i + 1):
        if C.right:
            hi = max(C.end - 1, i)
            ri = make_word(C.letters(i + 1, hi), (), C.right_block_from(hi + 1))
        else:
            last = len(C.core) if C.kind == "finite" else 0
            ri = make_word(C.letters(i + 1, last))
    else:
        ri = None
    if le is None:
        le = trivial(v, word_sign(ri, signs))
    if ri is None:
        ri = trivial(v, -word_sign(inverse(le), signs))
    return le, ri


def side_word(C: Word, i: int, eps: int, P: StringPresentation,
              signs: SignTable = None) -> Word:
    """C(i, eps): whichever of C_{>i} and (C_{<=i})^-1 has sign eps."""
    signs = _signs(P, signs)
    le, ri = slice_word(C, i, P, signs)
    a, b = ri, inverse(le)
    sa, sb = word_sign(a, signs), word_sign(b, signs)
    if sa == sb:
        raise WordError(f"side words at position {i} share the sign {sa:+d}")
    return a if sa == eps else b


# ---------------------------------------------------------------------------
# ordering

LESS, EQUAL, GREATER = -1, 0, 1
_END = None


def _seq_letter(w: Word, k: int):
    return w.letter(k) if w.has_letter(k) else _END


def _rank(x) -> int:
    # direct letter < end of word < inverse letter
    if x is _END:
        return 1
    return 2 if x.inverse else 0


def compare(C: Word, D: Word, P: StringPresentation, signs: SignTable = None) -> int:
    """-1, 0 or 1 as C <, =, > D in the total order on W_{v,eps}."""
    signs = _signs(P, signs)
    for w in (C, D):
        if w.kind not in ("trivial", "finite", "N"):
            raise WordError("compare needs finite words or N-words")
    if head(C, P) != head(D, P) or word_sign(C, signs) != word_sign(D, signs):
        raise WordError("words lie in different sets W_{v,eps}")
    bound = len(C.core) + len(D.core) + math.lcm(len(C.right) or 1, len(D.right) or 1) + 2
    for k in range(1, bound + 1):
        a, b = _seq_letter(C, k), _seq_letter(D, k)
        if a == b:
            if a is _END:
                return EQUAL
            continue
        ra, rb = _rank(a), _rank(b)
        if ra == rb:
            raise WordError(f"words diverge at {k} with letters {a} and {b} of one kind")
        return LESS if ra < rb else GREATER
    return EQUAL


# ---------------------------------------------------------------------------
# enumeration


def finite_words(P: StringPresentation, max_len: int) -> Iterator[Word]:
    """All valid finite words of length <= max_len, trivial words first."""
    for v in P.vertices:
        for s in (1, -1):
            yield trivial(v, s)
    if max_len < 1:
        return
    rels = [tuple(Letter(a) for a in r) for r in P.rho]
    rels += [invert_letters(r) for r in rels]

    def ok_end(seq):
        for r in rels:
            if len(r) <= len(seq) and tuple(seq[-len(r):]) == r:
                return False
        return True

    def grow(seq):
        yield make_word(seq)
        if len(seq) == max_len:
            return
        last = seq[-1]
        for l in P.letters():
            if P.head(l) != P.tail(last) or l == last.inv():
                continue
            nxt = seq + [l]
            if ok_end(nxt):
                yield from grow(nxt)

    for l in P.letters():
        yield from grow([l])


def words_in(P: StringPresentation, v: str, eps: int, max_len: int,
             signs: SignTable = None) -> List[Word]:
    signs = _signs(P, signs)
    return [w for w in finite_words(P, max_len)
            if head(w, P) == v and word_sign(w, signs) == eps]
