"""Line-oriented text format for presentations.

    gla 1
    p 5
    class 3
    gens
    x 1
    y 1
    rels
    1*[x,y] + 4*[[y,x],x]

Blank lines and ``#`` comments are ignored.  Printing normalizes: generators
sorted by (degree, name), each degree's relations replaced by the reduced
echelon basis of their span, terms in Hall order with coefficients in 0..p-1.
"""
from __future__ import annotations

import hashlib
import re

import numpy as np

from .algebra import InhomogeneousRelation, Presentation, PresentedAlgebra, as_presented, relations_of
from .fplinalg import is_prime, rref
from .freelie import build_free_algebra

FORMAT_VERSION = 1
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class GlaSyntaxError(ValueError):
    def __init__(self, line, col, message):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class _Term:
    def __init__(self, text, lineno, offset):
        self.text = text
        self.pos = 0
        self.lineno = lineno
        self.offset = offset

    def error(self, msg):
        raise GlaSyntaxError(self.lineno, self.offset + self.pos + 1, msg)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self):
        self.skip()
        m = re.compile(r"[+-]?\d+").match(self.text, self.pos)
        if not m:
            self.error("expected an integer coefficient")
        self.pos = m.end()
        return int(m.group())

    def monomial(self, known):
        if self.peek() == "[":
            self.pos += 1
            left = self.monomial(known)
            self.expect(",")
            right = self.monomial(known)
            self.expect("]")
            return (left, right)
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a generator name or '['")
        if m.group() not in known:
            self.error(f"unknown generator {m.group()!r}")
        self.pos = m.end()
        return m.group()


def _parse_relation(text, lineno, offset, free, bare=False):
    t = _Term(text, lineno, offset)
    known = set(free.names)
    total = free.zero()
    sign = 1
    first = True
    while True:
        if not first:
            ch = t.peek()
            if ch == "":
                break
            if ch not in "+-":
                t.error("expected '+' or '-'")
            sign = 1 if ch == "+" else -1
            t.pos += 1
        elif bare and t.peek() in ("+", "-"):
            sign = 1 if t.peek() == "+" else -1
            t.pos += 1
        if bare and not t.peek().isdigit():
            coef = sign
        else:
            coef = t.integer() * sign
            t.expect("*")
        start = t.pos
        word = t.monomial(known)
        val = free.evaluate(word)
        if not val.is_zero() and val.degree is None:
            t.pos = start
            t.error("monomial is not homogeneous")
        total = total + coef * val
        first = False
    return total


def parse_element(m, text):
    """An element of m written as in relation lines; bare monomials get coefficient 1."""
    m = as_presented(m)
    return m.from_free(_parse_relation(text, 1, 0, m.free, bare=True))


def _strip(line):
    return line.split("#", 1)[0].rstrip()


def parse_algebra(text):
    """Parse the text format into a Presentation."""
    lines = text.splitlines()
    header = {}
    where = {}
    section = None
    gens = []
    rel_lines = []
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        offset = len(line) - len(line.lstrip())
        words = line.split()
        if section is None and words[0] in ("gla", "p", "class"):
            if len(words) != 2 or not re.fullmatch(r"\d+", words[1]):
                raise GlaSyntaxError(lineno, offset + 1, f"malformed {words[0]!r} line")
            if words[0] in header:
                raise GlaSyntaxError(lineno, offset + 1, f"duplicate {words[0]!r} line")
            header[words[0]] = int(words[1])
            where[words[0]] = (lineno, offset + 1)
            continue
        if words == ["gens"] and section is None:
            section = "gens"
            continue
        if words == ["rels"] and section == "gens":
            section = "rels"
            continue
        if section == "gens":
            if len(words) != 2 or not _NAME.fullmatch(words[0]) or not re.fullmatch(r"\d+", words[1]):
                raise GlaSyntaxError(lineno, offset + 1, "expected '<name> <degree>'")
            gens.append((words[0], int(words[1]), lineno, offset))
            continue
        if section == "rels":
            rel_lines.append((line, lineno))
            continue
        raise GlaSyntaxError(lineno, offset + 1, f"unexpected {words[0]!r}")
    if "gla" in header and header["gla"] != FORMAT_VERSION:
        raise GlaSyntaxError(*where["gla"], f"unsupported format version {header['gla']}")
    for key in ("gla", "p", "class"):
        if key not in header:
            raise GlaSyntaxError(len(lines) + 1, 1, f"missing {key!r} line")
    p, c = header["p"], header["class"]
    if not is_prime(p):
        raise GlaSyntaxError(*where["p"], f"p = {p} is not prime")
    if c not in (2, 3):
        raise GlaSyntaxError(*where["class"], "class must be 2 or 3")
    if section is None:
        raise GlaSyntaxError(len(lines) + 1, 1, "missing 'gens' section")
    seen = set()
    for name, deg, lineno, offset in gens:
        if name in seen:
            raise GlaSyntaxError(lineno, offset + 1, f"duplicate generator {name!r}")
        if not 1 <= deg <= c:
            raise GlaSyntaxError(lineno, offset + 1, f"degree {deg} outside 1..{c}")
        seen.add(name)
    free = build_free_algebra(p, c, [(n, d) for n, d, _, _ in gens])
    rels = []
    for line, lineno in rel_lines:
        r = _parse_relation(line, lineno, 0, free)
        if r.is_zero():
            continue
        if r.degree is None:
            raise InhomogeneousRelation(f"line {lineno}: relation is not homogeneous")
        rels.append(r)
    return Presentation(free, rels)


def load_algebra(text):
    return PresentedAlgebra(parse_algebra(text))


def normalized_relations(m):
    """Reduced echelon basis of the relation span, degree by degree."""
    m = as_presented(m)
    free = m.free
    out = []
    for d in range(2, m.c + 1):
        rows = [r.part(d) for r in relations_of(m) if r.degree == d]
        if not rows:
            continue
        red, rank = rref(np.array(rows, dtype=np.int64), m.p)
        for row in red[:rank]:
            out.append(free.homogeneous(d, row))
    return out


def print_algebra(m):
    """Normalized text for a presentation, a presented algebra or a free algebra."""
    if isinstance(m, Presentation):
        m = PresentedAlgebra(m)
    m = as_presented(m)
    free = m.free
    out = [f"gla {FORMAT_VERSION}", f"p {m.p}", f"class {m.c}", "gens"]
    for g in free.generators:
        out.append(f"{g.name} {g.degree}")
    out.append("rels")
    for r in normalized_relations(m):
        d = r.degree
        labs = free.labels(d)
        out.append(" + ".join(f"{int(v)}*{labs[k]}" for k, v in enumerate(r.part(d)) if v))
    return "\n".join(out) + "\n"


def fingerprint(m):
    """SHA-256 of the normalized text."""
    return hashlib.sha256(print_algebra(m).encode()).hexdigest()
