"""Noncommutative *-polynomials with exact rational coefficients.

Words are stored as ``bytes``: generator ``i`` contributes the letter ``2*i``
and its adjoint the letter ``2*i + 1`` (self-adjoint generators only ever use
``2*i``). Byte order is therefore the generator precedence with every starred
letter immediately after its plain letter, and the monomial order is
degree-lexicographic on top of it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

MAX_GENERATORS = 128

ONE_WORD = b""


def deglex_key(w: bytes):
    return (len(w), w)


@dataclass(frozen=True)
class MatrixLayout:
    """Tags generators as the entries of a rows x cols array."""

    rows: int
    cols: int
    prefix: str
    names: tuple[tuple[str, ...], ...]

    @classmethod
    def square(cls, n: int, prefix: str, labels=None) -> "MatrixLayout":
        labels = labels or [str(i + 1) for i in range(n)]
        return cls(n, n, prefix, tuple(tuple(f"{prefix}_{a}_{b}" for b in labels) for a in labels))

    def entries(self):
        for i in range(self.rows):
            for j in range(self.cols):
                yield i, j, self.names[i][j]


class GeneratorSet:
    """Generator names, their involution and an optional matrix layout."""

    def __init__(self, names: Iterable[str], self_adjoint: Iterable[str] = (),
                 layout: MatrixLayout | None = None):
        self.names = tuple(names)
        if len(self.names) > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators are supported")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator name")
        sa = set(self_adjoint)
        unknown = sa - set(self.names)
        if unknown:
            raise ValueError(f"unknown self-adjoint generators {sorted(unknown)}")
        self.self_adjoint = tuple(n in sa for n in self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.layout = layout
        if layout is not None:
            flat = [name for _, _, name in layout.entries()]
            if sorted(flat) != sorted(set(flat)) or not set(flat) <= set(self.names):
                raise ValueError("layout must name distinct declared generators")
            if len(flat) != layout.rows * layout.cols:
                raise ValueError("layout does not cover rows*cols generators")
            self.position = {self.index[name]: (i, j) for i, j, name in layout.entries()}
        else:
            self.position = {}
        table = bytearray(range(256))
        for i, s in enumerate(self.self_adjoint):
            if not s:
                table[2 * i], table[2 * i + 1] = 2 * i + 1, 2 * i
        self.star_table = bytes(table)

    def __repr__(self):
        return f"GeneratorSet({list(self.names)!r})"

    def __eq__(self, other):
        return (isinstance(other, GeneratorSet) and self.names == other.names
                and self.self_adjoint == other.self_adjoint)

    def __hash__(self):
        return hash((self.names, self.self_adjoint))

    # -- letters ----------------------------------------------------------
    def letter(self, name: str, star: bool = False) -> int:
        i = self.index[name]
        return 2 * i + (1 if star and not self.self_adjoint[i] else 0)

    def letters(self) -> list[int]:
        out = []
        for i, s in enumerate(self.self_adjoint):
            out.append(2 * i)
            if not s:
                out.append(2 * i + 1)
        return out

    def letter_name(self, a: int) -> str:
        name = self.names[a >> 1]
        return name + "*" if a & 1 else name

    def star_word(self, w: bytes) -> bytes:
        return w[::-1].translate(self.star_table)

    def gen(self, name: str, star: bool = False) -> "Poly":
        return Poly({bytes([self.letter(name, star)]): 1})

    def format_word(self, w: bytes) -> str:
        return " ".join(self.letter_name(a) for a in w) if w else "1"

    def format(self, p: "Poly") -> str:
        return format_poly(p, self)

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def to_json(self):
        return [{"name": n, "star": n if s else n + "*"} for n, s in zip(self.names, self.self_adjoint)]


class Poly:
    """Finite map word -> nonzero Fraction. Treated as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[bytes, object] | None = None):
        d = {}
        if terms:
            for w, c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    d[bytes(w)] = c
        self.terms = d

    @classmethod
    def _raw(cls, d: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = d
        return p

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw({ONE_WORD: Fraction(1)})

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw({})

    @classmethod
    def word(cls, w, c=1) -> "Poly":
        return cls({bytes(w): c})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE_WORD: c})

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for w, c in other.terms.items():
            v = d.get(w, 0) + c
            if v:
                d[w] = v
            else:
                d.pop(w, None)
        return Poly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero()
        return Poly._raw({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        d: dict[bytes, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = d.get(w, 0) + c1 * c2
                if v:
                    d[w] = v
                else:
                    d.pop(w, None)
        return Poly._raw(d)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def star(self, gens: GeneratorSet) -> "Poly":
        return Poly._raw({gens.star_word(w): c.conjugate() for w, c in self.terms.items()})

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({self.terms!r})"

    def items(self):
        return self.terms.items()

    def words(self):
        return self.terms.keys()

    def coeff(self, w: bytes) -> Fraction:
        return self.terms.get(w, Fraction(0))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def leading_word(self) -> bytes:
        return max(self.terms, key=deglex_key)

    def monic(self) -> "Poly":
        """Scale so the leading coefficient is 1 (canonical form for dedupe)."""
        if not self.terms:
            return self
        return self.scale(1 / self.terms[self.leading_word()])

    def letters(self) -> set[int]:
        return {a for w in self.terms for a in w}


def substitute(p: Poly, images: Mapping[int, Poly]) -> Poly:
    """Replace each letter by a polynomial (images must cover every letter used)."""
    out = Poly.zero()
    for w, c in p.items():
        term = Poly.const(c)
        for a in w:
            term = term * images[a]
        out = out + term
    return out


def star_close(polys: Iterable[Poly], gens: GeneratorSet) -> list[Poly]:
    """Append adjoints; drop zeros and duplicates up to scaling."""
    seen = set()
    out = []
    for p in polys:
        for q in (p, p.star(gens)):
            if not q:
                continue
            key = q.monic()
            if key not in seen:
                seen.add(key)
                out.append(q)
    return out


# ---------------------------------------------------------------------------
# expression grammar
#   expr := term (("+"|"-") term)*
#   term := [rational] factor+
#   factor := gen ["*"] | "1" | "(" expr ")"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)*)"
                    r"|(?P<op>[-+*()]))")


class ExprError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_poly(text: str, gens: GeneratorSet) -> Poly:
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        total = Poly.zero()
        sign = 1
        kind, val, _ = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        total = total + term().scale(sign)
        while True:
            kind, val, _ = peek()
            if kind == "op" and val in "+-":
                take()
                total = total + term().scale(-1 if val == "-" else 1)
            else:
                return total

    def term():
        result = Poly.one()
        nfactors = 0
        while True:
            kind, val, at = peek()
            if kind == "num":
                take()
                result = result.scale(Fraction(val))
                nfactors += 1
            elif kind == "gen":
                take()
                if val not in gens.index:
                    raise ExprError(f"unknown generator {val!r} at position {at}")
                star = False
                if peek()[:2] == ("op", "*"):
                    take()
                    star = True
                result = result * gens.gen(val, star)
                nfactors += 1
            elif kind == "op" and val == "(":
                take()
                inner = expr()
                if peek()[:2] != ("op", ")"):
                    raise ExprError(f"expected ')' at position {peek()[2]}")
                take()
                if peek()[:2] == ("op", "*"):
                    take()
                    inner = inner.star(gens)
                result = result * inner
                nfactors += 1
            else:
                break
        if not nfactors:
            raise ExprError(f"expected a term at position {peek()[2]}")
        return result

    result = expr()
    if pos != len(tokens):
        raise ExprError(f"trailing input at position {peek()[2]}")
    return result


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, gens: GeneratorSet) -> str:
    if not p:
        return "0"
    parts = []
    for w in sorted(p.words(), key=deglex_key, reverse=True):
        c = p.coeff(w)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        word = gens.format_word(w)
        if not w:
            body = _format_coeff(a)
        elif a == 1:
            body = word
        else:
            body = f"{_format_coeff(a)} {word}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
