"""Term parser for the two-sorted algebra language used by configs and the CLI.

Grammar (precedence from loose to tight, `^` right associative):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := INTEGER | 'sqrt' '(' expr ')' | IDENT
            | '(' expr ')' | '[' expr ',' expr ']'

Identifiers are `x1, x2, ...` for Lie generators and `v1, v2, ...` for module
generators.  Evaluation tracks sorts: Lie-sorted values stay in the free Lie
algebra as long as only brackets and linear operations occur, `*` moves them
into the associative envelope, and a sort-1 value times a module value is the
action.  Addition across sorts and brackets involving module values are
rejected with the offending position.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldDescriptor, Scalar
from .freealg import NCPoly
from .freelie import LieElement, commutator
from .representation import FreeRep, ModuleElement

Value = Scalar | NCPoly | LieElement | ModuleElement


class TermSyntaxError(ValueError):
    """Malformed input; carries the 1-based line and column of the problem."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class UnknownGenerator(TermSyntaxError):
    """An identifier outside the declared generator ranges."""


class SortError(TermSyntaxError):
    """An operation applied across incompatible sorts."""


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"_Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


_PUNCT = set("+-*/^()[],")


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(_Token("int", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("name", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c in _PUNCT:
            tokens.append(_Token(c, c, line, start_col))
            i += 1
            col += 1
            continue
        raise TermSyntaxError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


def _kind_name(v: Value) -> str:
    if isinstance(v, Scalar):
        return "scalar"
    if isinstance(v, LieElement):
        return "Lie element"
    if isinstance(v, NCPoly):
        return "associative polynomial"
    return "module element"


class TermParser:
    """Parses and evaluates terms over a fixed field and generator ranges.

    Bound to a representation, module generators are available and sort-1
    values act on them; n1 limits the Lie generator indices.  Unbound
    (rep=None), any xN is accepted, which is how variety identities are read
    before a representation exists, and vN is rejected.
    """

    def __init__(self, field: FieldDescriptor, rep: FreeRep | None = None):
        self.field = field
        self.rep = rep
        if rep is not None and rep.field != field:
            raise ValueError("parser field differs from representation field")

    def parse(self, src: str) -> Value:
        tokens = _tokenize(src)
        self._tokens = tokens
        self._pos = 0
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise TermSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.col)
        return value

    def parse_scalar(self, src: str) -> Scalar:
        value = self.parse(src)
        if not isinstance(value, Scalar):
            raise SortError(f"expected a scalar, got a {_kind_name(value)}", 1, 1)
        return value

    # token stream -------------------------------------------------------

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _next(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect(self, kind: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            what = tok.text or "end of input"
            raise TermSyntaxError(f"expected {kind!r}, got {what!r}",
                                  tok.line, tok.col)
        return tok

    # grammar ------------------------------------------------------------

    def _expr(self) -> Value:
        value = self._term()
        while self._peek().kind in ("+", "-"):
            op = self._next()
            rhs = self._term()
            value = self._add(value, rhs if op.kind == "+" else self._negate(rhs), op)
        return value

    def _term(self) -> Value:
        value = self._unary()
        while self._peek().kind in ("*", "/"):
            op = self._next()
            rhs = self._unary()
            if op.kind == "*":
                value = self._mul(value, rhs, op)
            else:
                if not isinstance(rhs, Scalar) or rhs.is_zero:
                    raise SortError("division needs a nonzero scalar divisor",
                                    op.line, op.col)
                value = self._mul(value, rhs.inverse(), op)
        return value

    def _unary(self) -> Value:
        tok = self._peek()
        if tok.kind == "-":
            self._next()
            return self._negate(self._unary())
        return self._power()

    def _power(self) -> Value:
        base = self._atom()
        tok = self._peek()
        if tok.kind != "^":
            return base
        self._next()
        exponent = self._unary()
        if not isinstance(exponent, Scalar) or exponent.q != 0 or \
                exponent.p.denominator != 1 or exponent.p < 0:
            raise TermSyntaxError("exponent must be a nonnegative integer",
                                  tok.line, tok.col)
        k = int(exponent.p)
        if isinstance(base, Scalar):
            return base ** k
        if isinstance(base, ModuleElement):
            raise SortError("module elements cannot be raised to a power",
                            tok.line, tok.col)
        poly = self._as_poly(base, tok)
        out = NCPoly.unit(self.field)
        for _ in range(k):
            out = out * poly
        return out

    def _atom(self) -> Value:
        tok = self._next()
        if tok.kind == "int":
            return self.field.scalar(Fraction(int(tok.text)))
        if tok.kind == "(":
            value = self._expr()
            self._expect(")")
            return value
        if tok.kind == "[":
            left = self._expr()
            self._expect(",")
            right = self._expr()
            self._expect("]")
            return self._bracket(left, right, tok)
        if tok.kind == "name":
            if tok.text == "sqrt":
                self._expect("(")
                inner = self._expr()
                self._expect(")")
                return self._sqrt(inner, tok)
            return self._generator(tok)
        what = tok.text or "end of input"
        raise TermSyntaxError(f"unexpected {what!r}", tok.line, tok.col)

    # evaluation ---------------------------------------------------------

    def _generator(self, tok: _Token) -> Value:
        head, tail = tok.text[0], tok.text[1:]
        if head not in ("x", "v") or not tail.isdigit() or int(tail) < 1:
            raise UnknownGenerator(f"unknown identifier {tok.text!r}",
                                   tok.line, tok.col)
        index = int(tail) - 1
        if head == "x":
            if self.rep is not None and index >= self.rep.n1:
                raise UnknownGenerator(
                    f"{tok.text!r} exceeds the {self.rep.n1} Lie generator(s)",
                    tok.line, tok.col)
            return LieElement.generator(index, self.field)
        if self.rep is None:
            raise UnknownGenerator(
                "module generators need a representation context",
                tok.line, tok.col)
        if index >= self.rep.n2:
            raise UnknownGenerator(
                f"{tok.text!r} exceeds the {self.rep.n2} module generator(s)",
                tok.line, tok.col)
        return self.rep.module_generator(index)

    def _sqrt(self, inner: Value, tok: _Token) -> Scalar:
        if not isinstance(inner, Scalar) or inner.q != 0 or \
                inner.p.denominator != 1 or inner.p < 0:
            raise TermSyntaxError("sqrt needs a nonnegative integer argument",
                                  tok.line, tok.col)
        n = int(inner.p)
        root = _integer_sqrt(n)
        if root is not None:
            return self.field.scalar(root)
        # squarefree part must match the field's radicand
        square, free = _square_split(n)
        if self.field.d is not None and free == self.field.d:
            return self.field.scalar(0, square)
        raise TermSyntaxError(
            f"sqrt({n}) does not lie in {self.field}", tok.line, tok.col)

    def _negate(self, v: Value) -> Value:
        if isinstance(v, Scalar):
            return -v
        if isinstance(v, (NCPoly, LieElement)):
            return -v
        return v.scale(-self.field.one())

    def _as_poly(self, v: Value, tok: _Token) -> NCPoly:
        if isinstance(v, NCPoly):
            return v
        if isinstance(v, LieElement):
            return v.poly
        if isinstance(v, Scalar):
            return NCPoly.unit(self.field).scale(v)
        raise SortError("module element where a sort-1 value is needed",
                        tok.line, tok.col)

    def _add(self, a: Value, b: Value, tok: _Token) -> Value:
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a + b
        if isinstance(a, LieElement) and isinstance(b, LieElement):
            return a + b
        if isinstance(a, ModuleElement) or isinstance(b, ModuleElement):
            if isinstance(a, ModuleElement) and isinstance(b, ModuleElement):
                return a + b
            raise SortError(
                f"cannot add a {_kind_name(a)} and a {_kind_name(b)}",
                tok.line, tok.col)
        if isinstance(a, Scalar) or isinstance(b, Scalar):
            # the Lie sort has no unit, so scalars only shift the envelope
            if isinstance(a, LieElement) or isinstance(b, LieElement):
                raise SortError(
                    f"cannot add a {_kind_name(a)} and a {_kind_name(b)}",
                    tok.line, tok.col)
        return self._as_poly(a, tok) + self._as_poly(b, tok)

    def _mul(self, a: Value, b: Value, tok: _Token) -> Value:
        if isinstance(a, Scalar):
            if isinstance(b, Scalar):
                return a * b
            return b.scale(a)
        if isinstance(b, Scalar):
            return self._mul(b, a, tok)
        if isinstance(a, ModuleElement):
            raise SortError("module elements act from nowhere: put the "
                            "sort-1 factor on the left", tok.line, tok.col)
        if isinstance(b, ModuleElement):
            if self.rep is None:
                raise SortError("action needs a representation context",
                                tok.line, tok.col)
            return self.rep.act_from_poly(self._as_poly(a, tok), b)
        return self._as_poly(a, tok) * self._as_poly(b, tok)

    def _bracket(self, a: Value, b: Value, tok: _Token) -> Value:
        if isinstance(a, (Scalar, ModuleElement)) or \
                isinstance(b, (Scalar, ModuleElement)):
            raise SortError(
                f"bracket needs sort-1 arguments, got a {_kind_name(a)} "
                f"and a {_kind_name(b)}", tok.line, tok.col)
        if isinstance(a, LieElement) and isinstance(b, LieElement):
            cap = self.rep.cap if self.rep is not None else None
            return a.bracket(b, cap)
        return commutator(self._as_poly(a, tok), self._as_poly(b, tok))


def parse_term(src: str, field: FieldDescriptor,
               rep: FreeRep | None = None) -> Value:
    """One-shot parse; see TermParser for the binding rules."""
    return TermParser(field, rep).parse(src)


def parse_scalar(src: str, field: FieldDescriptor) -> Scalar:
    return TermParser(field).parse_scalar(src)


def _integer_sqrt(n: int) -> int | None:
    r = int(n ** 0.5)
    for candidate in (r - 1, r, r + 1):
        if candidate >= 0 and candidate * candidate == n:
            return candidate
    return None


def _square_split(n: int) -> tuple[int, int]:
    """n = square * free with free squarefree; returns (sqrt(square), free)."""
    square, free = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            square *= p
            n //= p * p
        if n % p == 0:
            free *= p
            n //= p
        p += 1
    return square, free * n
