"""Expression language for differentiable maps R^n -> R^m.

Maps are written in a small infix grammar and evaluated numerically,
with exact first derivatives obtained by forward-mode dual numbers
(a value together with an n-vector of partials).  Evaluation is
vectorised: a batch of points produces a batch of values/Jacobians in
one AST walk.

Grammar (standard precedence, ``^`` binds tightest and is
right-associative)::

    map    := expr (',' expr)*
    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | variable | function '(' args ')' | '(' expr ')'

Variables are ``x1 .. xn``; for n <= 4 the aliases ``x, y, z, w`` are
accepted.  Functions: ``exp, log, sin, cos, sqrt, bump`` (unary),
``abs`` (unary, non-smooth), ``min, max`` (binary, non-smooth).
``bump`` is the standard smooth step (0 for a <= 0, 1 for a >= 1,
strictly increasing in between) used by the explicit constructions.

Non-smooth primitives parse, but a map declared C^1 (the default)
rejects them at construction time rather than failing mid-derivative.
SmoothMap values are immutable and safe to evaluate concurrently.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DslError",
    "ParseError",
    "SmoothnessError",
    "EvaluationError",
    "DomainError",
    "NonDifferentiableError",
    "Expr",
    "Num",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Call",
    "Dual",
    "SmoothMap",
    "parse_expr",
    "parse_map",
    "to_source",
]


class DslError(Exception):
    """Base class for everything raised by the expression layer."""


class ParseError(DslError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class SmoothnessError(DslError):
    """A non-smooth primitive appears in a map declared C^1."""


class EvaluationError(DslError):
    """Numeric failure during evaluation (log of nonpositive, x/0, ...)."""


class DomainError(EvaluationError):
    """Point violates the map's domain predicate."""


class NonDifferentiableError(EvaluationError):
    """Derivative requested at a kink of a non-smooth primitive."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 0-based


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Pow(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    args: tuple[Expr, ...]


_FUNCTION_ARITY = {
    "exp": 1,
    "log": 1,
    "sin": 1,
    "cos": 1,
    "sqrt": 1,
    "abs": 1,
    "bump": 1,
    "min": 2,
    "max": 2,
}
_NONSMOOTH = frozenset({"abs", "min", "max"})
_ALIASES = {"x": 0, "y": 1, "z": 2, "w": 3}


def nonsmooth_calls(e: Expr) -> list[str]:
    """Names of non-smooth primitives appearing anywhere in ``e``."""
    out: list[str] = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Call):
            if node.fn in _NONSMOOTH:
                out.append(node.fn)
            stack.extend(node.args)
        elif isinstance(node, Neg):
            stack.append(node.a)
        elif isinstance(node, (Add, Sub, Mul, Div, Pow)):
            stack.append(node.a)
            stack.append(node.b)
    return out


def variables_used(e: Expr) -> set[int]:
    out: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        elif isinstance(node, Call):
            stack.extend(node.args)
        elif isinstance(node, Neg):
            stack.append(node.a)
        elif isinstance(node, (Add, Sub, Mul, Div, Pow)):
            stack.append(node.a)
            stack.append(node.b)
    return out


# ---------------------------------------------------------------------------
# Tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        text = m.group()
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", line, col)
        if kind != "ws":
            tokens.append(_Token(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str, n: int):
        if n < 1:
            raise ParseError("declared dimension must be >= 1", 1, 1)
        self.tokens = _tokenize(source)
        self.pos = 0
        self.n = n

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            rhs = self.parse_unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.next()
            return Pow(base, self.parse_unary())
        return base

    def parse_atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "ident":
            return self._ident(tok)
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)

    def _ident(self, tok: _Token) -> Expr:
        name = tok.text
        if name in _FUNCTION_ARITY:
            self.expect_op("(")
            args = [self.parse_expr()]
            while self.peek().kind == "op" and self.peek().text == ",":
                self.next()
                args.append(self.parse_expr())
            self.expect_op(")")
            arity = _FUNCTION_ARITY[name]
            if len(args) != arity:
                raise ParseError(
                    f"{name} takes {arity} argument(s), got {len(args)}", tok.line, tok.col
                )
            return Call(name, tuple(args))
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            index = int(m.group(1)) - 1
            if not 0 <= index < self.n:
                raise ParseError(
                    f"variable {name} out of range for dimension {self.n}", tok.line, tok.col
                )
            return Var(index)
        if name in _ALIASES and self.n <= 4:
            index = _ALIASES[name]
            if index >= self.n:
                raise ParseError(
                    f"alias {name!r} needs dimension >= {index + 1}, declared {self.n}",
                    tok.line,
                    tok.col,
                )
            return Var(index)
        raise ParseError(f"unknown identifier {name!r}", tok.line, tok.col)

    def parse_component_list(self) -> list[Expr]:
        comps = [self.parse_expr()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.next()
            comps.append(self.parse_expr())
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
        return comps


def parse_expr(source: str, n: int) -> Expr:
    """Parse a single scalar expression in n variables."""
    parser = _Parser(source, n)
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return node


# ---------------------------------------------------------------------------
# Printing (canonical form; parse(to_source(parse(s))) == parse(s))

_PREC = {Add: 10, Sub: 10, Mul: 20, Div: 20, Neg: 30, Pow: 40, Num: 100, Var: 100, Call: 100}


def to_source(e: Expr) -> str:
    return _print(e, 0)


def _print(e: Expr, parent_prec: int) -> str:
    prec = _PREC[type(e)]
    if isinstance(e, Num):
        s = repr(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Var):
        s = f"x{e.index + 1}"
    elif isinstance(e, Neg):
        s = f"-{_print(e.a, prec)}"
    elif isinstance(e, Add):
        s = f"{_print(e.a, prec)} + {_print(e.b, prec + 1)}"
    elif isinstance(e, Sub):
        s = f"{_print(e.a, prec)} - {_print(e.b, prec + 1)}"
    elif isinstance(e, Mul):
        s = f"{_print(e.a, prec)}*{_print(e.b, prec + 1)}"
    elif isinstance(e, Div):
        s = f"{_print(e.a, prec)}/{_print(e.b, prec + 1)}"
    elif isinstance(e, Pow):
        # right-assoc: a^b^c prints as a^b^c, (a^b)^c keeps parens
        s = f"{_print(e.a, prec + 1)}^{_print(e.b, prec)}"
    elif isinstance(e, Call):
        s = f"{e.fn}({', '.join(_print(a, 0) for a in e.args)})"
    else:  # pragma: no cover
        raise TypeError(type(e))
    return f"({s})" if prec < parent_prec else s


# ---------------------------------------------------------------------------
# Smooth step kernel (shared with the constructions module)


def _bump_value_and_slope(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """phi(a)/(phi(a)+phi(1-a)) with phi(t)=exp(-1/t) for t>0, else 0.

    Returns (value, derivative); both are 0 outside (0, 1) and the value
    is exactly 0/1 on the closed complement, so maps built from it are
    exactly the identity where the step has saturated.
    """
    a = np.asarray(a, dtype=float)
    val = np.empty_like(a)
    slope = np.zeros_like(a)
    lo = a <= 0.0
    hi = a >= 1.0
    mid = ~(lo | hi)
    val[lo] = 0.0
    val[hi] = 1.0
    if np.any(mid):
        t = a[mid]
        p = np.exp(-1.0 / t)
        q = np.exp(-1.0 / (1.0 - t))
        denom = p + q
        val[mid] = p / denom
        dp = p / t**2
        dq = q / (1.0 - t) ** 2
        # d/dt [p/(p+q)] with q = phi(1-t), dq/dt = -phi'(1-t)
        slope[mid] = (dp * q + p * dq) / denom**2
    return val, slope


# ---------------------------------------------------------------------------
# Dual numbers (batched)


class Dual:
    """Batch of dual numbers: values (k,) with partials (k, nvars)."""

    __slots__ = ("val", "eps")

    def __init__(self, val: np.ndarray, eps: np.ndarray):
        self.val = val
        self.eps = eps

    @staticmethod
    def seed(x: np.ndarray) -> list["Dual"]:
        """One Dual per coordinate of a batch of points x (k, n)."""
        k, n = x.shape
        duals = []
        for i in range(n):
            eps = np.zeros((k, n))
            eps[:, i] = 1.0
            duals.append(Dual(x[:, i].copy(), eps))
        return duals

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                self.eps * other.val[:, None] + other.eps * self.val[:, None],
            )
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            _check_nonzero(other.val, "division by zero")
            inv = 1.0 / other.val
            val = self.val * inv
            return Dual(val, (self.eps - other.eps * val[:, None]) * inv[:, None])
        _check_nonzero(np.asarray(other, dtype=float), "division by zero")
        return Dual(self.val / other, self.eps / other)

    def __rtruediv__(self, other):
        _check_nonzero(self.val, "division by zero")
        val = other / self.val
        return Dual(val, -self.eps * (val / self.val)[:, None])


def _check_nonzero(v: np.ndarray, msg: str) -> None:
    if np.any(v == 0.0):
        raise EvaluationError(msg)


def _chain(u: Dual, val: np.ndarray, dval: np.ndarray) -> Dual:
    return Dual(val, u.eps * dval[:, None])


# ---------------------------------------------------------------------------
# Evaluators


def _eval_values(e: Expr, cols: list[np.ndarray]) -> np.ndarray:
    """Evaluate on a batch; cols[i] is the (k,) array of coordinate i."""
    if isinstance(e, Num):
        return np.full_like(cols[0], e.value)
    if isinstance(e, Var):
        return cols[e.index]
    if isinstance(e, Neg):
        return -_eval_values(e.a, cols)
    if isinstance(e, Add):
        return _eval_values(e.a, cols) + _eval_values(e.b, cols)
    if isinstance(e, Sub):
        return _eval_values(e.a, cols) - _eval_values(e.b, cols)
    if isinstance(e, Mul):
        return _eval_values(e.a, cols) * _eval_values(e.b, cols)
    if isinstance(e, Div):
        num = _eval_values(e.a, cols)
        den = _eval_values(e.b, cols)
        _check_nonzero(den, "division by zero")
        return num / den
    if isinstance(e, Pow):
        return _pow_values(_eval_values(e.a, cols), e.b, cols)
    if isinstance(e, Call):
        args = [_eval_values(a, cols) for a in e.args]
        return _call_values(e.fn, args)
    raise TypeError(type(e))  # pragma: no cover


def _pow_values(base: np.ndarray, exponent: Expr, cols) -> np.ndarray:
    if isinstance(exponent, Num) and float(exponent.value).is_integer():
        k = int(exponent.value)
        if k < 0:
            _check_nonzero(base, "zero base with negative exponent")
        return base**k
    if isinstance(exponent, Neg) and isinstance(exponent.a, Num) and exponent.a.value.is_integer():
        k = -int(exponent.a.value)
        _check_nonzero(base, "zero base with negative exponent")
        return base ** float(k)
    exp_val = _eval_values(exponent, cols)
    if np.any(base <= 0.0):
        raise EvaluationError("non-integer power of a nonpositive base")
    return base**exp_val


def _call_values(fn: str, args: list[np.ndarray]) -> np.ndarray:
    a = args[0]
    if fn == "exp":
        return np.exp(a)
    if fn == "log":
        if np.any(a <= 0.0):
            raise EvaluationError("log of a nonpositive value")
        return np.log(a)
    if fn == "sin":
        return np.sin(a)
    if fn == "cos":
        return np.cos(a)
    if fn == "sqrt":
        if np.any(a < 0.0):
            raise EvaluationError("sqrt of a negative value")
        return np.sqrt(a)
    if fn == "bump":
        return _bump_value_and_slope(a)[0]
    if fn == "abs":
        return np.abs(a)
    if fn == "min":
        return np.minimum(a, args[1])
    if fn == "max":
        return np.maximum(a, args[1])
    raise TypeError(fn)  # pragma: no cover


def _eval_dual(e: Expr, duals: list[Dual]) -> Dual:
    if isinstance(e, Num):
        k, n = duals[0].eps.shape
        return Dual(np.full(k, e.value), np.zeros((k, n)))
    if isinstance(e, Var):
        return duals[e.index]
    if isinstance(e, Neg):
        return -_eval_dual(e.a, duals)
    if isinstance(e, Add):
        return _eval_dual(e.a, duals) + _eval_dual(e.b, duals)
    if isinstance(e, Sub):
        return _eval_dual(e.a, duals) - _eval_dual(e.b, duals)
    if isinstance(e, Mul):
        return _eval_dual(e.a, duals) * _eval_dual(e.b, duals)
    if isinstance(e, Div):
        return _eval_dual(e.a, duals) / _eval_dual(e.b, duals)
    if isinstance(e, Pow):
        return _pow_dual(e, duals)
    if isinstance(e, Call):
        return _call_dual(e.fn, [_eval_dual(a, duals) for a in e.args])
    raise TypeError(type(e))  # pragma: no cover


def _pow_dual(e: Pow, duals: list[Dual]) -> Dual:
    base = _eval_dual(e.a, duals)
    exponent = e.b
    k_int = None
    if isinstance(exponent, Num) and float(exponent.value).is_integer():
        k_int = int(exponent.value)
    elif (
        isinstance(exponent, Neg)
        and isinstance(exponent.a, Num)
        and exponent.a.value.is_integer()
    ):
        k_int = -int(exponent.a.value)
    if k_int is not None:
        if k_int == 0:
            return Dual(np.ones_like(base.val), np.zeros_like(base.eps))
        if k_int < 0:
            _check_nonzero(base.val, "zero base with negative exponent")
        return _chain(base, base.val ** float(k_int), k_int * base.val ** float(k_int - 1))
    expo = _eval_dual(exponent, duals)
    if np.any(base.val <= 0.0):
        raise EvaluationError("non-integer power of a nonpositive base")
    val = base.val**expo.val
    logb = np.log(base.val)
    eps = val[:, None] * (
        expo.eps * logb[:, None] + base.eps * (expo.val / base.val)[:, None]
    )
    return Dual(val, eps)


def _call_dual(fn: str, args: list[Dual]) -> Dual:
    u = args[0]
    if fn == "exp":
        v = np.exp(u.val)
        return _chain(u, v, v)
    if fn == "log":
        if np.any(u.val <= 0.0):
            raise EvaluationError("log of a nonpositive value")
        return _chain(u, np.log(u.val), 1.0 / u.val)
    if fn == "sin":
        return _chain(u, np.sin(u.val), np.cos(u.val))
    if fn == "cos":
        return _chain(u, np.cos(u.val), -np.sin(u.val))
    if fn == "sqrt":
        if np.any(u.val < 0.0):
            raise EvaluationError("sqrt of a negative value")
        if np.any(u.val == 0.0):
            raise NonDifferentiableError("sqrt derivative at 0")
        v = np.sqrt(u.val)
        return _chain(u, v, 0.5 / v)
    if fn == "bump":
        val, slope = _bump_value_and_slope(u.val)
        return _chain(u, val, slope)
    if fn == "abs":
        if np.any(u.val == 0.0):
            raise NonDifferentiableError("abs at its kink")
        return _chain(u, np.abs(u.val), np.sign(u.val))
    if fn in ("min", "max"):
        v = args[1]
        if np.any(u.val == v.val):
            raise NonDifferentiableError(f"{fn} at a tie")
        if fn == "min":
            pick = u.val < v.val
        else:
            pick = u.val > v.val
        val = np.where(pick, u.val, v.val)
        eps = np.where(pick[:, None], u.eps, v.eps)
        return Dual(val, eps)
    raise TypeError(fn)  # pragma: no cover


# ---------------------------------------------------------------------------
# SmoothMap


@dataclass(frozen=True)
class SmoothMap:
    """A map R^n -> R^m given by one expression per output component.

    ``domain`` is a conjunction of strict inequalities ``expr > 0`` on the
    input; evaluating outside it raises :class:`DomainError` unless the
    caller opts out with ``check_domain=False``.
    """

    n: int
    components: tuple[Expr, ...]
    domain: tuple[Expr, ...] = ()
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("input dimension must be >= 1")
        if not self.components:
            raise ValueError("a map needs at least one component")
        for comp in self.components + self.domain:
            bad = [i for i in variables_used(comp) if i >= self.n]
            if bad:
                raise ValueError(f"component references x{bad[0] + 1} beyond dimension {self.n}")

    @property
    def m(self) -> int:
        return len(self.components)

    def require_smooth(self) -> "SmoothMap":
        """Reject non-smooth primitives in the components (not the domain)."""
        for comp in self.components:
            bad = nonsmooth_calls(comp)
            if bad:
                raise SmoothnessError(
                    f"non-smooth primitive {bad[0]!r} in a map declared C^1"
                )
        return self

    # -- evaluation ---------------------------------------------------------

    def _batch(self, x) -> tuple[np.ndarray, bool]:
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != self.n:
            raise ValueError(f"expected points of dimension {self.n}, got shape {arr.shape}")
        return arr, single

    def in_domain(self, x) -> np.ndarray | bool:
        arr, single = self._batch(x)
        ok = np.ones(arr.shape[0], dtype=bool)
        cols = [arr[:, i] for i in range(self.n)]
        for pred in self.domain:
            ok &= _eval_values(pred, cols) > 0.0
        return bool(ok[0]) if single else ok

    def _check_domain(self, arr: np.ndarray) -> None:
        if not self.domain:
            return
        cols = [arr[:, i] for i in range(self.n)]
        for pred in self.domain:
            vals = _eval_values(pred, cols)
            if np.any(vals <= 0.0):
                i = int(np.argmax(vals <= 0.0))
                raise DomainError(
                    f"point {arr[i].tolist()} violates domain predicate {to_source(pred)} > 0"
                )

    def __call__(self, x, check_domain: bool = True) -> np.ndarray:
        arr, single = self._batch(x)
        if check_domain:
            self._check_domain(arr)
        cols = [arr[:, i] for i in range(self.n)]
        out = np.stack([_eval_values(c, cols) for c in self.components], axis=1)
        if not np.all(np.isfinite(out)):
            raise EvaluationError("non-finite value in evaluation")
        return out[0] if single else out

    def jacobian(self, x, check_domain: bool = True) -> np.ndarray:
        return self.value_and_jacobian(x, check_domain=check_domain)[1]

    def value_and_jacobian(self, x, check_domain: bool = True):
        arr, single = self._batch(x)
        if check_domain:
            self._check_domain(arr)
        duals = Dual.seed(arr)
        vals = np.empty((arr.shape[0], self.m))
        jac = np.empty((arr.shape[0], self.m, self.n))
        for j, comp in enumerate(self.components):
            d = _eval_dual(comp, duals)
            vals[:, j] = d.val
            jac[:, j, :] = d.eps
        if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(jac))):
            raise EvaluationError("non-finite value in evaluation")
        if single:
            return vals[0], jac[0]
        return vals, jac

    # -- text form ----------------------------------------------------------

    def to_source(self) -> str:
        return ", ".join(to_source(c) for c in self.components)


def parse_map(
    source: str,
    n: int,
    domain: tuple[str, ...] | list[str] = (),
    smooth: bool = True,
) -> SmoothMap:
    """Parse comma-separated components into a SmoothMap.

    ``domain`` entries are expressions interpreted as strict inequalities
    ``expr > 0``.  With ``smooth=True`` (the default) the components must
    avoid abs/min/max.
    """
    comps = tuple(_Parser(source, n).parse_component_list())
    preds = tuple(parse_expr(d, n) for d in domain)
    smap = SmoothMap(n=n, components=comps, domain=preds, source=source)
    if smooth:
        smap.require_smooth()
    return smap
