"""Profile expression language: parsing, evaluation, symbolic derivatives.

Grammar (standard precedence, ``^`` right-associative and binding tighter
than unary minus)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

The only free variable is ``x``; the function set is {sqrt, sin, cos, tan,
exp, log, abs}.  ``abs`` is evaluable but rejected by :func:`differentiate`.

The parser folds constant subtrees whose operands are all literals; the
differentiator additionally drops algebraic identities (``0*u``, ``u^1``,
...) so derivative trees stay auditable.  No other simplification is done.
"""

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ExpressionSyntaxError, NonDifferentiable, UnknownIdentifier

FUNCTIONS = ("sqrt", "sin", "cos", "tan", "exp", "log", "abs")

# Named constants as double-double pairs (head, tail).  The tails matter only
# inside the high-accuracy kernel path; plain evaluation uses the head.
CONSTANTS = {
    "pi": (math.pi, 1.2246467991473532e-16),
    "e": (math.e, 1.4456468917292502e-16),
}

# sqrt arguments in [-SQRT_SLACK, 0) are treated as rounded zeros.
SQRT_SLACK = 1e-12


# --- AST nodes ----------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: object

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} {self.SYMBOL} {self.right})"


class Add(BinOp):
    SYMBOL = "+"


class Sub(BinOp):
    SYMBOL = "-"


class Mul(BinOp):
    SYMBOL = "*"


class Div(BinOp):
    SYMBOL = "/"


class Pow(BinOp):
    SYMBOL = "^"


@dataclass(frozen=True)
class Call:
    func: str
    arg: object

    def __str__(self):
        return f"{self.func}({self.arg})"


@dataclass(frozen=True)
class ProfileExpr:
    """A parsed expression with its original source text."""

    root: object
    source_text: str

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return serialize(self)


# --- tokenizer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(
                f"unexpected character {source[pos]!r}", pos,
                expected=frozenset({"number", "identifier", "operator"}))
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


# --- parser --------------------------------------------------------------------

_ATOM_EXPECTED = frozenset({"number", "'x'", "'pi'", "'e'", "function name", "'('"})


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def cur(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, text, pos = self.cur
        what = repr(text) if text else "end of input"
        raise ExpressionSyntaxError(f"unexpected {what}", pos, expected=expected)

    def expect_op(self, op):
        kind, text, pos = self.cur
        if kind != "op" or text != op:
            self.fail(frozenset({f"'{op}'"}))
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.cur[0] != "eof":
            self.fail(frozenset({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"}))
        return node

    def expr(self):
        node = self.term()
        while self.cur[0] == "op" and self.cur[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            node = _fold(Add(node, rhs) if op == "+" else Sub(node, rhs))
        return node

    def term(self):
        node = self.factor()
        while self.cur[0] == "op" and self.cur[1] in "*/":
            op = self.advance()[1]
            rhs = self.factor()
            node = _fold(Mul(node, rhs) if op == "*" else Div(node, rhs))
        return node

    def factor(self):
        if self.cur[0] == "op" and self.cur[1] == "-":
            self.advance()
            return _fold(Neg(self.factor()))
        return self.power()

    def power(self):
        base = self.atom()
        if self.cur[0] == "op" and self.cur[1] == "^":
            self.advance()
            # right operand is a factor, so '^' is right-associative and the
            # exponent may carry a unary minus: x^-2 parses as x^(-2)
            return _fold(Pow(base, self.factor()))
        return base

    def atom(self):
        kind, text, pos = self.cur
        if kind == "number":
            self.advance()
            return Num(float(text))
        if kind == "ident":
            self.advance()
            if text == "x":
                return Var()
            if text in CONSTANTS:
                return Const(text)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return _fold(Call(text, arg))
            raise UnknownIdentifier(text, pos)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail(_ATOM_EXPECTED)


def parse(source: str) -> ProfileExpr:
    """Parse expression text into a :class:`ProfileExpr`."""
    if not isinstance(source, str) or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0, expected=_ATOM_EXPECTED)
    return ProfileExpr(_Parser(source).parse(), source)


def _fold(node):
    """Fold a node whose operands are all numeric literals.

    Folding is skipped when the literal evaluation would raise (for example
    ``sqrt(-2.0)``); the error then surfaces at evaluation time instead of
    at parse time.
    """
    if isinstance(node, Neg) and isinstance(node.arg, Num):
        return Num(-node.arg.value)
    try:
        if isinstance(node, BinOp) and isinstance(node.left, Num) and isinstance(node.right, Num):
            return Num(_eval_node(node, 0.0))
        if isinstance(node, Call) and isinstance(node.arg, Num):
            return Num(_eval_node(node, 0.0))
    except DomainError:
        pass
    return node


# --- serialization ---------------------------------------------------------------

def serialize(expr) -> str:
    """Fully parenthesized infix form; reparsing reproduces the same AST."""
    root = expr.root if isinstance(expr, ProfileExpr) else expr
    return str(root)


# --- evaluation -------------------------------------------------------------------

def _pow_number(base, exponent, node):
    """Shared power rule: small integral exponents use binary powering (so
    the kernels can reproduce results bit-for-bit), everything else libm pow."""
    if exponent == int(exponent) and abs(exponent) <= 64.0:
        n = int(exponent)
        if n < 0:
            if base == 0.0:
                raise DomainError(f"zero raised to negative power in {node}", node, base)
            n = -n
            invert = True
        else:
            invert = False
        r = 1.0
        a = base
        while n:
            if n & 1:
                r = r * a
            n >>= 1
            if n:
                a = a * a
        if invert:
            return math.inf if r == 0.0 else 1.0 / r
        return r
    if base < 0.0:
        raise DomainError(
            f"negative base with non-integer exponent in {node}", node, base)
    if base == 0.0 and exponent < 0.0:
        raise DomainError(f"zero raised to negative power in {node}", node, base)
    try:
        return math.pow(base, exponent)
    except OverflowError:
        return math.inf


def _eval_node(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name][0]
    if isinstance(node, Neg):
        return -_eval_node(node.arg, x)
    if isinstance(node, Call):
        a = _eval_node(node.arg, x)
        if node.func == "sqrt":
            if a < 0.0:
                if a < -SQRT_SLACK:
                    raise DomainError(f"sqrt of negative value in {node}", node, a)
                return 0.0
            v = math.sqrt(a)
        elif node.func == "log":
            if a <= 0.0:
                raise DomainError(f"log of non-positive value in {node}", node, a)
            v = math.log(a)
        elif node.func == "exp":
            try:
                v = math.exp(a)
            except OverflowError:
                v = math.inf
        elif node.func == "sin":
            v = math.sin(a)
        elif node.func == "cos":
            v = math.cos(a)
        elif node.func == "tan":
            v = math.tan(a)
        else:  # abs
            v = abs(a)
        if not math.isfinite(v):
            raise DomainError(f"non-finite result in {node}", node, a)
        return v
    l = _eval_node(node.left, x)
    r = _eval_node(node.right, x)
    if isinstance(node, Add):
        v = l + r
    elif isinstance(node, Sub):
        v = l - r
    elif isinstance(node, Mul):
        v = l * r
    elif isinstance(node, Div):
        if r == 0.0:
            raise DomainError(f"division by zero in {node}", node, r)
        v = l / r
    else:  # Pow
        v = _pow_number(l, r, node)
    if not math.isfinite(v):
        raise DomainError(f"non-finite result in {node}", node, l)
    return v


def evaluate(expr, x: float) -> float:
    """Evaluate the expression at x; raises DomainError instead of
    producing NaN or infinities."""
    root = expr.root if isinstance(expr, ProfileExpr) else expr
    if not math.isfinite(x):
        raise DomainError("evaluation point must be finite", root, x)
    return _eval_node(root, x)


# --- symbolic differentiation -------------------------------------------------------

def _is_num(node, value=None):
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(l, r):
    if _is_num(l, 0.0):
        return r
    if _is_num(r, 0.0):
        return l
    return _fold(Add(l, r))


def _sub(l, r):
    if _is_num(r, 0.0):
        return l
    if _is_num(l, 0.0):
        return _fold(Neg(r))
    return _fold(Sub(l, r))


def _mul(l, r):
    if _is_num(l, 0.0) or _is_num(r, 0.0):
        return Num(0.0)
    if _is_num(l, 1.0):
        return r
    if _is_num(r, 1.0):
        return l
    return _fold(Mul(l, r))


def _div(l, r):
    if _is_num(l, 0.0):
        return Num(0.0)
    if _is_num(r, 1.0):
        return l
    return _fold(Div(l, r))


def _pow(l, r):
    if _is_num(r, 1.0):
        return l
    if _is_num(r, 0.0):
        return Num(1.0)
    return _fold(Pow(l, r))


def _diff(node):
    if isinstance(node, (Num, Const)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return _fold(Neg(_diff(node.arg)))
    if isinstance(node, Add):
        return _add(_diff(node.left), _diff(node.right))
    if isinstance(node, Sub):
        return _sub(_diff(node.left), _diff(node.right))
    if isinstance(node, Mul):
        return _add(_mul(_diff(node.left), node.right),
                    _mul(node.left, _diff(node.right)))
    if isinstance(node, Div):
        num = _sub(_mul(_diff(node.left), node.right),
                   _mul(node.left, _diff(node.right)))
        return _div(num, _pow(node.right, Num(2.0)))
    if isinstance(node, Pow):
        base, expo = node.left, node.right
        db = _diff(base)
        if isinstance(expo, Num):
            # n * u^(n-1) * u'
            return _mul(_mul(expo, _pow(base, Num(expo.value - 1.0))), db)
        de = _diff(expo)
        if _is_num(db, 0.0):
            # a^v: a^v * ln(a) * v'
            return _mul(node, _mul(Call("log", base), de))
        # u^v * (v' ln u + v u'/u)
        return _mul(node, _add(_mul(de, Call("log", base)),
                               _mul(expo, _div(db, base))))
    if isinstance(node, Call):
        inner = _diff(node.arg)
        u = node.arg
        if node.func == "sqrt":
            return _div(inner, _mul(Num(2.0), Call("sqrt", u)))
        if node.func == "sin":
            return _mul(Call("cos", u), inner)
        if node.func == "cos":
            return _fold(Neg(_mul(Call("sin", u), inner)))
        if node.func == "tan":
            return _mul(_add(Num(1.0), _pow(Call("tan", u), Num(2.0))), inner)
        if node.func == "exp":
            return _mul(Call("exp", u), inner)
        if node.func == "log":
            return _div(inner, u)
        raise NonDifferentiable(f"{node.func} has no symbolic derivative")
    raise NonDifferentiable(f"cannot differentiate {node!r}")


def differentiate(expr) -> ProfileExpr:
    """Symbolic derivative with respect to x, with constant folding."""
    root = expr.root if isinstance(expr, ProfileExpr) else expr
    d = _diff(root)
    return ProfileExpr(d, str(d))


def substitute(expr, replacement):
    """Replace the free variable by another expression node (used to build
    shifted/scaled integrands); returns a raw AST node."""
    root = expr.root if isinstance(expr, ProfileExpr) else expr
    repl = replacement.root if isinstance(replacement, ProfileExpr) else replacement

    def walk(node):
        if isinstance(node, Var):
            return repl
        if isinstance(node, Neg):
            return _fold(Neg(walk(node.arg)))
        if isinstance(node, BinOp):
            return _fold(type(node)(walk(node.left), walk(node.right)))
        if isinstance(node, Call):
            return _fold(Call(node.func, walk(node.arg)))
        return node

    return walk(root)


# --- compilation to evaluation tapes ---------------------------------------------

OP_CONST = 0
OP_X = 1
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POWI = 7
OP_POW = 8
OP_SQRT = 9
OP_SIN = 10
OP_COS = 11
OP_TAN = 12
OP_EXP = 13
OP_LOG = 14
OP_ABS = 15

_FUNC_OPS = {"sqrt": OP_SQRT, "sin": OP_SIN, "cos": OP_COS, "tan": OP_TAN,
             "exp": OP_EXP, "log": OP_LOG, "abs": OP_ABS}

# Error codes shared with the kernels.
ERR_SQRT_NEGATIVE = 1
ERR_LOG_NONPOSITIVE = 2
ERR_DIV_ZERO = 3
ERR_POW_DOMAIN = 4
ERR_NONFINITE = 5

_ERR_MESSAGES = {
    ERR_SQRT_NEGATIVE: "sqrt of negative value",
    ERR_LOG_NONPOSITIVE: "log of non-positive value",
    ERR_DIV_ZERO: "division by zero",
    ERR_POW_DOMAIN: "invalid power operation",
    ERR_NONFINITE: "non-finite result",
}


class CompiledFunction:
    """Postorder tape for the quadrature kernels.

    Attributes ``codes``/``aux``/``nodes_ref`` are parallel int arrays and
    ``consts``/``consts_lo`` hold double-double constants.  ``nodes`` maps a
    tape position back to its AST node for error reporting.
    """

    __slots__ = ("codes", "aux", "nodes_ref", "consts", "consts_lo",
                 "nodes", "max_stack", "expr")

    def __init__(self, expr):
        import array

        root = expr.root if isinstance(expr, ProfileExpr) else expr
        self.expr = expr if isinstance(expr, ProfileExpr) else ProfileExpr(root, str(root))
        codes, aux, refs, consts, consts_lo, nodes = [], [], [], [], [], []

        def push_const(hi, lo):
            consts.append(hi)
            consts_lo.append(lo)
            return len(consts) - 1

        def emit(op, a, node):
            codes.append(op)
            aux.append(a)
            refs.append(len(nodes))
            nodes.append(node)

        def walk(node):
            if isinstance(node, Num):
                emit(OP_CONST, push_const(node.value, 0.0), node)
            elif isinstance(node, Const):
                hi, lo = CONSTANTS[node.name]
                emit(OP_CONST, push_const(hi, lo), node)
            elif isinstance(node, Var):
                emit(OP_X, 0, node)
            elif isinstance(node, Neg):
                walk(node.arg)
                emit(OP_NEG, 0, node)
            elif isinstance(node, Pow) and isinstance(node.right, Num) \
                    and node.right.value == int(node.right.value) \
                    and abs(node.right.value) <= 64.0:
                walk(node.left)
                emit(OP_POWI, int(node.right.value), node)
            elif isinstance(node, BinOp):
                walk(node.left)
                walk(node.right)
                op = {Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL,
                      Div: OP_DIV, Pow: OP_POW}[type(node)]
                emit(op, 0, node)
            elif isinstance(node, Call):
                walk(node.arg)
                emit(_FUNC_OPS[node.func], 0, node)
            else:
                raise TypeError(f"unsupported node {node!r}")

        walk(root)
        depth = 0
        max_depth = 0
        for op in codes:
            if op in (OP_CONST, OP_X):
                depth += 1
            elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW):
                depth -= 1
            max_depth = max(max_depth, depth)
        self.max_stack = max_depth

        self.codes = array.array("i", codes)
        self.aux = array.array("i", aux)
        self.nodes_ref = array.array("i", refs)
        self.consts = array.array("d", consts)
        self.consts_lo = array.array("d", consts_lo)
        self.nodes = nodes

    def raise_domain_error(self, err_code, node_ref, arg):
        node = self.nodes[node_ref] if 0 <= node_ref < len(self.nodes) else None
        msg = _ERR_MESSAGES.get(err_code, "evaluation error")
        raise DomainError(f"{msg} in {node}", node, arg)

    def __call__(self, x):
        from . import _kernels

        value, err, ref, arg = _kernels.eval_tape(
            self.codes, self.aux, self.nodes_ref, self.consts, self.consts_lo,
            self.max_stack, float(x))
        if err:
            self.raise_domain_error(err, ref, arg)
        return value


def compile_expr(expr) -> CompiledFunction:
    """Compile an expression (or raw AST node) into a kernel tape."""
    return CompiledFunction(expr)
