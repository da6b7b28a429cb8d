"""
A small arithmetic expression language for user-defined potentials.

Grammar: identifiers, numeric literals, ``+ - * / **``, unary minus,
parentheses and the functions ``exp``, ``log`` and ``sqrt``.  Expressions
are parsed with :mod:`ast` and only whitelisted nodes are accepted, so
nothing is ever passed to ``eval``.

>>> f = compile_expression("log(1 + exp(t))", ["t"])
>>> round(float(f([0.0])), 6)
0.693147
"""

from __future__ import annotations

import ast
import operator
from typing import Callable, Sequence

from .deriv import exp, log, power, sqrt
from .errors import ConfigError

FUNCTIONS = {"exp": exp, "log": log, "sqrt": sqrt}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _compile(node, names, where) -> Callable:
    if isinstance(node, ast.Expression):
        return _compile(node.body, names, where)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        value = float(node.value)
        return lambda v: value
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ConfigError(f"unknown identifier {node.id!r} (col {node.col_offset + 1})", where)
        idx = names.index(node.id)
        return lambda v: v[idx]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, names, where)
        if isinstance(node.op, ast.USub):
            return lambda v: -inner(v)
        return inner
    if isinstance(node, ast.BinOp):
        left = _compile(node.left, names, where)
        right = _compile(node.right, names, where)
        if isinstance(node.op, ast.Pow):
            if isinstance(node.right, ast.Constant):
                p = float(node.right.value)
                return lambda v: power(left(v), p)
            return lambda v: exp(right(v) * log(left(v)))
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ConfigError(f"operator {type(node.op).__name__} not allowed", where)
        return lambda v: op(left(v), right(v))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            name = getattr(node.func, "id", "?")
            raise ConfigError(f"function {name!r} not allowed; use exp, log or sqrt", where)
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes exactly one argument", where)
        fn = FUNCTIONS[node.func.id]
        arg = _compile(node.args[0], names, where)
        return lambda v: fn(arg(v))
    raise ConfigError(f"unsupported syntax {type(node).__name__}", where)


def compile_expression(text: str, names: Sequence[str], where: str = None) -> Callable:
    """Compile ``text`` into ``f(variables)`` over the identifiers ``names``.

    The result works on floats, arrays and jets, so it can be wrapped in a
    :class:`~infoholonomy.deriv.ScalarField` directly.

    Raises
    ------
    ConfigError
        On a syntax error or any construct outside the grammar.
    """
    names = list(names)
    for reserved in FUNCTIONS:
        if reserved in names:
            raise ConfigError(f"parameter name {reserved!r} is reserved", where)
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"syntax error at col {exc.offset}: {exc.msg}", where) from None
    return _compile(tree, names, where)
