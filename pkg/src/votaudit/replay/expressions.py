"""Exact evaluation of small arithmetic expressions over named rationals.

The catalog stores weights, move amounts, and inequalities as text like
``"(1 - a - 2*b)/2"`` or ``"n*epsilon <= a - b"``.  Expressions are parsed
with `ast` and evaluated over `Fraction`; only +, -, *, /, parentheses,
integer literals, names, comparisons, `and`, and the functions floor/ceil/abs
are admitted.  Float literals are rejected so nothing silently loses
exactness.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Mapping


class ExpressionError(ValueError):
    """Raised for malformed or non-exact expressions."""


_FUNCTIONS = {
    "floor": lambda v: Fraction(math.floor(v)),
    "ceil": lambda v: Fraction(math.ceil(v)),
    "abs": abs,
}

_COMPARators = {
    ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b,
    ast.Gt: lambda a, b: a > b,
    ast.GtE: lambda a, b: a >= b,
    ast.Eq: lambda a, b: a == b,
    ast.NotEq: lambda a, b: a != b,
}


def _eval(node: ast.AST, env: Mapping[str, Fraction]) -> Fraction:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        raise ExpressionError(f"only integer literals are exact, got {node.value!r}")
    if isinstance(node, ast.Name):
        try:
            return Fraction(env[node.id])
        except KeyError:
            raise ExpressionError(f"unknown name {node.id!r}") from None
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval(node.operand, env)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        left, right = _eval(node.left, env), _eval(node.right, env)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right == 0:
                raise ExpressionError("division by zero")
            return left / right
        raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError("only floor/ceil/abs calls are allowed")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(f"{node.func.id} takes exactly one argument")
        return _FUNCTIONS[node.func.id](_eval(node.args[0], env))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")


def _eval_bool(node: ast.AST, env: Mapping[str, Fraction]) -> bool:
    if isinstance(node, ast.Expression):
        return _eval_bool(node.body, env)
    if isinstance(node, ast.BoolOp) and isinstance(node.op, ast.And):
        return all(_eval_bool(v, env) for v in node.values)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comparator in zip(node.ops, node.comparators):
            right = _eval(comparator, env)
            fn = _COMPARators.get(type(op))
            if fn is None:
                raise ExpressionError(f"comparison {type(op).__name__} not allowed")
            if not fn(left, right):
                return False
            left = right
        return True
    raise ExpressionError("predicate must be a comparison")


def _parse(text: str) -> ast.Expression:
    try:
        return ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc}") from None


def evaluate_expression(text: str, env: Mapping[str, Fraction]) -> Fraction:
    """Evaluate arithmetic text to an exact rational."""
    return _eval(_parse(text), env)


def evaluate_predicate(text: str, env: Mapping[str, Fraction]) -> bool:
    """Evaluate comparison text (chained comparisons and `and` allowed)."""
    return _eval_bool(_parse(text), env)


def expression_names(text: str) -> frozenset[str]:
    """The free names appearing in an expression or predicate."""
    tree = _parse(text)
    return frozenset(
        node.id for node in ast.walk(tree)
        if isinstance(node, ast.Name) and node.id not in _FUNCTIONS
    )
