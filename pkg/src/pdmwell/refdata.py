"""Embedded reference values and a small expression evaluator.

The tables live in ``data/reference_tables.json``.  Closed forms are stored as
Python-syntax strings and evaluated by :func:`evaluate`, which accepts only
arithmetic, numeric literals, a fixed set of functions and named variables.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

__all__ = ["RefDatum", "load_tables", "table_data", "evaluate", "ExpressionError"]

DATA_VERSION = 1


class ExpressionError(ValueError):
    pass


def _sech(u):
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(u)


def _csch(u):
    with np.errstate(over="ignore", divide="ignore"):
        return 1.0 / np.sinh(u)


_FUNCS = {
    "sqrt": np.sqrt, "log": np.log, "exp": np.exp,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "sech": _sech, "csch": _csch,
}
_CONSTS = {"pi": math.pi}
_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow,
}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


@lru_cache(maxsize=256)
def _parse(expr: str):
    try:
        return ast.parse(expr, mode="eval").body
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {expr!r}: {exc}") from None


def evaluate(expr: str, **variables):
    """Evaluate a closed-form string with numpy semantics.

    >>> evaluate("(12 + pi**2)/48")
    0.45561...
    """
    env = {**_CONSTS, **variables}

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ExpressionError(f"unknown name {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and not node.keywords and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ExpressionError(f"disallowed syntax in {expr!r}: {ast.dump(node)[:60]}")

    return ev(_parse(expr))


@dataclass(frozen=True)
class RefDatum:
    """One published cell, optionally annotated as an erratum."""

    table: str
    n: int
    kappa: int
    a: float | None
    quantity: str
    printed: float | str
    erratum: bool = False
    derived: float | str | None = None
    justification: str = ""

    def __post_init__(self):
        if self.table not in ("I", "II", "III"):
            raise ValueError(f"unknown table {self.table!r}")
        if self.erratum and (self.derived is None or not self.justification):
            raise ValueError("erratum entries need a derived value and a justification")

    @staticmethod
    def _value(v):
        return float(evaluate(v)) if isinstance(v, str) else float(v)

    @property
    def printed_value(self) -> float:
        return self._value(self.printed)

    @property
    def reference_value(self) -> float:
        """Value the computation is compared against (derived value for errata)."""
        return self._value(self.derived if self.erratum else self.printed)


@lru_cache(maxsize=1)
def load_tables() -> dict:
    text = resources.files("pdmwell").joinpath("data/reference_tables.json").read_text("utf-8")
    data = json.loads(text)
    if data.get("version") != DATA_VERSION:
        raise ValueError(f"unsupported reference data version {data.get('version')}")
    return data


_COLUMNS = {"II": ("S_x", "S_p", "sum"), "III": ("F_x", "F_p", "var_x", "var_p")}


def table_data(table: str) -> list[RefDatum]:
    """Flatten a table into one :class:`RefDatum` per published cell."""
    data = load_tables()
    out = []
    if table == "I":
        for e in data["table_I"]:
            for col in ("psi", "phi", "energy"):
                out.append(RefDatum("I", e["n"], e["kappa"], None, col, e[col]))
        return out
    if table not in _COLUMNS:
        raise ValueError(f"unknown table {table!r}")
    for r in data[f"table_{table}"]["rows"]:
        err = r.get("erratum") or {}
        for col in _COLUMNS[table]:
            hit = err.get("column") == col
            out.append(RefDatum(
                table, r["n"], r["kappa"], float(r["a"]), col, r[col], erratum=hit,
                derived=err["derived_value"] if hit else None,
                justification=err["justification"] if hit else "",
            ))
    return out
