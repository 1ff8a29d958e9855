"""Evaluator for the total first-order language.

Every built-in returns a value on every input (ACL2-style default completions):
car/cdr of a non-pair is nil, arithmetic treats non-rationals as 0, division by
zero is 0. User-function recursion is bounded by the world's depth cap and is
driven by an explicit work stack, so a runaway definition raises an error
instead of exhausting the interpreter stack.

The evaluator is pure: same term, binding, and world always give the same value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .terms import App, Quote, Term, Var
from .values import (
    NIL,
    T,
    Char,
    Cons,
    Symbol,
    Value,
    boolify,
    from_list,
    is_integer,
    is_rational,
    is_true_list,
    norm_rat,
    proper_length,
    truthy,
)

Binding = Mapping[str, Value]


class EvaluationError(Exception):
    pass


class UndefinedFunctionError(EvaluationError):
    def __init__(self, name: str):
        super().__init__(f"undefined function: {name}")
        self.name = name


class UnboundVariableError(EvaluationError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable: {name}")
        self.name = name


class DepthExceededError(EvaluationError):
    def __init__(self, cap: int):
        super().__init__(f"recursion depth cap of {cap} exceeded (likely nonterminating definition)")
        self.cap = cap


class ArityError(EvaluationError):
    pass


def _fix(v: Value) -> Value:
    """Coerce to a rational; non-numbers act as 0."""
    return v if is_rational(v) else 0


def _ifix(v: Value) -> int:
    return v if is_integer(v) else 0


def _car(args):
    v = args[0]
    return v.car if isinstance(v, Cons) else NIL


def _cdr(args):
    v = args[0]
    return v.cdr if isinstance(v, Cons) else NIL


def _divide(args):
    if len(args) == 1:
        a = _fix(args[0])
        return 0 if a == 0 else norm_rat(Fraction(1, 1) / a)
    a, b = _fix(args[0]), _fix(args[1])
    return 0 if b == 0 else norm_rat(Fraction(a) / b)


def _minus(args):
    if len(args) == 1:
        return -_fix(args[0])
    return norm_rat(Fraction(_fix(args[0]) - _fix(args[1])))


def _expt(args):
    base, power = _fix(args[0]), _ifix(args[1])
    if power == 0:
        return 1
    if base == 0:
        return 0
    return norm_rat(Fraction(base) ** power)


def _append(args):
    if not args:
        return NIL
    out = args[-1]
    for x in reversed(args[:-1]):
        items = []
        while isinstance(x, Cons):
            items.append(x.car)
            x = x.cdr
        out = from_list(items, out)
    return out


def _plus(args):
    total = 0
    for a in args:
        total = total + _fix(a)
    return norm_rat(Fraction(total)) if isinstance(total, Fraction) else total


def _times(args):
    total = 1
    for a in args:
        total = total * _fix(a)
    return norm_rat(total) if isinstance(total, Fraction) else total


def _is_bool(v: Value) -> bool:
    return v == T or v == NIL


# name -> (min arity, max arity or None, implementation)
BUILTINS = {
    "cons": (2, 2, lambda a: Cons(a[0], a[1])),
    "car": (1, 1, _car),
    "cdr": (1, 1, _cdr),
    "consp": (1, 1, lambda a: boolify(isinstance(a[0], Cons))),
    "atom": (1, 1, lambda a: boolify(not isinstance(a[0], Cons))),
    "endp": (1, 1, lambda a: boolify(not isinstance(a[0], Cons))),
    "equal": (2, 2, lambda a: boolify(a[0] == a[1])),
    "not": (1, 1, lambda a: boolify(a[0] == NIL)),
    "+": (0, None, _plus),
    "*": (0, None, _times),
    "-": (1, 2, _minus),
    "/": (1, 2, _divide),
    "<": (2, 2, lambda a: boolify(_fix(a[0]) < _fix(a[1]))),
    "<=": (2, 2, lambda a: boolify(_fix(a[0]) <= _fix(a[1]))),
    ">": (2, 2, lambda a: boolify(_fix(a[0]) > _fix(a[1]))),
    ">=": (2, 2, lambda a: boolify(_fix(a[0]) >= _fix(a[1]))),
    "=": (2, 2, lambda a: boolify(_fix(a[0]) == _fix(a[1]))),
    "expt": (2, 2, _expt),
    "len": (1, 1, lambda a: proper_length(a[0])),
    "append": (0, None, _append),
    "list": (0, None, lambda a: from_list(list(a))),
    "natp": (1, 1, lambda a: boolify(is_integer(a[0]) and a[0] >= 0)),
    "posp": (1, 1, lambda a: boolify(is_integer(a[0]) and a[0] > 0)),
    "negp": (1, 1, lambda a: boolify(is_integer(a[0]) and a[0] < 0)),
    "integerp": (1, 1, lambda a: boolify(is_integer(a[0]))),
    "rationalp": (1, 1, lambda a: boolify(is_rational(a[0]))),
    "real/rationalp": (1, 1, lambda a: boolify(is_rational(a[0]))),
    "booleanp": (1, 1, lambda a: boolify(_is_bool(a[0]))),
    "symbolp": (1, 1, lambda a: boolify(isinstance(a[0], Symbol))),
    "stringp": (1, 1, lambda a: boolify(isinstance(a[0], str))),
    "characterp": (1, 1, lambda a: boolify(isinstance(a[0], Char))),
    "true-listp": (1, 1, lambda a: boolify(is_true_list(a[0]))),
    "proper-consp": (1, 1, lambda a: boolify(isinstance(a[0], Cons) and is_true_list(a[0]))),
    "allp": (1, 1, lambda a: T),
}

SPECIAL_FORMS = {"if": (3, 3), "implies": (2, 2), "and": (0, None), "or": (0, None)}


def is_callable_name(world, name: str) -> bool:
    return name in SPECIAL_FORMS or name in BUILTINS or name in world.functions


def arity_bounds(world, name: str):
    """(min, max) arity for a callable name, or None if unknown."""
    if name in SPECIAL_FORMS:
        return SPECIAL_FORMS[name]
    if name in BUILTINS:
        lo, hi, _ = BUILTINS[name]
        return (lo, hi)
    fn = world.functions.get(name)
    if fn is None:
        return None
    return fn.arity_bounds()


def _check_arity(name: str, lo: int, hi, n: int):
    if n < lo or (hi is not None and n > hi):
        expected = str(lo) if hi == lo else f"{lo}..{'*' if hi is None else hi}"
        raise ArityError(f"{name} expects {expected} argument(s), got {n}")


def evaluate(term: Term, binding: Binding, world, depth_cap: int | None = None) -> Value:
    """Evaluate a term under a binding of its free variables."""
    cap = world.settings.depth_cap if depth_cap is None else depth_cap
    work: list = [("ev", term, binding)]
    vals: list = []
    depth = 0
    while work:
        item = work.pop()
        op = item[0]
        if op == "ev":
            t, env = item[1], item[2]
            tt = type(t)
            if tt is Quote:
                vals.append(t.value)
            elif tt is Var:
                try:
                    vals.append(env[t.name])
                except KeyError:
                    raise UnboundVariableError(t.name) from None
            elif tt is App:
                fn, args = t.fn, t.args
                if fn == "if":
                    _check_arity(fn, 3, 3, len(args))
                    work.append(("if", args[1], args[2], env))
                    work.append(("ev", args[0], env))
                elif fn == "and":
                    if not args:
                        vals.append(T)
                    else:
                        work.append(("and", args, 1, env))
                        work.append(("ev", args[0], env))
                elif fn == "or":
                    if not args:
                        vals.append(NIL)
                    else:
                        work.append(("or", args, 1, env))
                        work.append(("ev", args[0], env))
                elif fn == "implies":
                    _check_arity(fn, 2, 2, len(args))
                    work.append(("imp", args[1], env))
                    work.append(("ev", args[0], env))
                else:
                    work.append(("ap", t, env))
                    for a in reversed(args):
                        work.append(("ev", a, env))
            else:
                raise EvaluationError(f"not a term: {t!r}")
        elif op == "ap":
            t, env = item[1], item[2]
            n = len(t.args)
            argv = vals[len(vals) - n:]
            del vals[len(vals) - n:]
            fn = t.fn
            builtin = BUILTINS.get(fn)
            if builtin is not None:
                lo, hi, impl = builtin
                _check_arity(fn, lo, hi, n)
                vals.append(impl(argv))
                continue
            fdef = world.functions.get(fn)
            if fdef is None:
                raise UndefinedFunctionError(fn)
            if fdef.is_native():
                lo, hi = fdef.arity_bounds()
                _check_arity(fn, lo, hi, n)
                vals.append(fdef.call(argv, world))
            else:
                _check_arity(fn, len(fdef.formals), len(fdef.formals), n)
                depth += 1
                if depth > cap:
                    raise DepthExceededError(cap)
                work.append(("ret",))
                work.append(("ev", fdef.body, dict(zip(fdef.formals, argv))))
        elif op == "ret":
            depth -= 1
        elif op == "if":
            test = vals.pop()
            branch = item[1] if truthy(test) else item[2]
            work.append(("ev", branch, item[3]))
        elif op == "and":
            v = vals.pop()
            args, i, env = item[1], item[2], item[3]
            if v == NIL:
                vals.append(NIL)
            elif i == len(args):
                vals.append(v)
            else:
                work.append(("and", args, i + 1, env))
                work.append(("ev", args[i], env))
        elif op == "or":
            v = vals.pop()
            args, i, env = item[1], item[2], item[3]
            if v != NIL:
                vals.append(v)
            elif i == len(args):
                vals.append(v)
            else:
                work.append(("or", args, i + 1, env))
                work.append(("ev", args[i], env))
        elif op == "imp":
            hyp = vals.pop()
            if hyp == NIL:
                vals.append(T)
            else:
                work.append(("bool",))
                work.append(("ev", item[1], item[2]))
        elif op == "bool":
            vals.append(boolify(truthy(vals.pop())))
    assert len(vals) == 1
    return vals[0]
