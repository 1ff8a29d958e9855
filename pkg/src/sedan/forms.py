"""Top-level surface forms and term compilation.

Supported forms: defun, defdata, defdata-subtype, defrule, thm, test?
(top-level-test? is a synonym), set-testing, include.

Selector sugar (``first``/``second``/``third`` and ``c[ad]..r`` compositions)
and ``cond`` expand at parse time into car/cdr/if, so every later stage sees
only core terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .reader import ParseError, SAtom, Sexpr, SList, read_sexprs, sexpr_to_value
from .terms import App, Quote, Term, Var, app
from .values import NIL, T, Symbol, print_value

PROCESS_NAMES = ("simplify", "eliminate-destructors", "generalize")

# selector paths follow the c*r naming: second = cadr = (car (cdr x))
_SELECTOR_SUGAR = {"first": "a", "second": "ad", "third": "add"}
_CXR_RE = re.compile(r"c([ad]{2,4})r\Z")


def _expand_selector(path: str, arg: Term) -> Term:
    # path letters apply right-to-left: cadr -> (car (cdr x))
    out = arg
    for letter in reversed(path):
        out = app("car" if letter == "a" else "cdr", out)
    return out


@dataclass(frozen=True)
class HintSpec:
    goal_id: str
    do_not: tuple[str, ...] = ()
    trials: Optional[int] = None
    backtrack: Optional[str] = None


@dataclass
class DefunForm:
    name: str
    formals: tuple[str, ...]
    body: Term
    sx: Sexpr


@dataclass
class DefdataForm:
    definitions: list[tuple[str, Sexpr]]  # compiled against the world at admission
    sx: Sexpr


@dataclass
class DefdataSubtypeForm:
    t1: str
    t2: str
    trust: bool
    sx: Sexpr


@dataclass
class DefruleForm:
    name: str
    hyps: tuple[Term, ...]
    lhs: Term
    rhs: Term
    sx: Sexpr


@dataclass
class ThmForm:
    term: Term
    hints: tuple[HintSpec, ...]
    sx: Sexpr


@dataclass
class TestForm:
    __test__ = False  # not a pytest class

    term: Term
    sx: Sexpr


@dataclass
class SetTestingForm:
    updates: dict
    sx: Sexpr


@dataclass
class IncludeForm:
    path: str
    sx: Sexpr


Form = (
    DefunForm | DefdataForm | DefdataSubtypeForm | DefruleForm | ThmForm | TestForm
    | SetTestingForm | IncludeForm
)


def compile_term(sx: Sexpr) -> Term:
    if isinstance(sx, SAtom):
        v = sx.value
        if isinstance(v, Symbol):
            if v == T or v == NIL or v.name.startswith(":"):
                return Quote(v)
            return Var(v.name)
        return Quote(v)
    items = sx.items
    if not items:
        return Quote(NIL)
    head = items[0]
    if not (isinstance(head, SAtom) and isinstance(head.value, Symbol)):
        raise ParseError("expected a function symbol", sx.line, sx.col)
    fn = head.value.name
    args = items[1:]
    if fn == "quote":
        if len(args) != 1:
            raise ParseError("quote takes exactly one datum", sx.line, sx.col)
        return Quote(sexpr_to_value(args[0]))
    if fn == "cond":
        return _expand_cond(args, sx)
    compiled = [compile_term(a) for a in args]
    if fn in _SELECTOR_SUGAR:
        if len(compiled) != 1:
            raise ParseError(f"{fn} takes exactly one argument", sx.line, sx.col)
        return _expand_selector(_SELECTOR_SUGAR[fn], compiled[0])
    m = _CXR_RE.match(fn)
    if m:
        if len(compiled) != 1:
            raise ParseError(f"{fn} takes exactly one argument", sx.line, sx.col)
        return _expand_selector(m.group(1), compiled[0])
    return App(fn, tuple(compiled))


def _expand_cond(clauses, sx: Sexpr) -> Term:
    out: Term = Quote(NIL)
    for clause in reversed(clauses):
        if not (isinstance(clause, SList) and len(clause.items) == 2):
            raise ParseError("cond clause must be (test expr)", sx.line, sx.col)
        test = compile_term(clause.items[0])
        body = compile_term(clause.items[1])
        if test == Quote(T):
            out = body
        else:
            out = app("if", test, body, out)
    return out


def _symbol_name(sx: Sexpr, what: str) -> str:
    if isinstance(sx, SAtom) and isinstance(sx.value, Symbol) and not sx.value.name.startswith(":"):
        return sx.value.name
    raise ParseError(f"expected a {what} name", getattr(sx, "line", 0), getattr(sx, "col", 0))


def _require(cond: bool, msg: str, sx: Sexpr):
    if not cond:
        raise ParseError(msg, getattr(sx, "line", 0), getattr(sx, "col", 0))


def _unquote(sx: Sexpr) -> Sexpr:
    """Strip one (quote ...) wrapper: hints are often written '(generalize)."""
    if (
        isinstance(sx, SList)
        and len(sx.items) == 2
        and isinstance(sx.items[0], SAtom)
        and sx.items[0].value == Symbol("quote")
    ):
        return sx.items[1]
    return sx


def compile_form(sx: Sexpr) -> Form:
    _require(isinstance(sx, SList), "top-level form must be a list", sx)
    items = sx.items
    _require(bool(items), "empty top-level form", sx)
    head = items[0]
    _require(
        isinstance(head, SAtom) and isinstance(head.value, Symbol),
        "top-level form must start with a symbol",
        sx,
    )
    op = head.value.name
    args = items[1:]

    if op == "defun":
        _require(len(args) == 3, "defun takes a name, a formals list, and a body", sx)
        name = _symbol_name(args[0], "function")
        _require(isinstance(args[1], SList), "defun formals must be a list", sx)
        formals = tuple(_symbol_name(f, "formal") for f in args[1].items)
        return DefunForm(name, formals, compile_term(args[2]), sx)

    if op == "defdata":
        _require(len(args) >= 1, "defdata needs a definition", sx)
        if len(args) == 2 and isinstance(args[0], SAtom):
            name = _symbol_name(args[0], "type")
            return DefdataForm([(name, args[1])], sx)
        # mutually recursive group: (defdata (name1 expr1) (name2 expr2) ...)
        defs = []
        for entry in args:
            _require(
                isinstance(entry, SList) and len(entry.items) == 2,
                "defdata group entry must be (name expr)",
                entry if isinstance(entry, SList) else sx,
            )
            defs.append((_symbol_name(entry.items[0], "type"), entry.items[1]))
        _require(bool(defs), "defdata needs a definition", sx)
        return DefdataForm(defs, sx)

    if op == "defdata-subtype":
        _require(len(args) in (2, 4), "defdata-subtype takes two type names (and optionally :trust t)", sx)
        t1 = _symbol_name(args[0], "type")
        t2 = _symbol_name(args[1], "type")
        trust = False
        if len(args) == 4:
            _require(
                isinstance(args[2], SAtom) and args[2].value == Symbol(":trust"),
                "expected :trust",
                sx,
            )
            trust = isinstance(args[3], SAtom) and args[3].value == T
        return DefdataSubtypeForm(t1, t2, trust, sx)

    if op == "defrule":
        _require(len(args) == 2, "defrule takes a name and a formula", sx)
        name = _symbol_name(args[0], "rule")
        hyps, lhs, rhs = _rule_parts(compile_term(args[1]), sx)
        return DefruleForm(name, hyps, lhs, rhs, sx)

    if op == "thm":
        _require(len(args) >= 1, "thm takes a formula", sx)
        term = compile_term(args[0])
        hints: tuple[HintSpec, ...] = ()
        rest = args[1:]
        if rest:
            _require(
                len(rest) == 2 and isinstance(rest[0], SAtom) and rest[0].value == Symbol(":hints"),
                "thm options must be :hints (...)",
                sx,
            )
            hints = _parse_hints(_unquote(rest[1]), sx)
        return ThmForm(term, hints, sx)

    if op in ("test?", "top-level-test?"):
        _require(len(args) == 1, f"{op} takes exactly one formula", sx)
        return TestForm(compile_term(args[0]), sx)

    if op == "set-testing":
        return SetTestingForm(_parse_set_testing(args, sx), sx)

    if op == "include":
        _require(
            len(args) == 1 and isinstance(args[0], SAtom) and isinstance(args[0].value, str),
            'include takes one relative path string',
            sx,
        )
        return IncludeForm(args[0].value, sx)

    raise ParseError(f"unknown top-level form: {op}", sx.line, sx.col)


def _rule_parts(body: Term, sx: Sexpr):
    hyps: list[Term] = []
    concl = body
    while isinstance(concl, App) and concl.fn == "implies" and len(concl.args) == 2:
        hyps.extend(_flatten_and(concl.args[0]))
        concl = concl.args[1]
    if isinstance(concl, App) and concl.fn == "equal" and len(concl.args) == 2:
        lhs, rhs = concl.args
    elif isinstance(concl, App) and concl.fn == "not" and len(concl.args) == 1:
        lhs, rhs = concl.args[0], Quote(NIL)
    else:
        lhs, rhs = concl, Quote(T)
    if not isinstance(lhs, App):
        raise ParseError("rule left-hand side must be a function application", sx.line, sx.col)
    return tuple(hyps), lhs, rhs


def _flatten_and(term: Term) -> list[Term]:
    if isinstance(term, App) and term.fn == "and":
        out = []
        for a in term.args:
            out.extend(_flatten_and(a))
        return out
    return [term]


def _parse_hints(sx: Sexpr, ctx: Sexpr) -> tuple[HintSpec, ...]:
    _require(isinstance(sx, SList), ":hints expects a list of hint entries", ctx)
    out = []
    for entry in sx.items:
        _require(isinstance(entry, SList) and len(entry.items) >= 1, "hint entry must be (goal-id ...)", ctx)
        gid_sx = entry.items[0]
        _require(isinstance(gid_sx, SAtom) and isinstance(gid_sx.value, str), "hint goal id must be a string", ctx)
        goal_id = gid_sx.value
        do_not: tuple[str, ...] = ()
        trials = None
        backtrack = None
        rest = entry.items[1:]
        _require(len(rest) % 2 == 0, "hint keywords must come in pairs", ctx)
        for key_sx, val_sx in zip(rest[::2], rest[1::2]):
            _require(isinstance(key_sx, SAtom) and isinstance(key_sx.value, Symbol), "expected a hint keyword", ctx)
            key = key_sx.value.name
            if key == ":do-not":
                val = _unquote(val_sx)
                _require(isinstance(val, SList), ":do-not expects a list of process names", ctx)
                names = tuple(_symbol_name(i, "process") for i in val.items)
                for n in names:
                    if n not in PROCESS_NAMES:
                        raise ParseError(f"unknown process name in :do-not: {n}", ctx.line, ctx.col)
                do_not = names
            elif key == ":trials":
                _require(
                    isinstance(val_sx, SAtom) and isinstance(val_sx.value, int) and val_sx.value > 0,
                    ":trials expects a positive integer",
                    ctx,
                )
                trials = val_sx.value
            elif key == ":backtrack":
                backtrack = _symbol_name(val_sx, "backtrack handler")
            else:
                raise ParseError(f"unknown hint keyword: {key}", ctx.line, ctx.col)
        out.append(HintSpec(goal_id, do_not, trials, backtrack))
    return tuple(out)


_SET_TESTING_KEYS = {
    ":trials": ("trials", int),
    ":mode": ("mode", ("random", "exhaustive", "mixed")),
    ":dist": ("dist", ("geometric", "uniform")),
    ":seed": ("seed", int),
    ":exhaustive-bound": ("exhaustive_bound", int),
    ":uniform-bound": ("uniform_bound", int),
    ":per-goal-cap": ("per_goal_cap", int),
    ":deterministic": ("deterministic", "bool"),
    ":evidence-trials": ("evidence_trials", int),
    ":depth-cap": ("depth_cap", int),
}


def _parse_set_testing(args, sx: Sexpr) -> dict:
    _require(len(args) % 2 == 0, "set-testing keywords must come in pairs", sx)
    updates = {}
    for key_sx, val_sx in zip(args[::2], args[1::2]):
        _require(isinstance(key_sx, SAtom) and isinstance(key_sx.value, Symbol), "expected a set-testing keyword", sx)
        key = key_sx.value.name
        spec = _SET_TESTING_KEYS.get(key)
        if spec is None:
            raise ParseError(f"unknown set-testing keyword: {key}", sx.line, sx.col)
        field_name, kind = spec
        _require(isinstance(val_sx, SAtom), f"{key} expects an atom", sx)
        v = val_sx.value
        if kind is int:
            _require(isinstance(v, int) and v >= 0, f"{key} expects a nonnegative integer", sx)
            updates[field_name] = v
        elif kind == "bool":
            _require(v in (T, NIL), f"{key} expects t or nil", sx)
            updates[field_name] = v == T
        else:
            _require(isinstance(v, Symbol) and v.name in kind, f"{key} expects one of {kind}", sx)
            updates[field_name] = v.name
    return updates


def parse_forms(text: str) -> list[Form]:
    """Parse source text into its ordered top-level forms."""
    return [compile_form(sx) for sx in read_sexprs(text)]


def print_sexpr(sx: Sexpr) -> str:
    if isinstance(sx, SAtom):
        return print_value(sx.value)
    items = sx.items
    if len(items) == 2 and isinstance(items[0], SAtom) and items[0].value == Symbol("quote"):
        return "'" + print_sexpr(items[1])
    return "(" + " ".join(print_sexpr(i) for i in items) + ")"


def print_form(form: Form) -> str:
    return print_sexpr(form.sx)
