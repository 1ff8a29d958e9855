import itertools
import math
from fractions import Fraction

import pytest

from sedan.evaluator import (
    BUILTINS,
    ArityError,
    DepthExceededError,
    UnboundVariableError,
    UndefinedFunctionError,
    evaluate,
)
from sedan.values import NIL, T, Char, Cons, Symbol, from_list, print_value

from conftest import make_world, term

# one representative per primitive kind of the (reduced) value universe:
# zero, positive/negative integers, positive/negative non-integer rationals,
# nil, t, another symbol, a proper cons, an improper cons, a string, a char
REPRESENTATIVES = [
    0, 7, -3, Fraction(5, 2), Fraction(-1, 3),
    NIL, T, Symbol("foo"),
    from_list([1, 2]), Cons(1, 2),
    "ab", Char("q"),
]


def ev(src, binding=None, world=None, **kw):
    return evaluate(term(src), binding or {}, world or make_world(), **kw)


def test_rev_rev_counterexample_and_witness():
    w = make_world("(defun rev (x) (if (endp x) nil (append (rev (cdr x)) (list (car x)))))")
    t = term("(equal (rev (rev x)) x)")
    assert evaluate(t, {"x": 0}, w) == NIL  # falsified at an atom
    assert evaluate(t, {"x": from_list([1, 2, 3])}, w) == T


def test_default_completions():
    assert ev("(car nil)") == NIL
    assert ev("(car 5)") == NIL
    assert ev("(cdr \"abc\")") == NIL
    assert ev("(+ 1 t)") == 1  # non-rationals act as 0
    assert ev("(* 3 \"x\")") == 0
    assert ev("(/ 1 0)") == 0
    assert ev("(/ 0)") == 0
    assert ev("(< t 1)") == T  # t coerces to 0
    assert ev("(= nil 0)") == T


def test_arithmetic_is_exact():
    # oracle: integer arithmetic plus manual gcd reduction, independent of Fraction
    cases = [(1, 3, 1, 6), (-2, 7, 5, 21), (3, 4, -3, 4)]
    for p1, q1, p2, q2 in cases:
        num = p1 * q2 + p2 * q1
        den = q1 * q2
        g = math.gcd(abs(num), den)
        num, den = num // g, den // g
        if den < 0:
            num, den = -num, -den
        got = ev(f"(+ {p1}/{q1} {p2}/{q2})")
        expected = num if den == 1 else Fraction(num, den)
        assert got == expected


def test_expt_integer_exponents_only():
    assert ev("(expt 2 10)") == 1024
    assert ev("(expt 1/2 2)") == Fraction(1, 4)
    assert ev("(expt 2 -2)") == Fraction(1, 4)
    assert ev("(expt 0 -1)") == 0
    assert ev("(expt 2 1/2)") == 1  # non-integer exponent acts as 0
    assert ev("(expt \"a\" 2)") == 0


def test_logic_operators():
    assert ev("(and)") == T
    assert ev("(and 1 2 3)") == 3
    assert ev("(and 1 nil 3)") == NIL
    assert ev("(or)") == NIL
    assert ev("(or nil 5)") == 5
    assert ev("(implies nil nil)") == T
    assert ev("(implies 5 7)") == T  # conclusion booleanized
    assert ev("(implies 5 nil)") == NIL
    assert ev("(not nil)") == T


def test_list_builtins():
    assert ev("(len '(1 2 3))") == 3
    assert ev("(len '(1 2 . 3))") == 2
    assert ev("(len 5)") == 0
    assert ev("(append '(1) '(2) '(3))") == from_list([1, 2, 3])
    assert ev("(append '(1 . 9) '(2))") == from_list([1, 2])  # improper tail dropped
    assert ev("(true-listp '(1 2))") == T
    assert ev("(true-listp '(1 . 2))") == NIL


def test_section7_binding_falsifies_conclusion_only():
    w = make_world()
    hyp_srcs = [
        "(real/rationalp a)", "(real/rationalp b)", "(real/rationalp c)",
        "(< 0 a)", "(< 0 b)", "(< 0 c)",
        "(<= (expt a 2) (* b (+ c 1)))", "(<= b (* 4 c))",
    ]
    binding = {"a": Fraction(1, 7), "b": Fraction(2, 11), "c": Fraction(2, 9)}
    for h in hyp_srcs:
        assert evaluate(term(h), binding, w) == T
    assert evaluate(term("(< (expt (- a 1) 2) (* b c))"), binding, w) == NIL


def test_errors():
    with pytest.raises(UndefinedFunctionError):
        ev("(mystery 1)")
    with pytest.raises(UnboundVariableError):
        ev("(+ x 1)")
    with pytest.raises(ArityError):
        ev("(car 1 2)")


def test_depth_cap_is_an_error_not_nontermination():
    w = make_world("(defun spin (x) (spin x))")
    with pytest.raises(DepthExceededError):
        evaluate(term("(spin 1)"), {}, w)
    # configurable
    with pytest.raises(DepthExceededError):
        evaluate(term("(spin 1)"), {}, w, depth_cap=10)


def test_deep_recursion_within_cap_is_fine():
    w = make_world("(defun count-down (n) (if (posp n) (+ 1 (count-down (- n 1))) 0))")
    assert evaluate(term("(count-down 9000)"), {}, w) == 9000


def test_evaluation_is_pure():
    w = make_world("(defun id2 (x) x)")
    t = term("(cons (id2 x) (id2 x))")
    b = {"x": from_list([1, 2])}
    assert evaluate(t, b, w) == evaluate(t, b, w)


def test_every_builtin_total_over_representatives():
    w = make_world()
    for name, (lo, hi, _) in BUILTINS.items():
        arity = lo if lo > 0 else (1 if hi is None else lo)
        if arity == 1:
            pools = [REPRESENTATIVES]
        else:
            pools = [REPRESENTATIVES, REPRESENTATIVES]
        for combo in itertools.product(*pools):
            binding = {f"v{i}": v for i, v in enumerate(combo)}
            args = " ".join(f"v{i}" for i in range(len(combo)))
            result = evaluate(term(f"({name} {args})"), binding, w)
            print_value(result)  # must be a printable value


def test_special_forms_total_over_representatives():
    w = make_world()
    for a, b in itertools.product(REPRESENTATIVES, repeat=2):
        binding = {"p": a, "q": b}
        for src in ("(if p q q)", "(and p q)", "(or p q)", "(implies p q)"):
            print_value(evaluate(term(src), binding, w))
