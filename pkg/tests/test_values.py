from fractions import Fraction

from sedan.values import (
    NIL,
    T,
    Char,
    Cons,
    Symbol,
    from_list,
    is_true_list,
    list_elements,
    norm_rat,
    order_key,
    print_value,
    proper_length,
    truthy,
)


def test_nil_is_false_everything_else_true():
    assert not truthy(NIL)
    for v in (T, 0, Fraction(1, 2), "", Char("a"), Cons(NIL, NIL), Symbol("foo")):
        assert truthy(v)


def test_rationals_normalize_to_int():
    assert norm_rat(Fraction(4, 2)) == 2
    assert isinstance(norm_rat(Fraction(4, 2)), int)
    assert norm_rat(Fraction(1, 3)) == Fraction(1, 3)


def test_print_value_forms():
    assert print_value(5) == "5"
    assert print_value(Fraction(-1, 3)) == "-1/3"
    assert print_value(Symbol("abc")) == "abc"
    assert print_value("a\"b\\c") == '"a\\"b\\\\c"'
    assert print_value(Char("z")) == "#\\z"
    assert print_value(Char(" ")) == "#\\Space"
    assert print_value(from_list([1, 2, 3])) == "(1 2 3)"
    assert print_value(Cons(1, 2)) == "(1 . 2)"
    assert print_value(Cons(1, Cons(2, 3))) == "(1 2 . 3)"


def test_values_of_distinct_kinds_never_compare_equal():
    kinds = [0, Fraction(1, 2), Symbol("a"), Char("a"), "a", Cons(0, NIL)]
    for i, a in enumerate(kinds):
        for j, b in enumerate(kinds):
            if i != j:
                assert a != b


def test_list_helpers():
    lst = from_list([1, 2, 3])
    assert list_elements(lst) == [1, 2, 3]
    assert list_elements(Cons(1, 2)) is None
    assert is_true_list(NIL) and is_true_list(lst) and not is_true_list(Cons(1, 2))
    assert proper_length(lst) == 3
    assert proper_length(Cons(1, 2)) == 1


def test_order_key_is_a_total_order_over_sample():
    sample = [0, 5, Fraction(-1, 2), Symbol("nil"), Symbol("z"), Char("a"), "ab",
              from_list([1]), from_list([1, 2]), Cons(1, 2)]
    keys = [order_key(v) for v in sample]
    assert sorted(keys) is not None  # all keys mutually comparable
    assert len(set(keys)) == len(sample)
