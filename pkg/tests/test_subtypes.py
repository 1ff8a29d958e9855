import pytest

from sedan.datadef import SubtypeEvidenceError, add_subtype_edge, minimal_type
from sedan.subtypes import SubtypeGraph

from conftest import make_world


def test_base_edges_give_the_standard_chain(world):
    g = world.subtypes
    assert g.subsumes("pos", "nat")
    assert g.subsumes("pos", "rational")  # via closure
    assert g.subsumes("neg", "integer")
    assert g.subsumes("boolean", "symbol")
    assert g.subsumes("proper-cons", "true-list")
    assert g.subsumes("string", "all")
    assert not g.subsumes("integer", "nat")


def test_listof_gets_true_list_edge():
    w = make_world("(defdata loi (listof integer))")
    assert w.subtypes.subsumes("loi", "true-list")
    assert w.subtypes.subsumes("loi", "all")


def test_product_ending_in_nil_gets_proper_cons_edge():
    w = make_world("(defdata triple (list pos pos pos))")
    assert w.subtypes.subsumes("triple", "proper-cons")
    assert w.subtypes.subsumes("triple", "true-list")


def test_singleton_and_enum_edges():
    w = make_world("(defdata three 3)\n(defdata rgb (enum '(red green blue)))")
    assert w.subtypes.subsumes("three", "pos")
    assert w.subtypes.subsumes("three", "rational")
    assert w.subtypes.subsumes("rgb", "symbol")
    assert not w.subtypes.subsumes("rgb", "boolean")


def test_evidence_accepts_valid_edge():
    w = make_world("(defdata triple (list pos pos pos))")
    add_subtype_edge(w, "triple", "proper-cons")  # redundant but checkable
    assert w.subtypes.subsumes("triple", "proper-cons")


def test_reflexive_edge_is_a_noop():
    w = make_world()
    before = list(w.subtypes.edges())
    add_subtype_edge(w, "nat", "nat")
    assert w.subtypes.subsumes("nat", "nat")
    assert set(w.subtypes.edges()) == set(before) | {("nat", "nat")}


def test_evidence_rejects_integer_into_nat_with_witness(world):
    with pytest.raises(SubtypeEvidenceError) as e:
        add_subtype_edge(world, "integer", "nat")
    assert e.value.witness_index == 1
    assert e.value.witness_value == -1


def test_trust_skips_the_evidence_check(world):
    add_subtype_edge(world, "integer", "nat", trust=True)
    assert world.subtypes.subsumes("integer", "nat")


def test_evidence_trials_configurable():
    w = make_world("(set-testing :evidence-trials 1)")
    assert w.settings.evidence_trials == 1
    # only index 0 (= 0, a nat) is checked, so the bad edge slips through
    add_subtype_edge(w, "integer", "nat")
    assert w.subtypes.subsumes("integer", "nat")


def test_two_cycle_collapses_to_one_scc_deterministically():
    w = make_world(
        "(defdata ev1 (listof nat))\n(defdata ev2 (listof nat))\n"
        "(defdata-subtype ev1 ev2)\n(defdata-subtype ev2 ev1)"
    )
    assert w.subtypes.equivalents("ev1") == ("ev1", "ev2")
    assert w.subtypes.equivalents("ev2") == ("ev1", "ev2")
    sel = minimal_type(w, ["ev2", "ev1"])
    assert sel.primary == "ev1"  # lexicographically least in the SCC
    assert "ev2" in sel.equivalents
    sel2 = minimal_type(w, ["ev1", "ev2"])
    assert sel2.primary == "ev1"


def test_alias_defdata_forms_an_scc():
    w = make_world("(defdata mynat nat)")
    assert w.subtypes.subsumes("mynat", "nat")
    assert w.subtypes.subsumes("nat", "mynat")
    assert minimal_type(w, ["mynat", "integer"]).primary in ("mynat", "nat")


def test_raw_graph_scc_and_closure():
    g = SubtypeGraph()
    g.add_edge("a", "b")
    g.add_edge("b", "c")
    g.add_edge("c", "b")  # b <-> c cycle
    assert g.equivalents("b") == ("b", "c")
    assert g.subsumes("a", "c")
    assert not g.subsumes("c", "a")
    assert g.representative("c") == "b"


def test_closure_recomputed_on_insertion():
    g = SubtypeGraph()
    g.add_edge("x", "y")
    assert not g.subsumes("x", "z")
    g.add_edge("y", "z")
    assert g.subsumes("x", "z")
