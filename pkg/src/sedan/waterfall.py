"""The waterfall: drive each goal through simplification, destructor
elimination, and generalization; pool untouched goals as checkpoints; test
every checkpoint and lift its counterexamples back to the top-level conjecture.

Pooled goals would be handed to induction in a full prover; here the pool is
never drained, so any pooled goal makes the attempt fail and the pooled goals
are exactly the checkpoints reported and tested.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .clauses import clause_to_term, clausify
from .datadef import BaseRef, ListofExpr, NamedRef, ProductExpr, Restriction
from .evaluator import EvaluationError, evaluate
from .forms import HintSpec
from .hints import EMPTY_SETTINGS, HintSettings, OverrideHint, apply_backtrack, fold_override_hints, select_hints
from .history import History, clause_vars
from .simplify import simplify_clause
from .terms import App, Term, Var, app, is_negation, replace_subterm, subst_vars, subterms, term_size
from .testgen import TestConfig, TestReport, run_trials
from .values import Value, truthy

PROCESS_ORDER = ("simplify", "eliminate-destructors", "generalize")


@dataclass
class Goal:
    id: str
    literals: list[Term]
    settings: HintSettings = EMPTY_SETTINGS
    origin: str = "top"
    inherited_backtrack: Optional[str] = None


@dataclass
class ProcessLogEntry:
    goal_id: str
    process: str
    outcome: str  # "proved" | "children" | "discarded"
    child_ids: tuple[str, ...] = ()
    parent_clause: list[Term] = field(default_factory=list)
    child_clauses: list[list[Term]] = field(default_factory=list)
    variable_map: dict = field(default_factory=dict)
    liftable: bool = True
    note: Optional[str] = None


@dataclass
class LiftedCounterexample:
    goal_id: str
    subgoal_binding: dict[str, Value]
    top_binding: dict[str, Value]
    had_wildcards: bool = False
    wildcard_vars: tuple[str, ...] = ()  # displayed as ? in reports


@dataclass
class SubgoalCounterexample:
    goal_id: str
    binding: dict[str, Value]
    reason: str


@dataclass
class ProofResult:
    status: str  # "proved" | "failed"
    top_term: Term
    checkpoints: list[Goal] = field(default_factory=list)
    checkpoint_reports: dict[str, TestReport] = field(default_factory=dict)
    counterexamples: list[LiftedCounterexample] = field(default_factory=list)
    subgoal_counterexamples: list[SubgoalCounterexample] = field(default_factory=list)
    spurious_lifts: list[SubgoalCounterexample] = field(default_factory=list)
    process_log: list[ProcessLogEntry] = field(default_factory=list)
    history: Optional[History] = None
    seed: int = 0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return bool(self.counterexamples)

    @property
    def discarded_generalizations(self) -> list[ProcessLogEntry]:
        return [e for e in self.process_log if e.outcome == "discarded"]


class FreshNames:
    def __init__(self, used):
        self.used = set(used)

    def fresh(self, root: str) -> str:
        root = root.rstrip("0123456789") or "v"
        i = 1
        while f"{root}{i}" in self.used:
            i += 1
        name = f"{root}{i}"
        self.used.add(name)
        return name


def _child_ids(parent_id: str, count: int) -> list[str]:
    if count == 1:
        return [parent_id + "'"]
    if parent_id == "Goal":
        return [f"Subgoal {i}" for i in range(1, count + 1)]
    return [f"{parent_id}.{i}" for i in range(1, count + 1)]


# ---------------------------------------------------------------------------
# destructor elimination


def _propagate_component_types(world, restrictions) -> tuple[list, list]:
    """Element/tail restrictions for the fresh car/cdr variables, when the
    eliminated variable's restriction is a listof or product shape."""
    car_r: list[Restriction] = []
    cdr_r: list[Restriction] = []

    def name_of(expr):
        if isinstance(expr, (BaseRef, NamedRef)):
            return expr.name
        return None

    for r in restrictions:
        if not isinstance(r, str) or r not in world.types.entries:
            continue
        expr = world.types.entries[r].expr
        if isinstance(expr, ListofExpr):
            elem = name_of(expr.elem)
            if elem:
                car_r.append(elem)
            cdr_r.append(r)
        elif isinstance(expr, ProductExpr):
            head = name_of(expr.car)
            if head:
                car_r.append(head)
            tail = name_of(expr.cdr)
            if tail:
                cdr_r.append(tail)
        elif isinstance(expr, BaseRef) and expr.name in ("true-list", "proper-cons"):
            cdr_r.append("true-list")
    return car_r, cdr_r


def eliminate_destructors(goal: Goal, world, history: History, fresh: FreshNames):
    """Replace (car v)/(cdr v) by fresh variables and v by their cons.

    Applicable when a hypothesis (consp v) holds for a variable v and a
    destructor application of v occurs in the clause. Returns
    (child literals, variable map, type map) or None.
    """
    lits = goal.literals
    for idx, lit in enumerate(lits[:-1]):
        if not (is_negation(lit) and isinstance(lit.args[0], App)):
            continue
        hyp = lit.args[0]
        if hyp.fn != "consp" or len(hyp.args) != 1 or not isinstance(hyp.args[0], Var):
            continue
        v = hyp.args[0]
        car_v, cdr_v = app("car", v), app("cdr", v)
        if not any(car_v == s or cdr_v == s for lit2 in lits for s in subterms(lit2)):
            continue
        v1, v2 = fresh.fresh(v.name), fresh.fresh(v.name)
        replacement = app("cons", Var(v1), Var(v2))
        new_lits = []
        for j, lit2 in enumerate(lits):
            if j == idx:
                continue  # the triggering (consp v) holds by construction
            out = replace_subterm(lit2, car_v, Var(v1))
            out = replace_subterm(out, cdr_v, Var(v2))
            out = subst_vars(out, {v.name: replacement})
            new_lits.append(out)
        acc = history.accumulated_type_alist(goal.id, world)
        car_r, cdr_r = _propagate_component_types(world, acc.get(v.name, ()))
        type_map = {v1: tuple(car_r), v2: tuple(cdr_r)}
        return new_lits, {v.name: replacement}, type_map
    return None


# ---------------------------------------------------------------------------
# generalization


def generalize(goal: Goal, fresh: FreshNames):
    """Replace the largest repeated non-variable, non-quote subterm by a fresh
    variable everywhere. Returns (child literals, reverse map) or None."""
    counts: dict[Term, int] = {}
    first_pos: dict[Term, int] = {}
    pos = 0
    for lit in goal.literals:
        for s in subterms(lit):
            if isinstance(s, App):
                counts[s] = counts.get(s, 0) + 1
                first_pos.setdefault(s, pos)
            pos += 1
    candidates = [t for t, c in counts.items() if c >= 2]
    if not candidates:
        return None
    target = min(candidates, key=lambda t: (-term_size(t), first_pos[t]))
    fresh_name = fresh.fresh("v")
    new_lits = [replace_subterm(lit, target, Var(fresh_name)) for lit in goal.literals]
    return new_lits, {fresh_name: target}


# ---------------------------------------------------------------------------
# the waterfall proper


def run_waterfall(
    top: Term,
    world,
    hints: tuple[HintSpec, ...],
    config: TestConfig,
    overrides: Optional[list[OverrideHint]] = None,
    seed: Optional[int] = None,
) -> ProofResult:
    overrides = overrides or []
    used_seed = config.seed if seed is None else seed
    config = replace(config, seed=used_seed)
    history = History()
    fresh = FreshNames(clause_vars([top]))
    result = ProofResult("failed", top, history=history, seed=used_seed)

    history.record_top("Goal", [top])
    clauses = clausify(top)
    agenda: deque[Goal] = deque()
    if clauses == [[top]]:
        agenda.append(Goal("Goal", [top]))
    elif not clauses:
        result.status = "proved"
        return result
    else:
        ids = _child_ids("Goal", len(clauses))
        for cid, cl in zip(ids, clauses):
            history.record_node("Goal", cid, cl, "clausify", {}, world=world)
            agenda.append(Goal(cid, cl, origin="Goal:clausify"))
        result.process_log.append(
            ProcessLogEntry("Goal", "clausify", "children", tuple(ids), [top], clauses)
        )
    pool: list[Goal] = []
    processed = 0

    while agenda:
        processed += 1
        if processed > world.settings.max_goals_per_proof:
            result.diagnostics.append(
                f"goal budget of {world.settings.max_goals_per_proof} exceeded; "
                "remaining goals pooled unprocessed (check the rule set for loops)"
            )
            pool.extend(agenda)
            agenda.clear()
            break
        goal = agenda.popleft()
        settings = fold_override_hints(select_hints(goal.id, hints), overrides)
        if settings.backtrack is None and goal.inherited_backtrack is not None:
            settings = replace(settings, backtrack=goal.inherited_backtrack, replacement=True)
        goal.settings = settings

        for _ in range(len(PROCESS_ORDER) + 1):
            fired = _try_processes(goal, world, history, fresh)
            if fired is None:
                pool.append(goal)
                break
            process, status, children, varmap, typemap, liftable, note, log_map = fired
            outcome = apply_backtrack(
                settings.backtrack, process, children, goal, world, config, history
            )
            if outcome.action == "redo":
                result.process_log.append(
                    ProcessLogEntry(
                        goal.id, process, "discarded",
                        parent_clause=goal.literals, child_clauses=children,
                        variable_map=dict(log_map), liftable=liftable,
                        note=outcome.note,
                    )
                )
                goal.settings = settings = outcome.settings
                continue
            if status == "proved":
                result.process_log.append(
                    ProcessLogEntry(goal.id, process, "proved", parent_clause=goal.literals, note=note)
                )
                break
            ids = _child_ids(goal.id, len(children))
            for cid, cl in zip(ids, children):
                history.record_node(
                    goal.id, cid, cl, process, dict(varmap), typemap, liftable=liftable, world=world
                )
                child = Goal(cid, cl, origin=f"{goal.id}:{process}")
                if settings.replacement and settings.backtrack is not None:
                    child.inherited_backtrack = settings.backtrack
                agenda.append(child)
            result.process_log.append(
                ProcessLogEntry(
                    goal.id, process, "children", tuple(ids),
                    parent_clause=goal.literals, child_clauses=children,
                    variable_map=dict(log_map), liftable=liftable, note=note,
                )
            )
            break
        else:
            result.diagnostics.append(f"{goal.id}: backtracking did not settle; pushed to pool")
            pool.append(goal)

    result.checkpoints = pool
    result.status = "proved" if not pool else "failed"

    for goal in pool:
        alist = history.accumulated_type_alist(goal.id, world)
        trials = goal.settings.trials if goal.settings.trials is not None else config.trials
        goal_config = replace(config, trials=trials)
        report = run_trials(
            clause_to_term(goal.literals), alist, goal_config, world, seed=used_seed, goal_id=goal.id
        )
        result.checkpoint_reports[goal.id] = report
        for binding in report.counterexamples:
            _classify_counterexample(result, history, goal, binding, top, world)
    return result


def _classify_counterexample(result: ProofResult, history: History, goal: Goal, binding, top: Term, world):
    lift = history.lift(goal.id, binding, world)
    if lift.status == "failed":
        result.subgoal_counterexamples.append(SubgoalCounterexample(goal.id, binding, lift.reason))
        return
    try:
        top_value = evaluate(top, lift.binding, world)
    except EvaluationError as e:
        result.spurious_lifts.append(SubgoalCounterexample(goal.id, binding, f"evaluation error at top level: {e}"))
        return
    if truthy(top_value):
        result.spurious_lifts.append(
            SubgoalCounterexample(goal.id, binding, "lifted binding does not falsify the top-level conjecture")
        )
        return
    if lift.had_wildcards:
        # don't-care variables must falsify regardless of their instantiation
        for probe in history.wildcard_probe_values(world):
            relift = history.lift(goal.id, binding, world, wildcard_value=probe)
            if relift.status != "lifted":
                result.spurious_lifts.append(SubgoalCounterexample(goal.id, binding, "wildcard probe failed to lift"))
                return
            try:
                if truthy(evaluate(top, relift.binding, world)):
                    result.spurious_lifts.append(
                        SubgoalCounterexample(goal.id, binding, "wildcard instantiation no longer falsifies")
                    )
                    return
            except EvaluationError as e:
                result.spurious_lifts.append(SubgoalCounterexample(goal.id, binding, f"wildcard probe error: {e}"))
                return
    result.counterexamples.append(
        LiftedCounterexample(
            goal.id, binding, lift.binding,
            had_wildcards=lift.had_wildcards, wildcard_vars=lift.wildcard_vars,
        )
    )


def _try_processes(goal: Goal, world, history: History, fresh: FreshNames):
    """First applicable process wins; returns (name, status, children,
    history varmap, typemap, liftable, note, log map) or None. For liftable
    edges the log map matches the history map (parent var -> child term); for
    generalize it is the reverse map (fresh var -> replaced term)."""
    for process in PROCESS_ORDER:
        if process in goal.settings.do_not:
            continue
        if process == "simplify":
            outcome = simplify_clause(goal.literals, world)
            note = "; ".join(outcome.diagnostics) if outcome.diagnostics else None
            if outcome.status == "proved":
                return ("simplify", "proved", [], {}, {}, True, note, {})
            if outcome.status == "children":
                subs = outcome.substitutions
                return ("simplify", "children", outcome.children, subs, {}, True, note, subs)
        elif process == "eliminate-destructors":
            found = eliminate_destructors(goal, world, history, fresh)
            if found is not None:
                new_lits, varmap, typemap = found
                return ("eliminate-destructors", "children", [new_lits], varmap, typemap, True, None, varmap)
        elif process == "generalize":
            found = generalize(goal, fresh)
            if found is not None:
                new_lits, reverse_map = found
                note = "; ".join(f"{v} abstracts {t}" for v, t in reverse_map.items())
                return ("generalize", "children", [new_lits], {}, {}, False, note, reverse_map)
    return None
