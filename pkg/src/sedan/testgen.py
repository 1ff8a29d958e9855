"""Trial generation: extract type restrictions, instantiate variables, classify outcomes.

Hypotheses are always evaluated before the conclusion, so no trial passes
vacuously: a reported witness satisfies every hypothesis, and a reported
counterexample falsifies the whole conjecture. Satisfying assignments are
deduplicated by their canonically printed binding.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .datadef import Restriction, SingletonRestriction, TypeSelection, minimal_type, recognize, sample
from .evaluator import EvaluationError, evaluate
from .rand import DEFAULT_UNIFORM_BOUND, IndexSource
from .terms import App, Quote, Term, Var, free_vars, is_negation, negate
from .values import NIL, Value, print_value, truthy

TypeAlist = dict[str, tuple[Restriction, ...]]
Binding = dict[str, Value]


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class

    trials: int = 100
    mode: str = "random"  # random | exhaustive | mixed
    dist: str = "geometric"  # geometric | uniform
    seed: int = 24
    exhaustive_bound: int = 1000
    uniform_bound: int = DEFAULT_UNIFORM_BOUND
    per_goal_cap: int = 200_000
    deterministic: Optional[bool] = None  # None: on for thm forms, off for test?
    report_cap: int = 3


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    goal_id: Optional[str]
    type_alist: TypeAlist
    selections: dict[str, TypeSelection]
    trials_run: int = 0
    satisfied: int = 0
    unique_satisfied: int = 0
    counterexamples: list[Binding] = field(default_factory=list)
    witnesses: list[Binding] = field(default_factory=list)
    erroring: int = 0
    erroring_unique: int = 0
    first_error: Optional[str] = None
    seed: int = 0
    dist: str = "geometric"
    mode: str = "random"
    elapsed: float = 0.0

    @property
    def falsified(self) -> bool:
        return bool(self.counterexamples)


def split_conjecture(term: Term) -> tuple[tuple[Term, ...], Term]:
    """Flatten implies-chains into (hypotheses, conclusion)."""
    hyps: list[Term] = []
    concl = term
    while isinstance(concl, App) and concl.fn == "implies" and len(concl.args) == 2:
        hyps.extend(_flatten_and(concl.args[0]))
        concl = concl.args[1]
    return tuple(hyps), concl


def _flatten_and(term: Term):
    if isinstance(term, App) and term.fn == "and":
        out = []
        for a in term.args:
            out.extend(_flatten_and(a))
        return out
    return [term]


def clause_of(term: Term) -> list[Term]:
    """The conjecture as a disjunction: negated hypotheses, then the conclusion."""
    hyps, concl = split_conjecture(term)
    return [negate(h) for h in hyps] + [concl]


def clause_hyps_concl(literals: list[Term]) -> tuple[list[Term], Term]:
    """Hypotheses (negated literals) and conclusion (last literal) of a clause."""
    if not literals:
        return [], Quote(NIL)
    hyps = []
    for lit in literals[:-1]:
        hyps.append(lit.args[0] if is_negation(lit) else negate(lit))
    return hyps, literals[-1]


def extract_restrictions(literals: list[Term], world) -> TypeAlist:
    """Datatype and equality hypotheses become per-variable restriction lists.

    A hypothesis (recognizerp x) maps x to the recognizer's type; (equal x 'v)
    pins x to the singleton v. Unrestricted variables map to all.
    """
    order: dict[str, None] = {}
    for lit in literals:
        for v in free_vars(lit):
            order.setdefault(v, None)
    alist: dict[str, list[Restriction]] = {v: [] for v in order}
    for lit in literals[:-1]:
        if not is_negation(lit):
            continue
        hyp = lit.args[0]
        if not isinstance(hyp, App):
            continue
        if len(hyp.args) == 1 and isinstance(hyp.args[0], Var):
            type_name = world.types.recognizer_index.get(hyp.fn)
            if type_name is not None:
                alist[hyp.args[0].name].append(type_name)
        elif hyp.fn == "equal" and len(hyp.args) == 2:
            a, b = hyp.args
            if isinstance(a, Var) and isinstance(b, Quote):
                alist[a.name].append(SingletonRestriction(b.value))
            elif isinstance(b, Var) and isinstance(a, Quote):
                alist[b.name].append(SingletonRestriction(a.value))
    return {v: tuple(rs) if rs else ("all",) for v, rs in alist.items()}


def print_binding(binding: Binding, var_order) -> str:
    """Canonical alist form, also the deduplication key."""
    parts = [f"({v} . {print_value(binding[v])})" for v in var_order if v in binding]
    return "(" + " ".join(parts) + ")"


def _var_plans(alist: TypeAlist, world):
    return {v: minimal_type(world, list(rs)) for v, rs in alist.items()}


def _passes_residuals(world, selection: TypeSelection, value: Value) -> bool:
    for r in selection.residuals:
        if isinstance(r, SingletonRestriction):
            if value != r.value:
                return False
        elif not recognize(world, r, value):
            return False
    return True


def _index_bound(world, selection: TypeSelection, config: TestConfig) -> int:
    if isinstance(selection.primary, SingletonRestriction):
        return 1
    entry = world.types.entries[selection.primary]
    if entry.size is not None:
        return min(config.exhaustive_bound, entry.size)
    return config.exhaustive_bound


def _exhaustive_assignments(world, plans, var_order, config: TestConfig):
    bounds = [_index_bound(world, plans[v], config) for v in var_order]
    total = 1
    for b in bounds:
        total *= b
    total = min(total, config.per_goal_cap)
    counters = [0] * len(var_order)
    for _ in range(total):
        binding = {}
        for v, idx in zip(var_order, counters):
            sel = plans[v]
            if isinstance(sel.primary, SingletonRestriction):
                binding[v] = sel.primary.value
            else:
                from .datadef import enumerate_value

                binding[v] = enumerate_value(world, sel.primary, idx)
        yield binding
        # odometer: last variable fastest
        for i in range(len(counters) - 1, -1, -1):
            counters[i] += 1
            if counters[i] < bounds[i]:
                break
            counters[i] = 0


def _random_assignments(world, plans, var_order, config: TestConfig, rng: IndexSource):
    for _ in range(config.trials):
        binding = {}
        for v in var_order:
            sel = plans[v]
            if isinstance(sel.primary, SingletonRestriction):
                binding[v] = sel.primary.value
            else:
                binding[v] = sample(world, sel.primary, rng, config.dist)
        yield binding


def run_trials(
    conjecture: Term,
    alist: TypeAlist,
    config: TestConfig,
    world,
    seed: Optional[int] = None,
    goal_id: Optional[str] = None,
) -> TestReport:
    """Instantiate, evaluate, and classify trials for one conjecture.

    Deterministic for a fixed seed: each trial draws one index per non-singleton
    variable in variable order, so the first k trials of a longer run match a
    k-trial run exactly.
    """
    hyps, concl = split_conjecture(conjecture)
    var_order = [v for v in free_vars(conjecture)]
    for v in var_order:
        if v not in alist:
            raise ValueError(f"type alist does not cover variable {v}")
    plans = _var_plans(alist, world)
    used_seed = config.seed if seed is None else seed
    rng = IndexSource(used_seed, uniform_bound=config.uniform_bound)

    mode = config.mode
    if mode == "mixed":
        total = 1
        for v in var_order:
            total *= _index_bound(world, plans[v], config)
        mode = "exhaustive" if total <= config.trials else "random"

    if mode == "exhaustive":
        assignments = _exhaustive_assignments(world, plans, var_order, config)
    else:
        assignments = _random_assignments(world, plans, var_order, config, rng)

    report = TestReport(
        goal_id=goal_id,
        type_alist=alist,
        selections=plans,
        seed=used_seed,
        dist=config.dist,
        mode=mode,
    )
    seen: dict[str, str] = {}  # binding key -> "cex" | "wit" | "err"
    started = time.perf_counter()
    for binding in assignments:
        report.trials_run += 1
        if not all(_passes_residuals(world, plans[v], binding[v]) for v in var_order):
            continue
        try:
            ok = True
            for h in hyps:
                if not truthy(evaluate(h, binding, world)):
                    ok = False
                    break
        except (EvaluationError, RecursionError) as e:
            report.erroring += 1
            if report.first_error is None:
                report.first_error = str(e)
            continue
        if not ok:
            continue  # vacuous: a hypothesis failed
        report.satisfied += 1
        key = print_binding(binding, var_order)
        if key in seen:
            if seen[key] == "err":
                report.erroring += 1  # erroring is counted per trial
            continue
        report.unique_satisfied += 1
        try:
            value = evaluate(concl, binding, world)
        except (EvaluationError, RecursionError) as e:
            report.erroring += 1
            report.erroring_unique += 1
            seen[key] = "err"
            if report.first_error is None:
                report.first_error = str(e)
            continue
        if truthy(value):
            seen[key] = "wit"
            report.witnesses.append(dict(binding))
        else:
            seen[key] = "cex"
            report.counterexamples.append(dict(binding))
    report.elapsed = time.perf_counter() - started
    return report


def top_level_test(
    term: Term,
    config: TestConfig,
    world,
    seed: Optional[int] = None,
) -> TestReport:
    """Test an unsimplified conjecture: extract restrictions, then run trials."""
    literals = clause_of(term)
    alist = extract_restrictions(literals, world)
    return run_trials(term, alist, config, world, seed=seed)
