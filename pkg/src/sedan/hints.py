"""Hint selection, override-hint folding, and the backtrack protocol.

Hints are selected once per goal at the top of the waterfall; override hints
then fold over the selection in registration order. Backtrack handlers run
after a process succeeds and may discard its children, re-entering the goal
with settings that extend (never replace) the previous ones.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

from .forms import PROCESS_NAMES, HintSpec
from .testgen import TestConfig, TestReport


@dataclass(frozen=True)
class HintSettings:
    do_not: frozenset[str] = frozenset()
    trials: Optional[int] = None
    backtrack: Optional[str] = None  # registered handler name
    replacement: bool = False  # propagate to descendant goals

    def extend_do_not(self, names) -> "HintSettings":
        return replace(self, do_not=self.do_not | frozenset(names))


EMPTY_SETTINGS = HintSettings()


@dataclass(frozen=True)
class OverrideHint:
    """A pure transformer over hint settings, applied in registration order."""

    name: str
    transform: Callable[[HintSettings], HintSettings]


@dataclass
class BacktrackOutcome:
    action: str  # "keep" | "redo"
    settings: Optional[HintSettings] = None  # for redo: the goal's new settings
    report: Optional[TestReport] = None
    note: Optional[str] = None


def select_hints(goal_id: str, user_hints: tuple[HintSpec, ...]) -> HintSettings:
    """First user hint whose goal id matches wins; otherwise empty settings."""
    for spec in user_hints:
        if spec.goal_id == goal_id:
            for name in spec.do_not:
                if name not in PROCESS_NAMES:
                    raise ValueError(f"hint references unknown process: {name}")
            if spec.backtrack is not None and spec.backtrack not in HANDLERS:
                raise ValueError(f"hint references unknown backtrack handler: {spec.backtrack}")
            return HintSettings(
                do_not=frozenset(spec.do_not),
                trials=spec.trials,
                backtrack=spec.backtrack,
                replacement=spec.backtrack is not None,
            )
    return EMPTY_SETTINGS


def fold_override_hints(settings: HintSettings, overrides: list[OverrideHint]) -> HintSettings:
    """Left fold in registration order; each result feeds the next transformer."""
    for override in overrides:
        settings = override.transform(settings)
    return settings


def testing_override() -> OverrideHint:
    """Attach the counterexample-driven backtrack handler, keeping any
    user-provided do-not set and trial override intact."""

    def transform(settings: HintSettings) -> HintSettings:
        if settings.backtrack is not None:
            return settings
        return replace(settings, backtrack="test-gen-checkpoint", replacement=True)

    return OverrideHint("testing-override", transform)


def test_gen_checkpoint(processor, children, goal, world, config: TestConfig, history) -> BacktrackOutcome:
    """After a generalization, test the first child with a deterministic seed;
    a counterexample discards the children and disables generalization for
    this goal. Other processes are left alone."""
    if processor != "generalize" or not children:
        return BacktrackOutcome("keep")
    from .clauses import clause_to_term
    from .history import clause_vars
    from .testgen import extract_restrictions, run_trials

    child = children[0]
    child_vars = clause_vars(child)
    own = extract_restrictions(child, world)
    parent_acc = history.accumulated_type_alist(goal.id, world)
    alist = {}
    for v in child_vars:
        restrictions = [r for r in own.get(v, ()) if r != "all"]
        for r in parent_acc.get(v, ()):
            if r != "all" and r not in restrictions:
                restrictions.append(r)
        alist[v] = tuple(restrictions) if restrictions else ("all",)
    trials = goal.settings.trials if goal.settings.trials is not None else config.trials
    probe_config = replace(config, trials=trials)
    report = run_trials(clause_to_term(child), alist, probe_config, world, seed=config.seed, goal_id=goal.id)
    if report.falsified:
        return BacktrackOutcome(
            "redo",
            settings=goal.settings.extend_do_not(["generalize"]),
            report=report,
            note="generalization refuted by testing",
        )
    return BacktrackOutcome("keep", report=report)


def _noop_handler(processor, children, goal, world, config, history) -> BacktrackOutcome:
    return BacktrackOutcome("keep")


HANDLERS: dict[str, Callable] = {
    "test-gen-checkpoint": test_gen_checkpoint,
    "none": _noop_handler,
}


def apply_backtrack(
    handler_name: Optional[str], processor: str, children, goal, world, config, history
) -> BacktrackOutcome:
    """Run the goal's backtrack handler, if any. Handler failures never abort
    a proof: they are logged and treated as keep."""
    if handler_name is None:
        return BacktrackOutcome("keep")
    handler = HANDLERS.get(handler_name)
    if handler is None:
        return BacktrackOutcome("keep", note=f"unknown backtrack handler {handler_name}; ignored")
    try:
        outcome = handler(processor, children, goal, world, config, history)
    except Exception as e:  # a broken handler must not kill the attempt
        return BacktrackOutcome("keep", note=f"backtrack handler error: {e}")
    if outcome.action == "redo" and outcome.settings is not None:
        # redo settings must extend the goal's prior settings
        if not goal.settings.do_not <= outcome.settings.do_not:
            outcome.settings = outcome.settings.extend_do_not(goal.settings.do_not)
    return outcome
