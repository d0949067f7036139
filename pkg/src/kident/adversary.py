"""Query game between a learner and an adaptive adversarial oracle.

The promise instance has two candidate graphs whose answer tables differ
in exactly one query, and an error budget of k=1. The adversary answers
lazily but must stay within distance k of at least one candidate's
table, no matter how it later fills in the queries the learner skipped.
A learner's decision counts as sound only if every adversary-reachable
completion of the transcript classifies the instance the same way; the
game records ``fooled`` otherwise. Querying everything makes the
completion unique, which is exactly why stopping early loses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable

from .bits import full_mask
from .graphs import Graph, graph_to_json, named_graph, make_dag
from .tables import QueryKey, query_index, table_size
from .tables import _bayes_bits, _markov_bits

DECISION_G1 = "g1"
DECISION_G2 = "g2"
DECISION_NOT_UNIQUE = "not_unique"
DECISION_NONE = "none"


@dataclass(frozen=True)
class PromiseInstance:
    """Two candidates, one distinguishing query, error budget k."""

    mode: str
    n: int
    g1: Graph
    g2: Graph
    table1: int
    table2: int
    critical_index: int
    k: int = 1

    @property
    def size(self) -> int:
        return table_size(self.n)

    def with_k(self, k: int) -> "PromiseInstance":
        return replace(self, k=k)


def _single_diff_index(n: int, bits1: int, bits2: int, expected: int) -> None:
    diff = bits1 ^ bits2
    if diff.bit_count() != 1 or diff.bit_length() - 1 != expected:
        raise ValueError("candidate tables do not differ in exactly the critical query")


def promise_mn(n: int) -> PromiseInstance:
    """Two-hub undirected pair; only the fully-conditioned hub query differs."""
    if n < 3:
        raise ValueError("promise instances need n >= 3")
    g1 = named_graph("hub_g1", n)
    g2 = named_graph("hub_g2", n)
    bits1 = _markov_bits(n, g1.adj)
    bits2 = _markov_bits(n, g2.adj)
    critical = query_index(n, QueryKey(0, 1, full_mask(n) & ~0b11))
    _single_diff_index(n, bits1, bits2, critical)
    return PromiseInstance("mn", n, g1, g2, bits1, bits2, critical)


def promise_bn(n: int) -> PromiseInstance:
    """Fork-into-path DAG pair; only the marginal query on the roots differs."""
    if n < 3:
        raise ValueError("promise instances need n >= 3")
    d1 = named_graph("d1", n)
    d2 = make_dag(n, list(d1.arcs()) + [(0, 1)])
    bits1 = _bayes_bits(n, d1.parents)
    bits2 = _bayes_bits(n, d2.parents)
    critical = query_index(n, QueryKey(0, 1, 0))
    _single_diff_index(n, bits1, bits2, critical)
    return PromiseInstance("bn", n, d1, d2, bits1, bits2, critical)


def _classify(d1: int, d2: int, k: int) -> str:
    in1 = d1 <= k
    in2 = d2 <= k
    if in1 and in2:
        return DECISION_NOT_UNIQUE
    if in1:
        return DECISION_G1
    if in2:
        return DECISION_G2
    return DECISION_NONE


def possible_classifications(inst: PromiseInstance, answered: dict) -> frozenset:
    """Classifications the adversary can still realize.

    The adversary completes the unanswered queries subject to ending
    within distance k of at least one candidate. Flipping an unanswered
    non-critical query moves both distances up together; the critical
    query, if unanswered, can favor either side.
    """
    e1 = e2 = 0
    for idx, ans in answered.items():
        e1 += ans != inst.table1 >> idx & 1
        e2 += ans != inst.table2 >> idx & 1
    crit_done = inst.critical_index in answered
    unanswered_noncrit = (inst.size - 1) - (len(answered) - crit_done)
    options = ((0, 0),) if crit_done else ((0, 1), (1, 0))
    out = set()
    for flips in range(unanswered_noncrit + 1):
        if e1 + flips > inst.k and e2 + flips > inst.k:
            break
        for a, b in options:
            d1, d2 = e1 + flips + a, e2 + flips + b
            if min(d1, d2) <= inst.k:
                out.add(_classify(d1, d2, inst.k))
    return frozenset(out)


# -- adversary policies ------------------------------------------------------
# A policy maps (instance, answers so far, queried index) to an answer
# bit. It must be a pure function of those inputs so transcripts replay.


def truthful_g1(inst: PromiseInstance, answered: dict, idx: int) -> int:
    """Serve candidate 1's table verbatim."""
    return inst.table1 >> idx & 1


def late_error(inst: PromiseInstance, answered: dict, idx: int) -> int:
    """Stay truthful until the last non-critical query, then flip it.

    With budget k=0 there is no error to spend, so this degenerates to
    the truthful policy.
    """
    truth = inst.table1 >> idx & 1
    if inst.k < 1 or idx == inst.critical_index:
        return truth
    spent = any(
        ans != inst.table1 >> i & 1 for i, ans in answered.items()
    )
    if spent:
        return truth
    crit_done = inst.critical_index in answered
    unanswered_noncrit = (inst.size - 1) - (len(answered) - crit_done)
    if unanswered_noncrit == 1:  # this query is the last non-critical one
        return 1 - truth
    return truth


POLICIES: dict[str, Callable] = {
    "truthful-g1": truthful_g1,
    "late-error": late_error,
}


# -- learner strategies ------------------------------------------------------
# A strategy maps (instance, history tuple) to ("query", index) or
# ("decide", decision string).


def exhaustive_strategy(inst: PromiseInstance, history: tuple):
    """Query every index in canonical order, then classify the evidence."""
    if len(history) < inst.size:
        return ("query", len(history))
    d1 = d2 = 0
    for idx, ans in history:
        d1 += ans != inst.table1 >> idx & 1
        d2 += ans != inst.table2 >> idx & 1
    return ("decide", _classify(d1, d2, inst.k))


def early_stop_strategy(inst: PromiseInstance, history: tuple):
    """Ask only the distinguishing query and trust the rest to be clean."""
    if not history:
        return ("query", inst.critical_index)
    _, ans = history[0]
    matched = DECISION_G1 if ans == inst.table1 >> inst.critical_index & 1 else DECISION_G2
    if inst.k == 0:
        return ("decide", matched)
    # with one error allowed, the matching answer leaves both candidates
    # in play (assuming no further errors), so report a tie
    return ("decide", DECISION_NOT_UNIQUE)


STRATEGIES: dict[str, Callable] = {
    "exhaustive": exhaustive_strategy,
    "early-stop": early_stop_strategy,
}


@dataclass(frozen=True)
class GameTranscript:
    mode: str
    n: int
    k: int
    entries: tuple
    decision: str
    achievable: frozenset
    fooled: bool

    @property
    def queries_used(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "k": self.k,
            "queries_used": self.queries_used,
            "decision": self.decision,
            "achievable": sorted(self.achievable),
            "fooled": self.fooled,
            "entries": [[idx, ans] for idx, ans in self.entries],
        }


def run_game(
    strategy: Callable, inst: PromiseInstance, adversary: Callable
) -> GameTranscript:
    """Drive one game to the learner's decision.

    Duplicate queries are served from the transcript without growing it.
    The loop aborts if the strategy neither decides nor asks anything new
    for longer than the whole query space allows.
    """
    answered: dict[int, int] = {}
    entries: list[tuple[int, int]] = []
    for _ in range(2 * inst.size + 8):
        action = strategy(inst, tuple(entries))
        kind = action[0]
        if kind == "decide":
            decision = action[1]
            achievable = possible_classifications(inst, answered)
            return GameTranscript(
                mode=inst.mode,
                n=inst.n,
                k=inst.k,
                entries=tuple(entries),
                decision=decision,
                achievable=achievable,
                fooled=achievable != frozenset((decision,)),
            )
        if kind != "query":
            raise ValueError(f"strategy returned unknown action {action!r}")
        idx = action[1]
        if not 0 <= idx < inst.size:
            raise ValueError(f"query index {idx} out of range")
        if idx not in answered:
            ans = adversary(inst, dict(answered), idx)
            answered[idx] = ans
            entries.append((idx, ans))
    raise RuntimeError("strategy exceeded the query budget without deciding")


def transcript_to_json_str(t: GameTranscript, inst: PromiseInstance) -> str:
    payload = t.to_json()
    payload["candidates"] = [graph_to_json(inst.g1), graph_to_json(inst.g2)]
    payload["critical_index"] = inst.critical_index
    return json.dumps(payload, indent=2)
