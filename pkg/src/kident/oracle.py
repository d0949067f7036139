"""Unreliable CI oracle simulation.

An oracle wraps a ground-truth answer table together with an error model
that corrupts at most k answers. Errors are committed up-front: the
oracle serves bits from one fixed corrupted table, so asking the same
query twice always returns the same answer. The adaptive adversary of the
query-lower-bound game lives in ``kident.adversary`` instead.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .tables import AnswerTable, QueryKey, apply_flips, load_table, query_index


@dataclass(frozen=True)
class NoErrors:
    pass


@dataclass(frozen=True)
class ExplicitFlips:
    indices: frozenset

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", frozenset(self.indices))


@dataclass(frozen=True)
class RandomFlips:
    count: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("flip count must be >= 0")


ErrorModel = Union[NoErrors, ExplicitFlips, RandomFlips]


def _select_flips(truth: AnswerTable, model: ErrorModel, k: int) -> frozenset:
    if isinstance(model, NoErrors):
        return frozenset()
    if isinstance(model, ExplicitFlips):
        if len(model.indices) > k:
            raise ValueError(f"{len(model.indices)} flips exceed k={k}")
        for i in model.indices:
            if not 0 <= i < truth.size:
                raise ValueError(f"flip index {i} out of range")
        return model.indices
    if isinstance(model, RandomFlips):
        if model.count > k:
            raise ValueError(f"{model.count} flips exceed k={k}")
        rng = random.Random(model.seed)
        return frozenset(rng.sample(range(truth.size), model.count))
    raise TypeError(f"unknown error model {model!r}")


@dataclass
class OracleInstance:
    """A queryable corrupted table with a query log."""

    truth: AnswerTable
    k: int
    flipped: frozenset
    effective: AnswerTable
    log: list = field(default_factory=list)

    @property
    def query_count(self) -> int:
        return len(self.log)

    def query(self, key: QueryKey) -> int:
        idx = query_index(self.truth.n, key)
        answer = self.effective.get(idx)
        self.log.append((key, answer))
        return answer

    def full_table(self) -> AnswerTable:
        return self.effective


def make_oracle(truth: AnswerTable, model: ErrorModel, k: int) -> OracleInstance:
    if k < 0:
        raise ValueError("k must be >= 0")
    flips = _select_flips(truth, model, k)
    return OracleInstance(
        truth=truth,
        k=k,
        flipped=flips,
        effective=apply_flips(truth, flips),
    )


def oracle_from_json(data: dict, base_dir: Path | str = ".") -> OracleInstance:
    """Build an oracle from its JSON description.

    Expected shape: ``{"truth": <table file>, "k": <int>, "model":
    {"type": "explicit"|"random"|"none", ...}}`` where explicit models
    carry ``flips`` (index list), random ones ``count`` and ``seed``.
    The truth path is resolved relative to ``base_dir``.
    """
    truth_path = Path(base_dir) / data["truth"]
    truth = load_table(truth_path)
    k = int(data["k"])
    mspec = data.get("model", {"type": "none"})
    mtype = mspec.get("type", "none")
    if mtype == "none":
        model: ErrorModel = NoErrors()
    elif mtype == "explicit":
        model = ExplicitFlips(frozenset(int(i) for i in mspec["flips"]))
    elif mtype == "random":
        model = RandomFlips(int(mspec["count"]), int(mspec.get("seed", 0)))
    else:
        raise ValueError(f"unknown error model type {mtype!r}")
    return make_oracle(truth, model, k)


def load_oracle(path) -> OracleInstance:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        return oracle_from_json(json.load(fh), base_dir=path.parent)
