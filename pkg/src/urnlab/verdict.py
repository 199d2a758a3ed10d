"""Three-valued verdicts returned by every checker and verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

HOLDS = "holds"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    """Outcome of a property check.

    ``witness`` is set only for violations. ``checked`` counts the individual
    inequalities evaluated and ``skipped`` those left undecided on purpose
    (0/0 ratios, zero-probability windows). ``info`` carries free-form,
    JSON-serializable detail such as flags and exact values.
    """

    status: str
    name: str = ""
    witness: dict | None = None
    checked: int = 0
    skipped: int = 0
    info: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    @property
    def inconclusive(self) -> bool:
        return self.status == INCONCLUSIVE

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        out = {"status": self.status, "name": self.name,
               "checked": self.checked, "skipped": self.skipped}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.info:
            out["info"] = jsonable(self.info)
        return out


def holds(name="", checked=0, skipped=0, **info) -> Verdict:
    return Verdict(HOLDS, name, None, checked, skipped, info)


def violated(name, witness, checked=0, skipped=0, **info) -> Verdict:
    return Verdict(VIOLATED, name, witness, checked, skipped, info)


def inconclusive(name, reason, checked=0, skipped=0, **info) -> Verdict:
    info["reason"] = reason
    return Verdict(INCONCLUSIVE, name, None, checked, skipped, info)


def combine(name: str, verdicts, **info) -> Verdict:
    """Aggregate: first violation wins, then any inconclusive, else holds."""
    verdicts = list(verdicts)
    checked = sum(v.checked for v in verdicts)
    skipped = sum(v.skipped for v in verdicts)
    for v in verdicts:
        if v.violated:
            w = dict(v.witness or {})
            if v.name:
                w.setdefault("check", v.name)
            return Verdict(VIOLATED, name, w, checked, skipped, info)
    for v in verdicts:
        if v.inconclusive:
            info = dict(info, reason=v.info.get("reason", "inconclusive sub-check"))
            return Verdict(INCONCLUSIVE, name, None, checked, skipped, info)
    return Verdict(HOLDS, name, None, checked, skipped, info)


def jsonable(obj):
    """Recursively convert Fractions, tuples, sets and Verdicts to JSON types."""
    # local import: _rational has no dependency on this module
    from ._rational import fmt

    if isinstance(obj, Verdict):
        return obj.to_dict()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, int):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)):
                jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if hasattr(obj, "item"):  # numpy scalar
        return jsonable(obj.item())
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return obj


@dataclass
class Report:
    """Named collection of per-instance verdicts with an aggregate status.

    The aggregate holds iff every instance holds; a violation anywhere makes
    it violated, and otherwise any inconclusive instance makes it inconclusive.
    """

    name: str
    params: dict = field(default_factory=dict)
    instances: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, verdict: Verdict, **instance):
        self.instances.append(dict(instance, verdict=verdict))
        return verdict

    @property
    def verdicts(self) -> list:
        return [x["verdict"] for x in self.instances]

    @property
    def aggregate(self) -> Verdict:
        return combine(self.name, self.verdicts)

    @property
    def status(self) -> str:
        return self.aggregate.status

    @property
    def skipped(self) -> int:
        return sum(v.skipped for v in self.verdicts)

    def counts(self) -> dict:
        out = {HOLDS: 0, VIOLATED: 0, INCONCLUSIVE: 0}
        for v in self.verdicts:
            out[v.status] += 1
        return out

    def to_dict(self, instances: bool = True) -> dict:
        agg = self.aggregate
        out = {"name": self.name, "status": agg.status, "params": jsonable(self.params),
               "counts": self.counts(), "checked": agg.checked, "skipped": agg.skipped}
        if agg.witness is not None:
            out["witness"] = jsonable(agg.witness)
        if self.summary:
            out["summary"] = jsonable(self.summary)
        if instances:
            out["instances"] = [jsonable(x) for x in self.instances]
        return out
