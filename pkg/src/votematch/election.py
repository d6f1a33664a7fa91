"""Elections, First-Last / 2-Approval scoring and voter-control instances.

Candidates are opaque strings.  Votes are stored as full rankings even though
the two rules only look at the extreme positions.  The preferred candidate
succeeds when it is among the co-winners (nonunique-winner model).
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import ContractError, ParseError, StructureError


class Rule(str, Enum):
    FIRST_LAST = "firstlast"
    TWO_APPROVAL = "2approval"


class Action(str, Enum):
    ADD = "add"
    REPLACE = "replace"


@dataclass(frozen=True)
class Vote:
    ranking: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.ranking)) != len(self.ranking):
            raise StructureError(f"vote ranks a candidate twice: {self}")

    @classmethod
    def parse(cls, text: str) -> Vote:
        return cls(tuple(part.strip() for part in text.split(">")))

    @property
    def first(self) -> str:
        return self.ranking[0]

    @property
    def last(self) -> str:
        return self.ranking[-1]

    @property
    def top_two(self) -> tuple[str, str]:
        return self.ranking[0], self.ranking[1]

    def __str__(self) -> str:
        return ">".join(self.ranking)


def make_vote(first: str, last: str | None, candidates: Sequence[str],
              second: str | None = None) -> Vote:
    """Build a full ranking with the given extreme positions.

    The remaining candidates fill the middle in the order of ``candidates``,
    which keeps generated instances deterministic.
    """
    head = [first] if second is None else [first, second]
    tail = [] if last is None else [last]
    fixed = set(head) | set(tail)
    middle = [c for c in candidates if c not in fixed]
    return Vote(tuple(head + middle + tail))


@dataclass(frozen=True)
class Election:
    candidates: tuple[str, ...]
    registered: tuple[Vote, ...] = ()
    unregistered: tuple[Vote, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "registered", tuple(self.registered))
        object.__setattr__(self, "unregistered", tuple(self.unregistered))
        if len(set(self.candidates)) != len(self.candidates):
            raise StructureError("candidate ids must be unique")
        expected = set(self.candidates)
        for vote in self.registered + self.unregistered:
            if len(vote.ranking) != len(self.candidates) or set(vote.ranking) != expected:
                raise StructureError(f"vote {vote} does not rank exactly the candidate set")


ScoreVector = dict[str, int]


def score(votes: Iterable[Vote], rule: Rule, candidates: Sequence[str] | None = None,
          base: Mapping[str, int] | None = None) -> ScoreVector:
    """Score ``votes`` under ``rule``, optionally on top of ``base`` scores.

    ``candidates`` is only needed when ``votes`` may be empty; otherwise it is
    taken from the first vote and every other vote must rank the same set.
    """
    votes = list(votes)
    if candidates is None:
        if base is not None:
            candidates = list(base)
        elif votes:
            candidates = list(votes[0].ranking)
        else:
            raise StructureError("cannot infer the candidate set from zero votes")
    scores = {c: 0 for c in candidates}
    if base is not None:
        for c, s in base.items():
            if c not in scores:
                raise StructureError(f"base score for unknown candidate {c!r}")
            scores[c] = s
    expected = set(scores)
    if votes and len(expected) < 2:
        raise StructureError(f"{rule.value} needs at least two candidates")
    for vote in votes:
        if len(vote.ranking) != len(expected) or set(vote.ranking) != expected:
            raise StructureError(f"vote {vote} is over a different candidate set")
        if rule is Rule.FIRST_LAST:
            scores[vote.first] += 1
            scores[vote.last] -= 1
        else:
            a, b = vote.top_two
            scores[a] += 1
            scores[b] += 1
    return scores


def winners(scores: Mapping[str, int]) -> frozenset[str]:
    if not scores:
        raise ContractError("winners of an empty score vector")
    best = max(scores.values())
    return frozenset(c for c, s in scores.items() if s == best)


@dataclass(frozen=True)
class ControlCertificate:
    """Indices of registered voters removed and unregistered voters added."""

    removed: tuple[int, ...] = ()
    added: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "removed", tuple(sorted(self.removed)))
        object.__setattr__(self, "added", tuple(sorted(self.added)))


@dataclass(frozen=True)
class ControlInstance:
    election: Election
    rule: Rule
    preferred: str
    budget: int
    action: Action
    exact: bool = False

    def __post_init__(self):
        if self.preferred not in self.election.candidates:
            raise StructureError(f"preferred candidate {self.preferred!r} is not a candidate")
        if self.budget < 0:
            raise StructureError("budget must be nonnegative")
        has_votes = self.election.registered or self.election.unregistered
        if has_votes and len(self.election.candidates) < 2:
            raise StructureError(f"{self.rule.value} needs at least two candidates")

    @property
    def candidates(self) -> tuple[str, ...]:
        return self.election.candidates

    @property
    def registered(self) -> tuple[Vote, ...]:
        return self.election.registered

    @property
    def unregistered(self) -> tuple[Vote, ...]:
        return self.election.unregistered

    def registered_scores(self) -> ScoreVector:
        return score(self.registered, self.rule, self.candidates)

    def preferred_wins(self, scores: Mapping[str, int] | None = None) -> bool:
        if scores is None:
            scores = self.registered_scores()
        return self.preferred in winners(scores)

    def problem_name(self) -> str:
        rule = "FL" if self.rule is Rule.FIRST_LAST else "2App"
        kind = "CCAV" if self.action is Action.ADD else "CCRV"
        return f"{rule}-{kind}{'!' if self.exact else ''}"

    def with_changes(self, **changes) -> ControlInstance:
        values = dict(election=self.election, rule=self.rule, preferred=self.preferred,
                      budget=self.budget, action=self.action, exact=self.exact)
        values.update(changes)
        return ControlInstance(**values)


def apply_control(instance: ControlInstance, chosen_out: Iterable[int],
                  chosen_in: Iterable[int]) -> Election:
    """Return the election with registered set (V - chosen_out) + chosen_in."""
    out = set(chosen_out)
    inn = set(chosen_in)
    nv, nw = len(instance.registered), len(instance.unregistered)
    if any(not 0 <= i < nv for i in out):
        raise ContractError("removed voter index out of range")
    if any(not 0 <= j < nw for j in inn):
        raise ContractError("added voter index out of range")
    if instance.action is Action.ADD:
        if out:
            raise ContractError("control by adding voters cannot remove voters")
        size = len(inn)
    else:
        if len(out) != len(inn):
            raise ContractError(f"replacement removes {len(out)} but adds {len(inn)} voters")
        size = len(inn)
    if instance.exact and size != instance.budget:
        raise ContractError(f"exact control must act on exactly {instance.budget} voters, got {size}")
    if not instance.exact and size > instance.budget:
        raise ContractError(f"control acts on {size} voters, budget is {instance.budget}")
    registered = [v for i, v in enumerate(instance.registered) if i not in out]
    registered += [instance.unregistered[j] for j in sorted(inn)]
    remaining = [w for j, w in enumerate(instance.unregistered) if j not in inn]
    return Election(instance.candidates, tuple(registered), tuple(remaining))


def certificate_wins(instance: ControlInstance, cert: ControlCertificate) -> bool:
    """Replay ``cert`` and report whether the preferred candidate then wins."""
    election = apply_control(instance, cert.removed, cert.added)
    scores = score(election.registered, instance.rule, election.candidates)
    return instance.preferred in winners(scores)


# -- text format ----------------------------------------------------------

_HEADER_KEYS = ("candidates", "rule", "preferred", "budget", "action", "exact")
_TOKEN = re.compile(r"^[^\s,>#=:]+$")


def parse_instance(text: str) -> ControlInstance:
    header: dict[str, tuple[str, int]] = {}
    registered: list[Vote] = []
    unregistered: list[Vote] = []
    vote_lines: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        key, value = key.strip(), value.strip()
        if key in ("R", "U"):
            vote_lines.append((lineno, key, value))
        elif key in _HEADER_KEYS:
            if key in header:
                raise ParseError(f"duplicate header {key!r}", lineno)
            header[key] = (value, lineno)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    for key in _HEADER_KEYS:
        if key not in header:
            raise ParseError(f"missing header {key!r}")

    value, lineno = header["candidates"]
    candidates = tuple(c.strip() for c in value.split(",")) if value else ()
    for c in candidates:
        if not _TOKEN.match(c):
            raise ParseError(f"bad candidate id {c!r}", lineno)
    value, lineno = header["rule"]
    try:
        rule = Rule(value.lower())
    except ValueError:
        raise ParseError(f"unknown rule {value!r}", lineno) from None
    preferred = header["preferred"][0]
    value, lineno = header["budget"]
    try:
        budget = int(value)
    except ValueError:
        raise ParseError(f"budget must be an integer, got {value!r}", lineno) from None
    value, lineno = header["action"]
    try:
        action = Action(value.lower())
    except ValueError:
        raise ParseError(f"unknown action {value!r}", lineno) from None
    value, lineno = header["exact"]
    if value.lower() not in ("true", "false"):
        raise ParseError(f"exact must be true or false, got {value!r}", lineno)
    exact = value.lower() == "true"

    for lineno, key, value in vote_lines:
        try:
            vote = Vote.parse(value)
        except StructureError as exc:
            raise ParseError(str(exc), lineno) from None
        if len(vote.ranking) != len(candidates) or set(vote.ranking) != set(candidates):
            raise ParseError(f"vote {value!r} does not rank exactly the candidates", lineno)
        (registered if key == "R" else unregistered).append(vote)
    try:
        return ControlInstance(Election(candidates, tuple(registered), tuple(unregistered)),
                               rule, preferred, budget, action, exact)
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def format_instance(instance: ControlInstance) -> str:
    lines = [
        f"candidates: {','.join(instance.candidates)}",
        f"rule: {instance.rule.value}",
        f"preferred: {instance.preferred}",
        f"budget: {instance.budget}",
        f"action: {instance.action.value}",
        f"exact: {'true' if instance.exact else 'false'}",
    ]
    lines += [f"R: {v}" for v in instance.registered]
    lines += [f"U: {v}" for v in instance.unregistered]
    return "\n".join(lines) + "\n"
