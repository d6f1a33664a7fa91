from __future__ import annotations

import pytest

from votematch.election import (Action, ControlCertificate, ControlInstance, Election, Rule, Vote,
                                apply_control, certificate_wins, format_instance, make_vote,
                                parse_instance, score, winners)
from votematch.errors import ContractError, ParseError, StructureError
from votematch.harness.fixtures import shortcut_election

CANDS = ("p", "a", "b")


def test_first_last_scores_top_plus_bottom_minus():
    votes = [Vote.parse("a>p>b"), Vote.parse("p>b>a")]
    assert score(votes, Rule.FIRST_LAST) == {"a": 0, "p": 1, "b": -1}


def test_two_approval_scores_top_two():
    votes = [Vote.parse("a>p>b"), Vote.parse("p>b>a")]
    assert score(votes, Rule.TWO_APPROVAL) == {"a": 1, "p": 2, "b": 1}


def test_score_on_top_of_base():
    assert score([Vote.parse("a>p>b")], Rule.FIRST_LAST, base={"p": 2, "a": 0, "b": 0}) == {
        "p": 2, "a": 1, "b": -1}


def test_score_needs_candidates_for_empty_profile():
    with pytest.raises(StructureError):
        score([], Rule.FIRST_LAST)
    assert score([], Rule.FIRST_LAST, CANDS) == {"p": 0, "a": 0, "b": 0}


def test_winners_allow_ties():
    assert winners({"p": 1, "a": 1, "b": 0}) == {"p", "a"}


def test_make_vote_places_extremes():
    assert make_vote("b", "a", CANDS).ranking == ("b", "p", "a")
    assert make_vote("b", "a", ("p", "a", "b", "c"), second="c").ranking == ("b", "c", "p", "a")


def test_vote_rejects_repeats():
    with pytest.raises(StructureError):
        Vote(("a", "a"))


def test_election_rejects_partial_rankings():
    with pytest.raises(StructureError):
        Election(CANDS, (Vote(("a", "p")),))


def test_apply_control_enforces_exact_budget():
    inst = shortcut_election()
    with pytest.raises(ContractError):
        apply_control(inst, (), (0,))
    election = apply_control(inst, (), (0, 1))
    assert len(election.registered) == 6
    assert len(election.unregistered) == 3


def test_adding_cannot_remove():
    with pytest.raises(ContractError):
        apply_control(shortcut_election(), (0,), (0, 1))


def test_replacement_must_balance():
    inst = shortcut_election().with_changes(action=Action.REPLACE, exact=False)
    with pytest.raises(ContractError):
        apply_control(inst, (0,), (0, 1))


def test_certificate_wins_on_known_witness():
    inst = shortcut_election()
    assert certificate_wins(inst, ControlCertificate((), (0, 1)))
    assert not certificate_wins(inst, ControlCertificate((), (3, 4)))


def test_certificate_indices_are_sorted():
    assert ControlCertificate((2, 0), (3, 1)) == ControlCertificate((0, 2), (1, 3))


def test_problem_names():
    inst = shortcut_election()
    assert inst.problem_name() == "FL-CCAV!"
    assert inst.with_changes(rule=Rule.TWO_APPROVAL, action=Action.REPLACE,
                             exact=False).problem_name() == "2App-CCRV"


def test_instance_validation():
    with pytest.raises(StructureError):
        ControlInstance(Election(CANDS), Rule.FIRST_LAST, "z", 0, Action.ADD)
    with pytest.raises(StructureError):
        ControlInstance(Election(CANDS), Rule.FIRST_LAST, "p", -1, Action.ADD)


def test_text_round_trip():
    inst = shortcut_election()
    assert parse_instance(format_instance(inst)) == inst


def test_parse_ignores_comments_and_blank_lines():
    text = "# header\n\n" + format_instance(shortcut_election()).replace("\n", "  # note\n", 1)
    assert parse_instance(text) == shortcut_election()


@pytest.mark.parametrize("mutate, message", [
    (lambda t: t.replace("rule: firstlast", "rule: borda"), "unknown rule"),
    (lambda t: t.replace("budget: 2", "budget: two"), "budget"),
    (lambda t: t.replace("exact: true", "exact: maybe"), "exact"),
    (lambda t: t.replace("preferred: p\n", ""), "missing header"),
    (lambda t: t + "R: a>b\n", "does not rank"),
    (lambda t: t + "Q: a>b>c>p\n", "unknown key"),
    (lambda t: t + "budget: 3\n", "duplicate"),
    (lambda t: t + "just words\n", "key: value"),
])
def test_parse_errors(mutate, message):
    with pytest.raises(ParseError, match=message):
        parse_instance(mutate(format_instance(shortcut_election())))
