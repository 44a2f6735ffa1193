"""Token catalog and matchup matrix tests."""

import io
from importlib import resources

import pytest

from moraba.catalog import (
    MATRIX_HEADER,
    MatchupMatrix,
    MatrixFormatError,
    RISKY_DEFENSES,
    SAFE_DEFENSES,
    Token,
    default_catalog,
    default_matrix,
    judge_verdict,
    load_matrix,
    matrix_to_text,
    parse_matrix,
    save_matrix,
    token_sort_key,
    validate_matrix,
)
from moraba.roles import Role

CATALOG = default_catalog()
MATRIX = default_matrix(CATALOG)


def test_catalog_shape():
    assert len(CATALOG.attack_tokens) == 13
    assert len(CATALOG.defend_tokens) == 13
    assert CATALOG.attack_ids == tuple(f"A{i}" for i in range(1, 14))
    assert CATALOG.defend_ids == tuple(f"D{i}" for i in range(1, 14))
    for token in CATALOG.attack_tokens + CATALOG.defend_tokens:
        assert token.label and token.definition


def test_shared_definition_kept():
    assert CATALOG.get("A5").definition == CATALOG.get("A6").definition == "Malicious directory"


def test_token_role_prefix_enforced():
    with pytest.raises(ValueError):
        Token("D1", Role.ATTACKER, "x", "y")


def test_token_sort_key_is_numeric():
    ids = ["A10", "A2", "A1", "A13"]
    assert sorted(ids, key=token_sort_key) == ["A1", "A2", "A10", "A13"]


def test_default_matrix_complete():
    assert len(MATRIX) == 169
    report = validate_matrix(MATRIX, CATALOG)
    assert report.ok
    assert report.summary().splitlines()[0] == "169/169 pairs"


def test_default_rule_winner_depends_on_defense():
    for a in CATALOG.attack_ids:
        for d in CATALOG.defend_ids:
            expected = Role.ATTACKER if d in RISKY_DEFENSES else Role.DEFENDER
            assert MATRIX.lookup(a, d).winner is expected
    assert SAFE_DEFENSES | RISKY_DEFENSES == set(CATALOG.defend_ids)


@pytest.mark.parametrize(
    "attack,defense,winner,message",
    [
        ("A1", "D5", Role.DEFENDER, "Never trust malicious emails"),
        ("A11", "D1", Role.DEFENDER, "Keep denying malicious links"),
        ("A3", "D4", Role.DEFENDER, "Identification of malicious chats"),
        ("A2", "D7", Role.ATTACKER, "The defender trusted a malicious call"),
        ("A7", "D12", Role.DEFENDER, "Secured connection suggested"),
        ("A8", "D4", Role.DEFENDER, "Malicious access identified"),
        ("A10", "D6", Role.ATTACKER, "Data loss occurred"),
        ("A11", "D8", Role.ATTACKER, "Malicious link used"),
    ],
)
def test_handwritten_verdicts(attack, defense, winner, message):
    verdict = judge_verdict(MATRIX, attack, defense)
    assert verdict.winner is winner
    assert verdict.feedback == message


def test_templated_messages():
    assert (
        MATRIX.lookup("A2", "D1").feedback
        == "Effective defense: Blocking/denying actions against Malicious phone call"
    )
    assert MATRIX.lookup("A1", "D7").feedback == "Email succeeded: Malicious e-mail"


def test_unknown_pair_rejected():
    with pytest.raises(ValueError):
        MATRIX.lookup("A1", "D14")


def test_save_load_round_trip(tmp_path):
    path = tmp_path / "matrix.tsv"
    save_matrix(MATRIX, path)
    loaded = load_matrix(path, CATALOG)
    assert list(loaded.pairs()) == list(MATRIX.pairs())


def test_text_round_trip():
    text = matrix_to_text(MATRIX)
    assert text.startswith(MATRIX_HEADER + "\n")
    loaded = load_matrix(io.StringIO(text), CATALOG)
    assert list(loaded.pairs()) == list(MATRIX.pairs())


def test_missing_pair_named_on_load():
    entries = {(a, d): v for a, d, v in MATRIX.pairs() if (a, d) != ("A3", "D9")}
    text = matrix_to_text(MatchupMatrix(entries))
    with pytest.raises(MatrixFormatError, match=r"missing pair \(A3, D9\)"):
        load_matrix(io.StringIO(text), CATALOG)
    report = validate_matrix(MatchupMatrix(entries), CATALOG)
    assert report.missing == [("A3", "D9")]


def test_duplicate_pair_named_with_line():
    text = matrix_to_text(MATRIX)
    text += "A1\tD1\tattacker\tagain\n"
    with pytest.raises(MatrixFormatError, match=r"line 171: duplicate pair \(A1, D1\)"):
        parse_matrix(io.StringIO(text))


def test_unknown_token_reported():
    entries = {(a, d): v for a, d, v in MATRIX.pairs()}
    entries[("A14", "D1")] = MATRIX.lookup("A1", "D1")
    report = validate_matrix(MatchupMatrix(entries), CATALOG)
    assert report.unknown_ids == ["A14"]
    assert not report.ok


def test_bad_header_rejected():
    with pytest.raises(MatrixFormatError, match="line 1"):
        parse_matrix(io.StringIO("something else\n"))


def test_bad_winner_rejected():
    text = MATRIX_HEADER + "\nA1\tD1\tnobody\tmsg\n"
    with pytest.raises(MatrixFormatError, match="line 2"):
        parse_matrix(io.StringIO(text))


def test_empty_message_rejected():
    text = MATRIX_HEADER + "\nA1\tD1\tattacker\t\n"
    with pytest.raises(MatrixFormatError, match="line 2"):
        parse_matrix(io.StringIO(text))


def test_field_count_checked():
    text = MATRIX_HEADER + "\nA1\tD1\tattacker\n"
    with pytest.raises(MatrixFormatError, match="line 2"):
        parse_matrix(io.StringIO(text))


def test_shipped_asset_matches_the_code():
    # The packaged TSV is generated from default_matrix(); keep them in step.
    asset = resources.files("moraba").joinpath("assets/default_matrix.tsv").read_text(encoding="utf-8")
    assert asset == matrix_to_text(default_matrix())
    loaded = load_matrix(io.StringIO(asset))
    assert len(loaded) == 169
