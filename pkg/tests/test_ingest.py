import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goalrel.ingest import (
    HEADER,
    RONALDO_SPEC,
    FixtureSpec,
    IngestConfig,
    IngestError,
    dataset_to_csv,
    generate_fixture,
    load_csv,
    read_csv_text,
    write_csv,
)
from goalrel.model import GoalMode, validate_dataset

HEAD = ",".join(HEADER) + "\n"


def parse(body, strict=True):
    return read_csv_text(HEAD + body, "p", path="f.csv", strict=strict)


def test_goal_row():
    ds = parse("M001,2002-03,23,0,5,\n")
    (obs,) = ds.observations
    assert obs.duration_minutes == 23
    assert not obs.censored
    assert obs.mode is GoalMode.RightFootedKick
    assert (ds.games_played, ds.games_with_goal) == (1, 1)


def test_censored_row():
    ds = parse("M002,2002-03,90,1,,\n")
    (obs,) = ds.observations
    assert obs.censored and obs.mode is None and obs.duration_minutes == 90
    assert (ds.games_played, ds.games_with_goal) == (1, 0)


def test_mixed_file_counts_and_order():
    ds = parse(
        "M1,2002-03,12,0,1,\n"
        "M1,2002-03,45,0,head header,45+1\n"
        "M2,2002-03,64,1,,\n"
        "M3,2003-04,88,0,LeftFootedKick,\n"
    )
    assert [o.match_id for o in ds.observations] == ["M1", "M1", "M2", "M3"]
    assert (ds.games_played, ds.games_with_goal) == (3, 2)
    assert ds.observations[1].raw_minute_label == "45+1"
    assert validate_dataset(ds) == []


@pytest.mark.parametrize(
    "row, field",
    [
        ("M1,2002-03,23,0,7,", "mode"),
        ("M1,2002-03,abc,0,5,", "minute"),
        ("M1,2002-03,0,1,,", "minute"),
        ("M1,2002-03,121,1,,", "minute"),
        ("M1,2002-03,23,0,5", "row"),
        ("M1,2002-03,23,2,5,", "censored"),
        ("M1,2002-03,90,1,3,", "mode"),
        ("M1,2002-03,23,0,,", "mode"),
        (",2002-03,23,0,5,", "match_id"),
    ],
)
def test_malformed_rows(row, field):
    with pytest.raises(IngestError) as info:
        parse("M0,2002-03,90,1,,\n" + row + "\n")
    assert info.value.row == 3
    assert info.value.field == field
    assert "row 3" in str(info.value) and "f.csv" in str(info.value)


def test_duplicate_censored_record():
    with pytest.raises(IngestError) as info:
        parse("M1,2002-03,90,1,,\nM1,2002-03,90,1,,\n")
    assert info.value.row == 3


def test_censored_record_in_scoring_match():
    with pytest.raises(IngestError):
        parse("M1,2002-03,10,0,1,\nM1,2002-03,90,1,,\n")


def test_non_strict_collects_every_error():
    with pytest.raises(IngestError) as info:
        parse("M1,x,abc,0,5,\nM2,x,90,1,9,\nM3,x,50,1,,\n", strict=False)
    assert [e.row for e in info.value.errors] == [2, 3]


def test_bad_header():
    with pytest.raises(IngestError) as info:
        read_csv_text("match,season,minute\n", "p")
    assert info.value.field == "header"
    with pytest.raises(IngestError):
        read_csv_text("", "p")


def test_missing_file(tmp_path):
    with pytest.raises(IngestError, match="not found"):
        load_csv(IngestConfig(str(tmp_path / "nope.csv")))
    with pytest.raises(ValueError):
        IngestConfig("")


def test_load_uses_file_stem_as_name(tmp_path):
    p = tmp_path / "someone.csv"
    p.write_text(HEAD + "M1,2010-11,30,0,2,\n", encoding="utf-8")
    assert load_csv(IngestConfig(str(p))).player_name == "someone"
    assert load_csv(IngestConfig(str(p), "Named")).player_name == "Named"


def test_fixture_matches_published_counts(ronaldo):
    counts = ronaldo.mode_counts()
    assert [counts[m] for m in GoalMode] == [137, 136, 57, 11, 303, 143]
    assert validate_dataset(ronaldo) == []


def test_fixture_deterministic():
    assert dataset_to_csv(generate_fixture(RONALDO_SPEC)) == dataset_to_csv(generate_fixture(RONALDO_SPEC))


def test_zero_goal_fixture():
    ds = generate_fixture(FixtureSpec(10, 0, {}))
    assert ds.n_censored == 10 and ds.n_uncensored == 0
    assert validate_dataset(ds) == []


def test_fixture_minute_distribution():
    spec = FixtureSpec(20, 20, {GoalMode.PenaltyKick: 30}, goal_minute_distribution={45: 1.0, 90: 3.0},
                       censored_minute_distribution={60: 1.0})
    ds = generate_fixture(spec)
    assert {o.duration_minutes for o in ds.observations} <= {45.0, 90.0}


@pytest.mark.parametrize(
    "spec",
    [
        FixtureSpec(5, 6, {GoalMode.PenaltyKick: 10}),
        FixtureSpec(5, 3, {GoalMode.PenaltyKick: 2}),
        FixtureSpec(5, 0, {GoalMode.PenaltyKick: 2}),
        FixtureSpec(5, 2, {GoalMode.PenaltyKick: 2}, goal_minute_distribution={130: 1.0}),
    ],
)
def test_infeasible_fixture(spec):
    with pytest.raises(ValueError):
        generate_fixture(spec)


@st.composite
def specs(draw):
    games = draw(st.integers(1, 60))
    scoring = draw(st.integers(0, games))
    extra = draw(st.lists(st.integers(0, 8), min_size=6, max_size=6)) if scoring else [0] * 6
    goals = {GoalMode(i + 1): n for i, n in enumerate(extra)}
    # top up so every scoring game gets at least one goal
    goals[GoalMode.RightFootedKick] += max(0, scoring - sum(extra))
    return FixtureSpec(games, scoring, goals, seed=draw(st.integers(0, 2**31)))


@given(specs())
@settings(max_examples=60)
def test_fixtures_always_valid(spec):
    assert validate_dataset(generate_fixture(spec)) == []


@given(specs())
@settings(max_examples=30, deadline=None)
def test_write_then_load_is_identity(tmp_path_factory, spec):
    ds = generate_fixture(spec)
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_csv(ds, path)
    back = load_csv(IngestConfig(str(path), ds.player_name))
    assert back == ds


def test_round_trip_keeps_labels_and_fractions(tmp_path):
    ds = parse("M1,2002-03,45,0,2,45+2\nM2,2002-03,37.5,1,,\n")
    p = tmp_path / "x.csv"
    write_csv(ds, p)
    assert load_csv(IngestConfig(str(p), "p")) == ds
