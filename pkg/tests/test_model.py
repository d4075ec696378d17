import pytest

from goalrel.km import KMInput, fit_km
from goalrel.model import (
    GoalMode,
    Observation,
    PlayerDataset,
    evaluate_curve,
    stoppage_base,
    validate_dataset,
)


def test_goal_mode_codes():
    assert [m.value for m in GoalMode] == [1, 2, 3, 4, 5, 6]
    assert GoalMode(1) is GoalMode.PenaltyKick
    assert GoalMode(6) is GoalMode.LeftFootedKick


@pytest.mark.parametrize("text", ["5", 5, "RightFootedKick", "right_footed_kick", "Right Footed Kick"])
def test_goal_mode_parse(text):
    assert GoalMode.parse(text) is GoalMode.RightFootedKick


@pytest.mark.parametrize("bad", ["7", 0, "volley", ""])
def test_goal_mode_parse_rejects(bad):
    with pytest.raises(ValueError):
        GoalMode.parse(bad)


def test_stoppage_labels():
    assert stoppage_base("45+2") == 45
    assert stoppage_base("90+3") == 90
    assert stoppage_base("63") is None
    assert stoppage_base(None) is None
    obs = Observation("M1", "2002-03", 47, False, GoalMode.PenaltyKick, "45+2")
    assert obs.analysis_minutes == 45.0


def test_fixture_shaped_dataset_is_valid(ronaldo):
    assert validate_dataset(ronaldo) == []
    assert ronaldo.games_played == 1089
    assert ronaldo.games_with_goal == 525
    assert ronaldo.n_uncensored == 787
    assert ronaldo.n_censored == 564
    assert len(ronaldo.observations) == 1351


def test_empty_dataset_is_valid():
    assert validate_dataset(PlayerDataset("nobody", (), 0, 0)) == []


def test_censored_record_with_mode_is_reported():
    obs = (
        Observation("M1", "2002-03", 30, False, GoalMode.HeadHeader),
        Observation("M2", "2002-03", 90, True, GoalMode.PenaltyKick),
    )
    report = validate_dataset(PlayerDataset("x", obs, 2, 1))
    assert len(report) == 1
    assert report[0].index == 1
    assert report[0].field == "mode"


def test_count_violations():
    obs = (Observation("M1", "s", 90, True), Observation("M2", "s", 90, True))
    report = validate_dataset(PlayerDataset("x", obs, 3, 0))
    assert [v.field for v in report] == ["observations"]
    report = validate_dataset(PlayerDataset("x", (), 1, 2))
    assert "games_with_goal" in {v.field for v in report}


@pytest.mark.parametrize("minutes", [0, -3, 121, float("nan")])
def test_duration_bounds(minutes):
    obs = (Observation("M1", "s", minutes, True),)
    report = validate_dataset(PlayerDataset("x", obs, 1, 0))
    assert [v.field for v in report] == ["duration_minutes"]


def test_goal_without_mode_is_reported():
    obs = (Observation("M1", "s", 10, False),)
    assert [v.field for v in validate_dataset(PlayerDataset("x", obs, 1, 1))] == ["mode"]


@pytest.fixture
def two_step():
    # times [10, 30], estimates [2/3, 0]
    return fit_km(KMInput((10, 20, 30), (True, False, True)))


def test_evaluate_before_first_event(two_step):
    assert evaluate_curve(two_step, 0) == (1.0, 1.0, 1.0)
    assert evaluate_curve(two_step, 9.999)[0] == 1.0


def test_evaluate_between_and_at_events(two_step):
    assert evaluate_curve(two_step, 15)[0] == pytest.approx(2 / 3)
    assert evaluate_curve(two_step, 10)[0] == pytest.approx(2 / 3)
    assert evaluate_curve(two_step, 30)[0] == 0.0
    assert evaluate_curve(two_step, 29.999)[0] == pytest.approx(2 / 3)


def test_evaluate_rejects_negative(two_step):
    with pytest.raises(ValueError):
        evaluate_curve(two_step, -1)


def test_curve_arrays_are_read_only(two_step):
    with pytest.raises(ValueError):
        two_step.estimates[0] = 0.5
