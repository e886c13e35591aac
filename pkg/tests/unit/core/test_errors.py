"""Unit tests for wmm_lab.core.errors."""

import pytest

from wmm_lab.core.errors import (
    ConfigurationError,
    IdxMagicError,
    IdxParseError,
    InsufficientDataError,
    InvalidArgumentError,
    NotEnoughTrialsError,
    RecipeRangeError,
    TrainingDivergedError,
    WmmLabError,
)


class TestHierarchy:
    @pytest.mark.parametrize(
        "error",
        [InvalidArgumentError, ConfigurationError, RecipeRangeError, IdxParseError],
    )
    def test_input_errors_are_value_errors(self, error):
        assert issubclass(error, ValueError)
        assert issubclass(error, WmmLabError)

    def test_divergence_is_not_a_value_error(self):
        assert not issubclass(TrainingDivergedError, ValueError)


class TestPayloads:
    def test_idx_error_carries_offset(self):
        error = IdxMagicError("bad magic", offset=1)
        assert error.offset == 1
        assert str(error) == "bad magic (at byte offset 1)"

    def test_shortfall(self):
        assert InsufficientDataError("short", shortfall=3).shortfall == 3

    def test_trial_count(self):
        assert NotEnoughTrialsError("few", count=2).count == 2
