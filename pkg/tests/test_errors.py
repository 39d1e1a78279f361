# ABOUTME: Tests for the exception hierarchy
# ABOUTME: Exit codes and messages carried by each error

import pytest

from app.errors import (
    BlowUpError,
    ConditioningError,
    NumericalDomainError,
    NumericalError,
    ReferencePrecisionError,
    UsageError,
)


def test_usage_error_is_value_error():
    """Precondition failures can be caught as ValueError"""
    with pytest.raises(ValueError):
        raise UsageError("bad h")
    assert UsageError.exit_code == 1


@pytest.mark.parametrize("error_class", [NumericalError, BlowUpError, ReferencePrecisionError, NumericalDomainError])
def test_numerical_errors_exit_two(error_class):
    """All numerical failures map to exit code 2"""
    assert issubclass(error_class, ConditioningError)
    assert error_class.exit_code == 2


def test_blow_up_message_names_step():
    """at_step tags the copy without touching the original"""
    error = BlowUpError(1.5, "euler", 0.1)
    tagged = error.at_step(15)

    assert error.step_index is None
    assert tagged.step_index == 15
    assert "euler blew up at step 15" in str(tagged)


def test_domain_error_message():
    """Domain errors name the system, time and state"""
    error = NumericalDomainError("vdp", 0.5, [1.0, 2.0], "jacobian")

    assert error.x == [1.0, 2.0]
    assert "jacobian of system 'vdp' is not finite" in str(error)
