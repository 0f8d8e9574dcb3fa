"""Test cases for functional programming utilities."""

from expression import Error, Ok
from hypothesis import given
from hypothesis import strategies as st

from mergelab.utils.functional import sequence_results


def test_sequence_all_ok():
    assert sequence_results([Ok(1), Ok(2), Ok(3)]) == Ok([1, 2, 3])


def test_sequence_short_circuits_on_first_error():
    assert sequence_results([Ok(1), Error("first"), Error("second")]) == Error("first")


def test_sequence_empty():
    assert sequence_results([]) == Ok([])


@given(st.lists(st.integers()))
def test_sequence_preserves_order(values):
    assert sequence_results([Ok(v) for v in values]) == Ok(values)
