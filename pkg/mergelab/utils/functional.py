"""Functional programming utilities."""

from collections.abc import Sequence
from functools import reduce
from typing import TypeVar

from expression import Ok, Result

A = TypeVar("A")
E = TypeVar("E")


def sequence_results(results: Sequence[Result[A, E]]) -> Result[list[A], E]:
    """Convert a sequence of Results into a Result of list.
    Short-circuits on first Error."""
    return reduce(lambda acc, r: acc.bind(lambda xs: r.map(lambda x: [*xs, x])), results, Ok([]))
