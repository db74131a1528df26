"""
Vote matrix construction from (person, item, value) records.
"""
import logging
import numbers
from typing import Iterable, Tuple, Union

from app.models.votes import ItemId, PersonId, Vote, VoteMatrix, VoteValue
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)

VoteRecord = Union[Tuple[PersonId, ItemId, int], Vote]

VALID_VALUES = (-1, 0, 1)


def _unpack(record: VoteRecord) -> Tuple[PersonId, ItemId, object]:
    if isinstance(record, Vote):
        return record.person, record.item, int(record.value)
    person, item, value = record
    return str(person), str(item), value


def parse_vote_value(value: object) -> VoteValue:
    """Coerce a raw value to VoteValue; raises InvalidValue"""
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or value not in VALID_VALUES:
        raise InputError(
            ErrorType.INVALID_VALUE,
            f"Vote value {value!r} is not one of {list(VALID_VALUES)}",
            details={"value": repr(value)},
        )
    return VoteValue(int(value))


def build_vote_matrix(records: Iterable[VoteRecord]) -> VoteMatrix:
    """
    Build a sparse VoteMatrix.

    People and items are registered in order of first appearance. Repeated
    (person, item) pairs raise DuplicateVote; values outside {-1, 0, 1} raise
    InvalidValue; an empty record set raises EmptyInput.
    """
    matrix = VoteMatrix()
    for position, record in enumerate(records):
        person, item, raw = _unpack(record)
        value = parse_vote_value(raw)
        if matrix.has_vote(person, item):
            raise InputError(
                ErrorType.DUPLICATE_VOTE,
                f"Duplicate vote for person '{person}' on item '{item}'",
                details={"person": person, "item": item, "record": position},
            )
        matrix.add_vote(person, item, value)

    if matrix.n_people == 0 or matrix.n_items == 0:
        raise InputError(ErrorType.EMPTY_INPUT, "No vote records: matrix has no people or items")

    logger.info(
        "Vote matrix built: %d people x %d items, %d votes",
        matrix.n_people, matrix.n_items, matrix.n_votes,
    )
    return matrix
