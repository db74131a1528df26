"""
Vote data: the people x items relation table.

Rows are people, columns are items. A missing entry means the person never saw
the item, which is different from an explicit Pass.
"""
from enum import IntEnum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr

PersonId = str
ItemId = str
GroupId = str


class VoteValue(IntEnum):
    """Encoded relation between a person and an item"""
    AGREE = 1
    DISAGREE = -1
    PASS = 0


class Vote(BaseModel):
    """One (person, item, value) record"""
    person: PersonId
    item: ItemId
    value: VoteValue


class VoteMatrix(BaseModel):
    """
    Sparse vote table.

    `people` and `items` keep insertion order of first appearance. Numerical
    models read the table through `canonical_people()` / `canonical_items()`
    (sorted ids) so their output does not depend on record order.
    """
    people: List[PersonId] = Field(default_factory=list)
    items: List[ItemId] = Field(default_factory=list)
    votes: List[Vote] = Field(default_factory=list)

    _index: Dict[Tuple[PersonId, ItemId], VoteValue] = PrivateAttr(default_factory=dict)
    _people_set: set = PrivateAttr(default_factory=set)
    _items_set: set = PrivateAttr(default_factory=set)
    _by_item: Dict[ItemId, List[Vote]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._people_set = set(self.people)
        self._items_set = set(self.items)
        self._index = {}
        self._by_item = {item: [] for item in self.items}
        for vote in self.votes:
            self._register(vote)

    def _register(self, vote: Vote) -> None:
        self._index[(vote.person, vote.item)] = vote.value
        self._by_item.setdefault(vote.item, []).append(vote)

    # Registration

    def add_person(self, person: PersonId) -> None:
        if person not in self._people_set:
            self._people_set.add(person)
            self.people.append(person)

    def add_item(self, item: ItemId) -> None:
        if item not in self._items_set:
            self._items_set.add(item)
            self.items.append(item)
            self._by_item.setdefault(item, [])

    def add_vote(self, person: PersonId, item: ItemId, value: VoteValue) -> Vote:
        """Append a vote; caller guarantees the pair is new"""
        self.add_person(person)
        self.add_item(item)
        vote = Vote(person=person, item=item, value=VoteValue(value))
        self.votes.append(vote)
        self._register(vote)
        return vote

    # Lookups

    def has_person(self, person: PersonId) -> bool:
        return person in self._people_set

    def has_item(self, item: ItemId) -> bool:
        return item in self._items_set

    def has_vote(self, person: PersonId, item: ItemId) -> bool:
        return (person, item) in self._index

    def get(self, person: PersonId, item: ItemId) -> Optional[VoteValue]:
        return self._index.get((person, item))

    def votes_for_item(self, item: ItemId) -> List[Vote]:
        return list(self._by_item.get(item, []))

    def iter_votes(self) -> Iterator[Vote]:
        return iter(self.votes)

    @property
    def n_people(self) -> int:
        return len(self.people)

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_votes(self) -> int:
        return len(self.votes)

    def canonical_people(self) -> List[PersonId]:
        return sorted(self.people)

    def canonical_items(self) -> List[ItemId]:
        return sorted(self.items)

    def to_dense(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Dense (values, observed) arrays in canonical order.

        Missing entries are 0 in `values`; `observed` marks recorded votes
        (including Pass).
        """
        people = self.canonical_people()
        items = self.canonical_items()
        row = {p: i for i, p in enumerate(people)}
        col = {it: j for j, it in enumerate(items)}
        values = np.zeros((len(people), len(items)), dtype=float)
        observed = np.zeros((len(people), len(items)), dtype=bool)
        for vote in self.votes:
            i, j = row[vote.person], col[vote.item]
            values[i, j] = float(int(vote.value))
            observed[i, j] = True
        return values, observed
