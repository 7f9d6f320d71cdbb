"""Baseclass for all PIR storage codes, common helpers live here

A scheme is the tuple of storage, query, answer-length, answer and reconstruction functions.
Databases and message indices are counted from zero, a message is a tuple of `length` symbols
from range(message_alphabet), the random key is uniform over range(key_space_size).
All schemes must define the abstract methods (check all the raise NotImplementedError).
"""

from __future__ import annotations

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from ..errors import SchemeError

LOGGER = logging.getLogger(__name__)
Symbols = Tuple[int, ...]
Messages = Tuple[Symbols, ...]
Query = Tuple[int, ...]
Storage = Tuple[int, ...]
Answer = Tuple[int, ...]


def is_prime(value: int) -> bool:
    """Trial division, enough for alphabet sizes"""
    return value >= 2 and all(value % divisor for divisor in range(2, int(value**0.5) + 1))


@dataclass
class PirScheme(ABC):  # pylint: disable=R0902
    """N databases, K messages of L symbols each; `linear` names the prime p when every storage,
    answer and reconstruction map is GF(p)-linear in the messages; set only by code that guarantees it"""

    n: int = field(default=2)
    k: int = field(default=2)
    length: int = field(default=1)
    message_alphabet: int = field(default=2)
    answer_alphabet: Optional[int] = field(default=None)
    linear: Optional[int] = field(default=None)
    name: str = field(default="scheme")

    def __post_init__(self) -> None:
        """Validate the parameters, the answer alphabet defaults to the message alphabet"""
        if self.answer_alphabet is None:
            self.answer_alphabet = self.message_alphabet
        for label, value, low in (
            ("N", self.n, 1),
            ("K", self.k, 1),
            ("L", self.length, 1),
            ("|X|", self.message_alphabet, 2),
            ("|Y|", self.answer_alphabet, 2),
        ):
            if not isinstance(value, int) or value < low:
                raise SchemeError(f"{label} must be an integer >= {low:d}, got {value!r}")
        if self.linear is not None and (self.linear != self.message_alphabet or not is_prime(self.linear)):
            raise SchemeError(f"linearity is declared over GF(|X|) with |X| prime, got p={self.linear}")

    @property
    @abstractmethod
    def key_space_size(self) -> int:
        """Number of equiprobable random keys"""
        raise NotImplementedError()

    @property
    @abstractmethod
    def storage_sizes(self) -> Tuple[int, ...]:
        """Declared storage alphabet size |S_n| per database"""
        raise NotImplementedError()

    @abstractmethod
    def store(self, db: int, messages: Messages) -> Storage:
        """What database db holds for the message tuple"""
        raise NotImplementedError()

    @abstractmethod
    def query(self, db: int, desired: int, key: int) -> Query:
        """Query sent to database db for message `desired` under `key`"""
        raise NotImplementedError()

    @abstractmethod
    def answer_length(self, db: int, query: Query) -> int:
        """Number of answer symbols, a function of the query alone"""
        raise NotImplementedError()

    @abstractmethod
    def answer(self, db: int, query: Query, storage: Storage) -> Answer:
        """Answer of database db, computed from the query and its stored content only"""
        raise NotImplementedError()

    @abstractmethod
    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        """Estimate of message `desired` from all answers and the key"""
        raise NotImplementedError()

    def queries(self, db: int) -> List[Query]:
        """The query set of database db, sorted"""
        return sorted({self.query(db, desired, key) for desired in range(self.k) for key in range(self.key_space_size)})

    def message_tuples(self) -> Iterator[Messages]:
        """Every message tuple in lexicographic order"""
        symbols = range(self.message_alphabet)
        for flat in itertools.product(symbols, repeat=self.k * self.length):
            yield self.split(flat)

    def split(self, flat: Sequence[int]) -> Messages:
        """K·L symbols to K messages"""
        return tuple(tuple(flat[idx * self.length : (idx + 1) * self.length]) for idx in range(self.k))

    @property
    def message_tuple_count(self) -> int:
        """|X|^(K·L)"""
        return self.message_alphabet ** (self.k * self.length)

    def retrieve(self, messages: Messages, desired: int, key: int) -> Symbols:
        """Run the protocol once end to end"""
        answers = []
        for db in range(self.n):
            query = self.query(db, desired, key)
            answer = tuple(self.answer(db, query, self.store(db, messages)))
            if len(answer) != self.answer_length(db, query):
                raise SchemeError(
                    f"database {db:d} answered {len(answer):d} symbols to {query}, "
                    f"declared {self.answer_length(db, query):d}"
                )
            answers.append(answer)
        return tuple(self.reconstruct(answers, desired, key))


@dataclass
class RelabeledScheme(PirScheme):
    """The wrapped scheme with message i of this scheme being message permutation[i] of the inner one"""

    inner: Optional[PirScheme] = field(default=None)
    permutation: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        """Copy the parameters of the inner scheme"""
        if self.inner is None:
            raise SchemeError("nothing to relabel")
        if sorted(self.permutation) != list(range(self.inner.k)):
            raise SchemeError(f"{self.permutation} is not a permutation of the {self.inner.k:d} message indices")
        self.n, self.k, self.length = self.inner.n, self.inner.k, self.inner.length
        self.message_alphabet, self.answer_alphabet = self.inner.message_alphabet, self.inner.answer_alphabet
        self.linear = self.inner.linear
        self.name = f"{self.inner.name}[{','.join(str(idx) for idx in self.permutation)}]"
        super().__post_init__()

    @property
    def _inner(self) -> PirScheme:
        assert self.inner is not None
        return self.inner

    def _inner_messages(self, messages: Messages) -> Messages:
        reordered: List[Symbols] = [()] * self.k
        for idx, target in enumerate(self.permutation):
            reordered[target] = messages[idx]
        return tuple(reordered)

    @property
    def key_space_size(self) -> int:
        """Same keys as the inner scheme"""
        return self._inner.key_space_size

    @property
    def storage_sizes(self) -> Tuple[int, ...]:
        """Same storage as the inner scheme"""
        return self._inner.storage_sizes

    def store(self, db: int, messages: Messages) -> Storage:
        return self._inner.store(db, self._inner_messages(messages))

    def query(self, db: int, desired: int, key: int) -> Query:
        return self._inner.query(db, self.permutation[desired], key)

    def answer_length(self, db: int, query: Query) -> int:
        return self._inner.answer_length(db, query)

    def answer(self, db: int, query: Query, storage: Storage) -> Answer:
        return self._inner.answer(db, query, storage)

    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        return self._inner.reconstruct(answers, self.permutation[desired], key)


def relabel_messages(scheme: PirScheme, permutation: Sequence[int]) -> RelabeledScheme:
    """Shorthand for permuting the message indices of a scheme"""
    return RelabeledScheme(inner=scheme, permutation=tuple(permutation))
