"""Two-server XOR scheme on fully replicated binary storage

The key is a uniformly random subset T of the message indices (a bitmask), database 1 gets T,
database 2 gets T with the desired index toggled, each returns the XOR of the messages it was
asked for and the user XORs the two answers.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

from ..errors import SchemeError
from .baseclass import Answer, Messages, PirScheme, Query, Storage, Symbols

LOGGER = logging.getLogger(__name__)


def subset_of(mask: int) -> Query:
    """Sorted message indices of a bitmask"""
    return tuple(idx for idx in range(mask.bit_length()) if mask >> idx & 1)


@dataclass
class Xor2Scheme(PirScheme):
    """Replicated storage, one L-symbol answer per database"""

    n: int = field(default=2)
    name: str = field(default="xor2")

    def __post_init__(self) -> None:
        """Two binary databases"""
        super().__post_init__()
        if self.n != 2:
            raise SchemeError(f"the XOR scheme runs on exactly two databases, got N={self.n:d}")
        if self.message_alphabet != 2 or self.answer_alphabet != 2:
            raise SchemeError("the XOR scheme is binary, |X| = |Y| = 2")
        self.linear = 2

    @property
    def key_space_size(self) -> int:
        """All subsets of the K message indices"""
        return 1 << self.k

    @property
    def storage_sizes(self) -> Tuple[int, ...]:
        """Both databases hold everything"""
        return (2 ** (self.k * self.length),) * 2

    def store(self, db: int, messages: Messages) -> Storage:
        return tuple(symbol for message in messages for symbol in message)

    def query(self, db: int, desired: int, key: int) -> Query:
        mask = key if db == 0 else key ^ (1 << desired)
        return subset_of(mask)

    def answer_length(self, db: int, query: Query) -> int:
        return self.length

    def answer(self, db: int, query: Query, storage: Storage) -> Answer:
        result = [0] * self.length
        for index in query:
            for pos in range(self.length):
                result[pos] ^= storage[index * self.length + pos]
        return tuple(result)

    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        first, second = answers
        return tuple(left ^ right for left, right in zip(first, second))


def get(k: int, length: int = 1) -> Xor2Scheme:
    """Shorthand for building the scheme"""
    return Xor2Scheme(k=k, length=length)
