"""Uncoded minimum-storage scheme: the concatenated messages are split evenly over the databases
and every database ships everything it holds"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

from ..errors import SchemeError
from .baseclass import Answer, Messages, PirScheme, Query, Storage, Symbols, is_prime

LOGGER = logging.getLogger(__name__)
ONLY_QUERY: Query = ()


@dataclass
class DownloadAllScheme(PirScheme):
    """Database n stores symbols [n·m, (n+1)·m) of W1‖…‖WK with m = K·L/N"""

    name: str = field(default="download-all")

    def __post_init__(self) -> None:
        """N must divide K·L, answers reuse the message alphabet"""
        super().__post_init__()
        total = self.k * self.length
        if total % self.n:
            working = self.n // math.gcd(self.n, self.k)
            raise SchemeError(
                f"N={self.n:d} does not divide K·L={total:d}, use a message length that is a multiple of {working:d}"
            )
        if self.answer_alphabet != self.message_alphabet:
            raise SchemeError("answers ship stored symbols, so |Y| must equal |X|")
        if self.linear is None and is_prime(self.message_alphabet):
            self.linear = self.message_alphabet

    @property
    def share(self) -> int:
        """Symbols per database"""
        return self.k * self.length // self.n

    @property
    def key_space_size(self) -> int:
        """Nothing is random"""
        return 1

    @property
    def storage_sizes(self) -> Tuple[int, ...]:
        """|X|^m everywhere"""
        return (self.message_alphabet**self.share,) * self.n

    def store(self, db: int, messages: Messages) -> Storage:
        flat = [symbol for message in messages for symbol in message]
        return tuple(flat[db * self.share : (db + 1) * self.share])

    def query(self, db: int, desired: int, key: int) -> Query:
        return ONLY_QUERY

    def answer_length(self, db: int, query: Query) -> int:
        return self.share

    def answer(self, db: int, query: Query, storage: Storage) -> Answer:
        return tuple(storage)

    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        flat = [symbol for answer in answers for symbol in answer]
        return tuple(flat[desired * self.length : (desired + 1) * self.length])


def get(n: int, k: int, length: int = 1, alphabet: int = 2) -> DownloadAllScheme:
    """Shorthand for building the scheme"""
    return DownloadAllScheme(n=n, k=k, length=length, message_alphabet=alphabet)
