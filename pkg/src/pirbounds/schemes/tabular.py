"""Schemes given by explicit function tables, the serializable form of any scheme"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple, TypeVar

from ..errors import SchemeError, SizeGuardError
from .baseclass import Answer, Messages, PirScheme, Query, Storage, Symbols

LOGGER = logging.getLogger(__name__)
Flat = Tuple[int, ...]
ReconstructionKey = Tuple[int, int, Tuple[Answer, ...]]
KeyT = TypeVar("KeyT")
ValueT = TypeVar("ValueT")


@dataclass
class TabularScheme(PirScheme):  # pylint: disable=R0902
    """Every function is a dense lookup table; the reconstruction table only needs the answer
    tuples that actually occur. Tables are never treated as linear, so they are always enumerated"""

    key_count: int = field(default=1)
    declared_storage: Tuple[int, ...] = field(default=())
    storage_table: Tuple[Mapping[Flat, Storage], ...] = field(default=())
    query_table: Tuple[Mapping[Tuple[int, int], Query], ...] = field(default=())
    length_table: Tuple[Mapping[Query, int], ...] = field(default=())
    answer_table: Tuple[Mapping[Tuple[Query, Storage], Answer], ...] = field(default=())
    reconstruction_table: Mapping[ReconstructionKey, Symbols] = field(default_factory=dict)
    name: str = field(default="tabular")

    def __post_init__(self) -> None:
        """Every per-database table exists and the storage, query and length tables are total"""
        if self.linear is not None:
            LOGGER.info("{}: declared linearity is not trusted for tables".format(self.name))
            self.linear = None
        super().__post_init__()
        if self.key_count < 1:
            raise SchemeError("the key space must not be empty")
        for label, table in (
            ("storage sizes", self.declared_storage),
            ("storage", self.storage_table),
            ("query", self.query_table),
            ("answer length", self.length_table),
            ("answer", self.answer_table),
        ):
            if len(table) != self.n:
                raise SchemeError(f"{label} table lists {len(table):d} databases, expected {self.n:d}")
        for db in range(self.n):
            if len(self.storage_table[db]) != self.message_tuple_count:
                raise SchemeError(f"storage table of database {db:d} is not total over the message tuples")
            for desired in range(self.k):
                for key in range(self.key_count):
                    query = self._lookup(self.query_table[db], (desired, key), f"query table of database {db:d}")
                    self._lookup(self.length_table[db], query, f"answer length table of database {db:d}")

    @staticmethod
    def _lookup(table: Mapping[KeyT, ValueT], key: KeyT, what: str) -> ValueT:
        try:
            return table[key]
        except KeyError:
            raise SchemeError(f"{what} has no entry for {key}") from None

    @property
    def key_space_size(self) -> int:
        """As declared"""
        return self.key_count

    @property
    def storage_sizes(self) -> Tuple[int, ...]:
        """As declared"""
        return self.declared_storage

    def store(self, db: int, messages: Messages) -> Storage:
        flat = tuple(symbol for message in messages for symbol in message)
        return self._lookup(self.storage_table[db], flat, f"storage table of database {db:d}")

    def query(self, db: int, desired: int, key: int) -> Query:
        return self._lookup(self.query_table[db], (desired, key), f"query table of database {db:d}")

    def answer_length(self, db: int, query: Query) -> int:
        return self._lookup(self.length_table[db], query, f"answer length table of database {db:d}")

    def answer(self, db: int, query: Query, storage: Storage) -> Answer:
        table = self.answer_table[db]
        return self._lookup(table, (query, storage), f"answer table of database {db:d}")

    def reconstruct(self, answers: Sequence[Answer], desired: int, key: int) -> Symbols:
        entry = (desired, key, tuple(tuple(answer) for answer in answers))
        return self._lookup(self.reconstruction_table, entry, "reconstruction table")


def materialize(scheme: PirScheme, limit: int, name: Optional[str] = None) -> TabularScheme:
    """Tabulate every function of the scheme by enumerating all message tuples and keys"""
    count = scheme.message_tuple_count * scheme.key_space_size * scheme.k
    if count > limit:
        raise SizeGuardError("protocol runs to tabulate", count, limit)
    storage_table: Tuple[Dict[Flat, Storage], ...] = tuple({} for _ in range(scheme.n))
    answer_table: Tuple[Dict[Tuple[Query, Storage], Answer], ...] = tuple({} for _ in range(scheme.n))
    runs = [(desired, key) for desired in range(scheme.k) for key in range(scheme.key_space_size)]
    query_table = tuple({run: scheme.query(db, *run) for run in runs} for db in range(scheme.n))
    length_table = tuple(
        {query: scheme.answer_length(db, query) for query in scheme.queries(db)} for db in range(scheme.n)
    )
    reconstruction: Dict[ReconstructionKey, Symbols] = {}
    for messages in scheme.message_tuples():
        flat = tuple(symbol for message in messages for symbol in message)
        stored = []
        for db in range(scheme.n):
            storage = tuple(scheme.store(db, messages))
            storage_table[db][flat] = storage
            stored.append(storage)
            for query in length_table[db]:
                answer_table[db][(query, storage)] = tuple(scheme.answer(db, query, storage))
        for desired, key in runs:
            answers = tuple(answer_table[db][(query_table[db][(desired, key)], stored[db])] for db in range(scheme.n))
            entry = (desired, key, answers)
            if entry not in reconstruction:
                reconstruction[entry] = tuple(scheme.reconstruct(answers, desired, key))
    LOGGER.debug("tabulated {} with {} reconstruction entries".format(scheme.name, len(reconstruction)))
    return TabularScheme(
        n=scheme.n,
        k=scheme.k,
        length=scheme.length,
        message_alphabet=scheme.message_alphabet,
        answer_alphabet=scheme.answer_alphabet,
        name=name or scheme.name,
        key_count=scheme.key_space_size,
        declared_storage=tuple(scheme.storage_sizes),
        storage_table=storage_table,
        query_table=query_table,
        length_table=length_table,
        answer_table=answer_table,
        reconstruction_table=reconstruction,
    )
