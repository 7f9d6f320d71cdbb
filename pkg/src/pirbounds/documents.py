"""Versioned JSON documents for models, certificates, schemes and curves, and CSV curve export

Rationals are written as "p/q" strings (or integer p, q pairs in certificate weights), never as
floats. Constraint tags are the join key between a model and its certificates.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

from .bounds import EnvelopePoint, PirParameters
from .entropy import Constraint, GroundSet, LinearForm, Number, Sense
from .errors import DocumentError, PirBoundsError
from .lp import DualCertificate, LinearProgram
from .schemes import PirScheme, TabularScheme, materialize

LOGGER = logging.getLogger(__name__)
SCHEMA_VERSION = 1
PathLike = Union[str, Path]
Json = Dict[str, Any]


def rational_text(value: Fraction) -> str:
    """'p/q', or 'p' for integers"""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def render_number(value: Number) -> str:
    """'p/q (≈decimal)' for rationals, '≈decimal' for floats"""
    if isinstance(value, float):
        return f"≈{value:.12g}"
    return f"{rational_text(value)} (≈{float(value):.12g})"


def parse_rational_text(text: object, where: str = "document") -> Fraction:
    """Inverse of rational_text"""
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise DocumentError(f"{where}: expected a 'p/q' string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"{where}: malformed rational {text!r}") from None


def write_atomic(path: PathLike, text: str) -> None:
    """Write through a temporary file in the target directory and rename it into place"""
    target = Path(path)
    temporary: Optional[str] = None
    try:
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", newline="", dir=target.parent, delete=False, suffix=".tmp"
        ) as handle:
            temporary = handle.name
            handle.write(text)
        os.replace(temporary, target)
    except OSError as exc:
        if temporary is not None and os.path.exists(temporary):
            os.unlink(temporary)
        raise DocumentError(f"cannot write: {exc.strerror or exc}", str(path)) from None
    LOGGER.debug("wrote {} bytes to {}".format(len(text), target))


def dumps(document: Json) -> str:
    """Stable rendering: sorted keys, two-space indent, trailing newline"""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_document(path: PathLike, kind: str) -> Json:
    """Load a JSON document and check its kind and schema version"""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"cannot read: {exc.strerror or exc}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not JSON: {exc}", str(path)) from None
    if not isinstance(document, dict):
        raise DocumentError("top level must be an object", str(path))
    if document.get("kind") != kind:
        raise DocumentError(f"expected a {kind} document, found {document.get('kind')!r}", str(path))
    if document.get("version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema version {document.get('version')!r}", str(path))
    return document


def _form_document(ground: GroundSet, form: LinearForm) -> Json:
    return {
        "terms": [
            {"subset": list(ground.labels(mask)), "coefficient": rational_text(value)}
            for mask, value in form.entropy_terms.items()
        ],
        "scalars": [{"name": name, "coefficient": rational_text(value)} for name, value in form.scalar_terms.items()],
        "constant": rational_text(form.constant),
    }


def _form_from_document(ground: GroundSet, document: Json, where: str) -> LinearForm:
    try:
        entropy_terms = {
            ground.mask(term["subset"]): parse_rational_text(term["coefficient"], where) for term in document["terms"]
        }
        scalar_terms = {
            term["name"]: parse_rational_text(term["coefficient"], where) for term in document.get("scalars", [])
        }
        constant = parse_rational_text(document.get("constant", "0"), where)
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"{where}: malformed linear form ({exc})") from None
    except PirBoundsError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    return LinearForm(entropy_terms, scalar_terms, constant)


def model_document(program: LinearProgram) -> Json:
    """Canonical document of a program"""
    ground = program.ground
    return {
        "kind": "model",
        "version": SCHEMA_VERSION,
        "ground_set": list(ground.names),
        "scalars": list(program.scalars),
        "constraints": [
            dict(_form_document(ground, row.form), tag=row.tag, sense=row.sense.name) for row in program.constraints
        ],
        "objective": _form_document(ground, program.objective),
    }


def model_hash(program: LinearProgram) -> str:
    """sha256 of the compact sorted-key JSON of the model document"""
    canonical = json.dumps(model_document(program), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def program_from_document(document: Json, where: str = "model") -> LinearProgram:
    """Rebuild the program"""
    try:
        ground = GroundSet(tuple(document["ground_set"]))
        constraints = tuple(
            Constraint(_form_from_document(ground, row, f"{where}:{row['tag']}"), Sense[row["sense"]], row["tag"])
            for row in document["constraints"]
        )
        objective = _form_from_document(ground, document["objective"], f"{where}:objective")
        return LinearProgram(ground, tuple(document["scalars"]), constraints, objective)
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"{where}: missing or malformed field {exc}") from None
    except DocumentError:
        raise
    except PirBoundsError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def save_model(path: PathLike, program: LinearProgram) -> None:
    """Write the model document"""
    write_atomic(path, dumps(model_document(program)))


def load_model(path: PathLike) -> LinearProgram:
    """Read a model document"""
    return program_from_document(read_document(path, "model"), str(path))


def certificate_document(certificate: DualCertificate) -> Json:
    """Weights in tag order as integer pairs"""
    bound = certificate.certified_bound
    return {
        "kind": "certificate",
        "version": SCHEMA_VERSION,
        "model_hash": certificate.model_hash,
        "weights": [
            {"tag": tag, "p": weight.numerator, "q": weight.denominator}
            for tag, weight in sorted(certificate.weights.items())
        ],
        "certified_bound": {"p": bound.numerator, "q": bound.denominator},
    }


def _pair(entry: Mapping[str, Any], where: str) -> Fraction:
    p, q = entry["p"], entry["q"]
    if not isinstance(p, int) or not isinstance(q, int) or isinstance(p, bool) or isinstance(q, bool) or q <= 0:
        raise DocumentError(f"{where}: p must be an integer and q a positive integer")
    return Fraction(p, q)


def certificate_from_document(document: Json, where: str = "certificate") -> DualCertificate:
    """Rebuild the certificate"""
    try:
        weights = {entry["tag"]: _pair(entry, f"{where}:{entry['tag']}") for entry in document["weights"]}
        bound = _pair(document["certified_bound"], f"{where}:certified_bound")
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"{where}: missing or malformed field {exc}") from None
    return DualCertificate(weights, bound, document.get("model_hash"))


def save_certificate(path: PathLike, certificate: DualCertificate) -> None:
    """Write the certificate document"""
    write_atomic(path, dumps(certificate_document(certificate)))


def load_certificate(path: PathLike) -> DualCertificate:
    """Read a certificate document"""
    return certificate_from_document(read_document(path, "certificate"), str(path))


def scheme_document(scheme: PirScheme, limit: int) -> Json:
    """Explicit tables of the scheme, inputs in lexicographic order"""
    table = scheme if isinstance(scheme, TabularScheme) else materialize(scheme, limit)
    dbs = range(table.n)
    return {
        "kind": "scheme",
        "version": SCHEMA_VERSION,
        "params": {
            "name": table.name,
            "n": table.n,
            "k": table.k,
            "length": table.length,
            "message_alphabet": table.message_alphabet,
            "answer_alphabet": table.answer_alphabet,
        },
        "key_space": table.key_count,
        "storage_sizes": list(table.declared_storage),
        "tables": {
            "storage": [
                [
                    {"messages": list(flat), "storage": list(value)}
                    for flat, value in sorted(table.storage_table[db].items())
                ]
                for db in dbs
            ],
            "queries": [
                [
                    {"desired": desired, "key": key, "query": list(query)}
                    for (desired, key), query in sorted(table.query_table[db].items())
                ]
                for db in dbs
            ],
            "answer_lengths": [
                [{"query": list(query), "length": length} for query, length in sorted(table.length_table[db].items())]
                for db in dbs
            ],
            "answers": [
                [
                    {"query": list(query), "storage": list(storage), "answer": list(answer)}
                    for (query, storage), answer in sorted(table.answer_table[db].items())
                ]
                for db in dbs
            ],
            "reconstruction": [
                {
                    "desired": desired,
                    "key": key,
                    "answers": [list(answer) for answer in answers],
                    "message": list(message),
                }
                for (desired, key, answers), message in sorted(table.reconstruction_table.items())
            ],
        },
    }


def _ints(values: Sequence[Any]) -> Tuple[int, ...]:
    if not all(isinstance(value, int) and not isinstance(value, bool) for value in values):
        raise DocumentError(f"expected a list of integers, got {values!r}")
    return tuple(values)


def scheme_from_document(document: Json, where: str = "scheme") -> TabularScheme:
    """Rebuild a tabular scheme"""
    try:
        params = document["params"]
        tables = document["tables"]
        return TabularScheme(
            n=params["n"],
            k=params["k"],
            length=params["length"],
            message_alphabet=params["message_alphabet"],
            answer_alphabet=params.get("answer_alphabet"),
            name=params.get("name", "tabular"),
            key_count=document["key_space"],
            declared_storage=_ints(document["storage_sizes"]),
            storage_table=tuple(
                {_ints(entry["messages"]): _ints(entry["storage"]) for entry in per_db} for per_db in tables["storage"]
            ),
            query_table=tuple(
                {(entry["desired"], entry["key"]): _ints(entry["query"]) for entry in per_db}
                for per_db in tables["queries"]
            ),
            length_table=tuple(
                {_ints(entry["query"]): entry["length"] for entry in per_db} for per_db in tables["answer_lengths"]
            ),
            answer_table=tuple(
                {(_ints(entry["query"]), _ints(entry["storage"])): _ints(entry["answer"]) for entry in per_db}
                for per_db in tables["answers"]
            ),
            reconstruction_table={
                (entry["desired"], entry["key"], tuple(_ints(answer) for answer in entry["answers"])): _ints(
                    entry["message"]
                )
                for entry in tables["reconstruction"]
            },
        )
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"{where}: missing or malformed field {exc}") from None


def save_scheme(path: PathLike, scheme: PirScheme, limit: int) -> None:
    """Write the scheme document"""
    write_atomic(path, dumps(scheme_document(scheme, limit)))


def load_scheme(path: PathLike) -> TabularScheme:
    """Read a scheme document"""
    return scheme_from_document(read_document(path, "scheme"), str(path))


def curve_csv(points: Sequence[EnvelopePoint]) -> str:
    """Header beta,alpha_lower then one point per line"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["beta", "alpha_lower"])
    for point in points:
        writer.writerow([rational_text(point.beta), rational_text(point.alpha_lower)])
    return buffer.getvalue()


def curve_document(params: PirParameters, points: Sequence[EnvelopePoint]) -> Json:
    """Same rows as the CSV plus which lines bind at each point"""
    return {
        "kind": "curve",
        "version": SCHEMA_VERSION,
        "params": {"n": params.n, "k": params.k},
        "points": [
            {
                "beta": rational_text(point.beta),
                "alpha_lower": rational_text(point.alpha_lower),
                "binding": [provenance.value for provenance in point.binding],
            }
            for point in points
        ],
        "vertical_segment": {
            "alpha": rational_text(params.min_storage),
            "beta_from": rational_text(params.min_storage),
        },
    }

