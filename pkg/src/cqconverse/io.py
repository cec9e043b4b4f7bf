"""JSON file formats and atomic output.

Channel file::

    {"dim": d, "states": [matrix-literal, ...], "labels": [...]}   # labels optional

Codebook file (1-based letters)::

    {"n": n, "words": [[i, ...], ...]}

POVM file: a JSON list of matrix literals ``[X_0, X_1, ..., X_M]``.

A matrix literal is ``{"dim": d, "re": [[...]], "im": [[...]]}``.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from importlib import resources
from pathlib import Path

from .channel import CqChannel, Codebook, Povm
from .hermitian import matrix_from_literal, matrix_to_literal

BUILTIN_PREFIX = "builtin:"


class InputError(ValueError):
    """Malformed or invalid input file; the message names the file and the offending item."""


def _read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def builtin_path(name: str) -> Path:
    """Path of a bundled data file, e.g. ``channels/zero-plus.json``."""
    return Path(str(resources.files("cqconverse") / "data" / name))


def resolve(path: str, kind: str) -> Path:
    """Map ``builtin:<name>`` to a bundled file of ``kind`` (``channels`` or ``codebooks``)."""
    if isinstance(path, str) and path.startswith(BUILTIN_PREFIX):
        p = builtin_path(f"{kind}/{path[len(BUILTIN_PREFIX):]}.json")
        if not p.exists():
            raise InputError(f"no bundled {kind[:-1]} named {path!r}")
        return p
    return Path(path)


def channel_from_dict(obj) -> CqChannel:
    if not isinstance(obj, dict):
        raise InputError("channel file must contain a JSON object")
    unknown = set(obj) - {"dim", "states", "labels"}
    if unknown:
        raise InputError(f"unknown channel keys: {sorted(unknown)}")
    if "states" not in obj or not isinstance(obj["states"], list) or not obj["states"]:
        raise InputError("channel file needs a non-empty 'states' list")
    states = []
    for k, lit in enumerate(obj["states"]):
        try:
            states.append(matrix_from_literal(lit))
        except (ValueError, TypeError) as exc:
            raise InputError(f"states[{k}]: {exc}") from None
    dim = obj.get("dim")
    if dim is not None and any(s.shape[0] != dim for s in states):
        raise InputError(f"states do not match declared dim={dim}")
    try:
        return CqChannel(tuple(states), obj.get("labels"))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def channel_to_dict(ch: CqChannel) -> dict:
    d = {"dim": ch.dim, "states": [matrix_to_literal(s) for s in ch.states]}
    if ch.labels is not None:
        d["labels"] = list(ch.labels)
    return d


def load_channel(path) -> CqChannel:
    path = resolve(path, "channels")
    obj = _read_json(path)
    try:
        return channel_from_dict(obj)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def codebook_from_dict(obj) -> Codebook:
    if not isinstance(obj, dict) or set(obj) != {"n", "words"}:
        raise InputError("codebook file must be an object with exactly the keys 'n' and 'words'")
    words = obj["words"]
    if not isinstance(words, list) or not words:
        raise InputError("'words' must be a non-empty list")
    out = []
    for k, w in enumerate(words):
        if not isinstance(w, list) or any(not isinstance(i, int) or i < 1 for i in w):
            raise InputError(f"words[{k}]: letters must be integers >= 1")
        out.append(tuple(i - 1 for i in w))
    try:
        return Codebook(int(obj["n"]), tuple(out))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def codebook_to_dict(cb: Codebook) -> dict:
    return {"n": cb.n, "words": [[i + 1 for i in w] for w in cb.words]}


def load_codebook(path) -> Codebook:
    path = resolve(path, "codebooks")
    obj = _read_json(path)
    try:
        return codebook_from_dict(obj)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def povm_from_list(obj) -> Povm:
    if not isinstance(obj, list):
        raise InputError("POVM file must contain a JSON list of matrix literals")
    els = []
    for k, lit in enumerate(obj):
        try:
            els.append(matrix_from_literal(lit))
        except (ValueError, TypeError) as exc:
            raise InputError(f"elements[{k}]: {exc}") from None
    try:
        return Povm(tuple(els))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_povm(path) -> Povm:
    path = Path(path)
    obj = _read_json(path)
    try:
        return povm_from_list(obj)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def fmt(x) -> str:
    """Locale-independent number formatting with 12 significant digits."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def to_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text: str):
    """Write ``text`` to ``path`` via a temp file in the same directory and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
