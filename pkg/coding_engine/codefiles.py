"""
Text formats read and written by the management commands.

Code file:
    q N K
    [shape n m]          arrays of n x m flattened column-major, N = n*m
    K rows of N field reprs (the RREF generator)

Channel file: JSON {"q", "n", "m", "w", "E1", "E2"[, "modulus"]}.
GCC structure file (<code file>.gcc.json): inner chain generators and the
outer code of every level, enough to rebuild the code and its certificate.
"""
import hashlib
import json
import logging
from pathlib import Path

import numpy as np
from rest_framework import serializers

from .algebra.finite_field import FieldSpec, field_for_order, field_make
from .algebra.linear_codes import LinearCode, chain_make, code_from_generators
from .channels.error_model import PbeChannel
from .constructions.gcc_construction import CODE, GccCode, GccSpec, OuterCode
from .exceptions import CodeFileError, ParameterError, PbecError
from .serializers import ChannelSpecSerializer

logger = logging.getLogger(__name__)

STRUCTURE_SUFFIX = '.gcc.json'


def fingerprint(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def code_file_text(code: LinearCode, shape=None) -> str:
    lines = [f"{code.q} {code.n} {code.k}"]
    if shape is not None:
        n, m = shape
        if n * m != code.n:
            raise ParameterError(f"Shape {n}x{m} does not match length {code.n}")
        lines.append(f"shape {n} {m}")
    lines += [" ".join(str(int(x)) for x in row) for row in code.G.entries]
    return "\n".join(lines) + "\n"


def parse_code_text(text: str, spec: FieldSpec | None = None):
    """Returns (LinearCode, shape or None)"""
    lines = [line.split() for line in text.splitlines() if line.strip()]
    try:
        q, length, k = (int(x) for x in lines[0])
        body = lines[1:]
        shape = None
        if body and body[0][0] == 'shape':
            n, m = int(body[0][1]), int(body[0][2])
            shape = (n, m)
            body = body[1:]
        rows = np.array([[int(x) for x in row] for row in body], dtype=np.int64).reshape(-1, length)
    except (IndexError, ValueError) as exc:
        raise CodeFileError(f"Malformed code file: {exc}") from exc

    if rows.shape[0] != k:
        raise CodeFileError(f"Header declares {k} rows, found {rows.shape[0]}")
    if shape is not None and shape[0] * shape[1] != length:
        raise CodeFileError(f"Shape {shape[0]}x{shape[1]} does not match length {length}")
    spec = spec or field_for_order(q)
    if spec.q != q:
        raise CodeFileError(f"Code file is over GF({q}), expected {spec}")
    code = code_from_generators(spec, length, rows)
    if code.k != k:
        raise CodeFileError(f"Generator rows have rank {code.k}, header declares {k}")
    return code, shape


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CodeFileError(f"Cannot read {path}: {exc}") from exc


def _write_text(path, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CodeFileError(f"Cannot write {path}: {exc}") from exc


def write_code_file(path, code: LinearCode, shape=None) -> str:
    """Write the code file; returns its fingerprint"""
    text = code_file_text(code, shape)
    _write_text(path, text)
    logger.info(f"Wrote {code} to {path}")
    return fingerprint(text)


def read_code_file(path, spec: FieldSpec | None = None):
    """Returns (LinearCode, shape or None, fingerprint)"""
    text = _read_text(path)
    code, shape = parse_code_text(text, spec)
    return code, shape, fingerprint(text)


# ---------------------------------------------------------------------------
# Channel files
# ---------------------------------------------------------------------------

def read_channel_file(path) -> PbeChannel:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CodeFileError(f"Channel file {path} is not valid JSON: {exc}") from exc
    serializer = ChannelSpecSerializer(data=data)
    if not serializer.is_valid():
        raise ParameterError(f"Invalid channel file {path}: {dict(serializer.errors)}")
    try:
        return serializer.to_channel()
    except serializers.ValidationError as exc:
        raise ParameterError(f"Invalid channel file {path}: {exc.detail}") from exc


def write_channel_file(path, ch: PbeChannel):
    data = ch.describe()
    if ch.spec.e > 1:
        data['modulus'] = list(ch.spec.modulus)
    _write_text(path, json.dumps(data, indent=2) + "\n")


# ---------------------------------------------------------------------------
# GCC structure files
# ---------------------------------------------------------------------------

def structure_path(code_path) -> Path:
    return Path(f"{code_path}{STRUCTURE_SUFFIX}")


def gcc_structure(code: GccCode) -> dict:
    spec = code.spec
    outer = []
    for A in spec.outer:
        entry = {'kind': A.kind, 'degree': A.degree}
        if A.kind == CODE:
            entry['modulus'] = list(A.code.spec.modulus)
            entry['generator'] = A.code.G.entries.tolist()
            entry['designed_distance'] = A.code.designed_distance
        outer.append(entry)
    return {
        'q': spec.base.q,
        'base_modulus': list(spec.base.modulus),
        'n': spec.n,
        'm': spec.m,
        'inner': [c.G.entries.tolist() for c in spec.inner.codes],
        'outer': outer,
    }


def gcc_spec_from_structure(data: dict) -> GccSpec:
    try:
        base = field_for_order(int(data['q']))
        base = field_make(base.p, base.e, data.get('base_modulus'))
        n, m = int(data['n']), int(data['m'])
        inner = chain_make([code_from_generators(base, n, np.array(rows, dtype=np.int64).reshape(-1, n))
                            for rows in data['inner']])
        outer = []
        for entry in data['outer']:
            r = int(entry['degree'])
            if entry['kind'] == CODE:
                ext = field_make(base.p, base.e * r, entry['modulus'])
                rows = np.array(entry['generator'], dtype=np.int64).reshape(-1, m)
                code = code_from_generators(ext, m, rows, entry.get('designed_distance'))
                outer.append(OuterCode.from_code(code, r))
            else:
                outer.append(OuterCode(m, r, entry['kind']))
        return GccSpec(inner, tuple(outer))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PbecError):
            raise
        raise CodeFileError(f"Malformed GCC structure: {exc}") from exc


def write_structure_file(code_path, code: GccCode):
    path = structure_path(code_path)
    _write_text(path, json.dumps(gcc_structure(code), indent=2) + "\n")
    return path


def read_structure_file(code_path) -> GccSpec | None:
    """The structure written next to a code file, or None when there is none"""
    path = structure_path(code_path)
    if not path.exists():
        return None
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CodeFileError(f"Structure file {path} is not valid JSON: {exc}") from exc
    return gcc_spec_from_structure(data)
