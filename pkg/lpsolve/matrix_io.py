"""
Matrix, vector and trace files

CSV matrices hold one row per line with comma-separated entries. Entries are
real decimals or complex literals of the form a+bi, a-bi or bi (j is accepted
for i). Output uses 17 significant digits so a written matrix parses back to
the same doubles.
"""
import json
import logging
import re
import sys
from contextlib import contextmanager
from typing import Any, Iterator, List, Optional, Sequence, TextIO, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from lpsolve.config import settings
from lpsolve.errors import ParseError
from lpsolve.models import CommandOutput, IrlsResult, OutputFormat

logger = logging.getLogger(__name__)

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^([+-]?)({_NUM})?[ij]$")
_COMPLEX = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?[ij]$")

TRACE_HEADER = ["iter", "pk", "q", "error_norm", "step"]

RequestT = TypeVar("RequestT", bound=BaseModel)


def parse_entry(token: str) -> complex:
    """Parse one real or complex literal; raises ValueError on anything else"""
    s = token.strip().replace(" ", "")
    if _REAL.match(s):
        return complex(float(s), 0.0)
    m = _IMAG.match(s)
    if m:
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag)
    m = _COMPLEX.match(s)
    if m:
        mag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -mag if m.group(2) == "-" else mag)
    raise ValueError(f"malformed number {token.strip()!r}")


class MatrixFiles:
    """Reads and writes the CSV/JSON files used by the command line"""

    def __init__(self, precision: Optional[int] = None):
        self.precision = precision or settings.OUTPUT_PRECISION

    @contextmanager
    def open_text(self, path: str, mode: str = "r") -> Iterator[TextIO]:
        """Open a file, mapping OS failures to ParseError"""
        try:
            handle = open(path, mode, encoding="utf-8", newline="")
        except OSError as e:
            logger.error(f"Cannot open {path}: {e}")
            raise ParseError(f"cannot open file: {e.strerror}", path=path) from e
        try:
            yield handle
        finally:
            handle.close()

    @contextmanager
    def open_output(self, path: Optional[str]) -> Iterator[TextIO]:
        """stdout when path is None"""
        if path is None:
            yield sys.stdout
            sys.stdout.flush()
            return
        with self.open_text(path, "w") as handle:
            yield handle

    # --- reading -------------------------------------------------------------

    def read_text(self, path: str) -> str:
        """Whole file as text; undecodable bytes are a parse error"""
        with self.open_text(path) as handle:
            try:
                return handle.read()
            except UnicodeDecodeError as e:
                logger.error(f"Cannot decode {path}: {e}")
                raise ParseError(f"not valid UTF-8 text (byte offset {e.start})", path=path) from e

    def parse_matrix_text(self, text: str, path: Optional[str] = None) -> np.ndarray:
        rows: List[List[complex]] = []
        width = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = [parse_entry(tok) for tok in line.split(",")]
            except ValueError as e:
                raise ParseError(str(e), path=path, line=lineno) from e
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"ragged row: {len(row)} entries, expected {width} (row {len(rows) + 1})",
                    path=path,
                    line=lineno,
                )
            rows.append(row)
        if not rows:
            raise ParseError("empty file", path=path)

        values = np.array(rows, dtype=np.complex128)
        if np.all(values.imag == 0):
            values = values.real.copy()
        logger.debug(f"parsed {values.shape[0]}x{values.shape[1]} matrix from {path or '<text>'}")
        return values

    def parse_matrix(self, path: str) -> np.ndarray:
        return self.parse_matrix_text(self.read_text(path), path=path)

    def parse_vector(self, path: str) -> np.ndarray:
        """A single row or a single column"""
        values = self.parse_matrix(path)
        if 1 not in values.shape:
            raise ParseError(f"expected a vector, got a {values.shape[0]}x{values.shape[1]} matrix", path=path)
        return values.ravel()

    def load_request(self, path: str, model: Type[RequestT]) -> RequestT:
        """Validate a JSON request body against a pydantic model"""
        try:
            payload = json.loads(self.read_text(path))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", path=path, line=e.lineno) from e
        try:
            return model.model_validate(payload)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise ParseError(f"invalid request field {where}: {first['msg']}", path=path) from e

    # --- writing -------------------------------------------------------------

    def format_number(self, value: Any) -> str:
        value = complex(value)
        re_part = format(value.real, f".{self.precision}g")
        if value.imag == 0 and not np.signbit(value.imag):
            return re_part
        sign = "-" if np.signbit(value.imag) else "+"
        return f"{re_part}{sign}{format(abs(value.imag), f'.{self.precision}g')}i"

    def format_matrix(self, values) -> str:
        arr = np.asarray(values)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return "".join(",".join(self.format_number(v) for v in row) + "\n" for row in arr)

    def to_json_value(self, value: Any) -> Any:
        """Arrays become nested lists, complex entries [re, im]"""
        if isinstance(value, np.ndarray):
            if np.iscomplexobj(value):
                return np.stack([value.real, value.imag], axis=-1).tolist()
            return value.tolist()
        if isinstance(value, (complex, np.complexfloating)):
            return [float(value.real), float(value.imag)]
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, BaseModel):
            return self.to_json_value(value.model_dump())
        if isinstance(value, dict):
            return {k: self.to_json_value(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.to_json_value(v) for v in value]
        return value

    def render(self, output: CommandOutput, fmt: OutputFormat) -> str:
        if fmt == OutputFormat.JSON:
            body = {"result": self.to_json_value(output.result), "meta": self.to_json_value(output.meta)}
            return json.dumps(body, indent=2) + "\n"
        result = output.result
        if isinstance(result, str):
            return result + "\n"
        if isinstance(result, (bool, int, float, complex, np.generic)):
            return self.format_number(result) + "\n"
        return self.format_matrix(result)

    def write_output(self, output: CommandOutput, fmt: OutputFormat, path: Optional[str] = None):
        text = self.render(output, fmt)
        with self.open_output(path) as handle:
            handle.write(text)

    def write_trace(self, path: str, result: IrlsResult):
        """Per-iteration error series as CSV"""
        lines = [",".join(TRACE_HEADER)]
        for rec in result.trace:
            fields: Sequence[Any] = (rec.pk, rec.q, rec.error_norm, rec.step)
            lines.append(",".join([str(rec.iteration)] + [self.format_number(v) for v in fields]))
        with self.open_text(path, "w") as handle:
            handle.write("\n".join(lines) + "\n")
        logger.info(f"wrote {len(result.trace)} trace rows to {path}")


# Global file handler instance
matrix_files = MatrixFiles()

