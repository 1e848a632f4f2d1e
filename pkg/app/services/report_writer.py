"""
Report writer for CLI output documents.
Renders RunDocument as indented `key: value` text or JSON and parses
either form back into the same model.
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple

from app.core.config import get_settings
from app.core.errors import UsageError
from app.models.schemas import OutputFormat, RunDocument

logger = logging.getLogger(__name__)

_INDENT = 2


def _is_container(value: Any) -> bool:
    return isinstance(value, (dict, list)) and len(value) > 0


def _scalar(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False)


def _emit(value: Any, depth: int, lines: List[str]) -> None:
    pad = " " * (depth * _INDENT)
    if isinstance(value, dict):
        for key, item in value.items():
            if _is_container(item):
                lines.append(f"{pad}{key}:")
                _emit(item, depth + 1, lines)
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    else:
        for item in value:
            if _is_container(item):
                lines.append(f"{pad}-")
                _emit(item, depth + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")


def render_text(data: dict) -> str:
    lines: List[str] = []
    _emit(data, 0, lines)
    return "\n".join(lines) + "\n"


def _depth(line: str) -> int:
    spaces = len(line) - len(line.lstrip(" "))
    if spaces % _INDENT:
        raise UsageError(f"bad indentation in document line {line!r}")
    return spaces // _INDENT


def _parse_block(lines: List[str], pos: int, depth: int) -> Tuple[Any, int]:
    is_list = lines[pos].strip().startswith("-")
    result: Any = [] if is_list else {}
    while pos < len(lines) and _depth(lines[pos]) == depth:
        stripped = lines[pos].strip()
        if is_list:
            if not stripped.startswith("-"):
                raise UsageError(f"expected a list item, got {stripped!r}")
            body = stripped[1:].strip()
            if body:
                result.append(json.loads(body))
                pos += 1
            else:
                item, pos = _parse_block(lines, pos + 1, depth + 1)
                result.append(item)
        else:
            if stripped.endswith(":") and ": " not in stripped:
                item, pos = _parse_block(lines, pos + 1, depth + 1)
                result[stripped[:-1]] = item
            else:
                key, sep, body = stripped.partition(": ")
                if not sep:
                    raise UsageError(f"expected `key: value`, got {stripped!r}")
                result[key] = json.loads(body)
                pos += 1
    if pos < len(lines) and _depth(lines[pos]) > depth:
        raise UsageError(f"unexpected indentation at {lines[pos]!r}")
    return result, pos


def parse_text(text: str) -> dict:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise UsageError("empty document")
    try:
        data, pos = _parse_block(lines, 0, 0)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed value in document: {e}")
    if pos != len(lines) or not isinstance(data, dict):
        raise UsageError("document does not parse to a mapping")
    return data


class ReportWriter:
    """
    Serializes run documents in the configured format.
    """

    def __init__(self):
        self.settings = get_settings()

    def render(self, document: RunDocument, fmt: Optional[str] = None) -> str:
        """
        Render a document.

        Args:
            document: the run document
            fmt: "text" or "json", defaulting to OUTPUT_FORMAT

        Returns:
            The document text, newline terminated
        """
        fmt = OutputFormat(fmt or self.settings.OUTPUT_FORMAT)
        data = document.model_dump(mode="json")
        if fmt is OutputFormat.JSON:
            return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        return render_text(data)

    def parse(self, text: str) -> RunDocument:
        """Parse either format; JSON is recognized by a leading brace."""
        if text.lstrip().startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise UsageError(f"malformed JSON document: {e}")
        else:
            data = parse_text(text)
        return RunDocument.model_validate(data)

    def write(self, document: RunDocument, out: Optional[str] = None, fmt: Optional[str] = None) -> str:
        text = self.render(document, fmt)
        if out:
            Path(out).write_text(text, encoding="utf-8")
            logger.info(f"Wrote {document.command.value} document to {out}")
        return text

    def read(self, path: str) -> RunDocument:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read document {path}: {e}")
        return self.parse(text)


# Singleton instance
_report_writer = None


def get_report_writer() -> ReportWriter:
    """Get or create report writer instance."""
    global _report_writer
    if _report_writer is None:
        _report_writer = ReportWriter()
    return _report_writer
