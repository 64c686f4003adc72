"""Reader/writer for the ARFF subset the repository consumes and emits.

Supported: numeric and nominal attributes, dense comma- or space-separated
data rows, ``?`` unknowns, ``%`` comments, quoted names and values.
Rejected with a clear error: string, date and relational attributes, and
sparse ``{...}`` data rows.

Output is canonical: lowercase keywords, comma separators, ``\\n`` line
ends, numeric values trimmed of trailing zeros.  Parsing a canonical
document and writing it back is byte-identical (comments are dropped).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArffError, DataError
from .model import AttributeSpec, CellValue, Dataset, require_valid

#: Cells of a document row: numbers, nominal category text, or None (missing).
DocCell = float | str | None

_PLAIN_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-")


@dataclass(frozen=True)
class ArffDocument:
    """A parsed ARFF file, without dataset semantics attached."""

    relation: str
    attributes: tuple[AttributeSpec, ...]
    rows: tuple[tuple[DocCell, ...], ...]


def format_number(value: float) -> str:
    """Canonical numeric cell: up to 6 decimals with trailing zeros trimmed,
    falling back to the full repr when 6 decimals would lose the value."""
    short = f"{value:.6f}".rstrip("0").rstrip(".")
    if short in ("", "-", "-0"):
        short = "0"
    if float(short) == value:
        return short
    return repr(float(value))


def _quote(token: str) -> str:
    if token and all(c in _PLAIN_CHARS for c in token) and token != "?":
        return token
    escaped = token.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def _tokenize(line: str, lineno: int) -> list[tuple[str, bool]]:
    """Split a line into (token, was_quoted) pairs.

    Commas and runs of whitespace both separate tokens, so comma and
    space separated files parse identically.
    """
    tokens: list[tuple[str, bool]] = []
    i, n = 0, len(line)
    pending_comma = False
    while i < n:
        while i < n and line[i] in " \t":
            i += 1
        if i >= n:
            break
        c = line[i]
        if c == ",":
            if pending_comma or not tokens:
                raise ArffError("empty value", lineno)
            pending_comma = True
            i += 1
            continue
        pending_comma = False
        if c in "'\"":
            quote = c
            i += 1
            buf = []
            while i < n:
                ch = line[i]
                if ch == "\\" and i + 1 < n:
                    buf.append(line[i + 1])
                    i += 2
                    continue
                if ch == quote:
                    break
                buf.append(ch)
                i += 1
            else:
                raise ArffError("unterminated quote", lineno)
            i += 1
            tokens.append(("".join(buf), True))
        else:
            j = i
            while j < n and line[j] not in " \t,":
                j += 1
            tokens.append((line[i:j], False))
            i = j
    if pending_comma:
        raise ArffError("empty value", lineno)
    return tokens


def _parse_categories(body: str, lineno: int) -> tuple[str, ...]:
    inner = body.strip()
    if not (inner.startswith("{") and inner.endswith("}")):
        raise ArffError(f"bad nominal specification '{body}'", lineno)
    cats = [tok for tok, _ in _tokenize(inner[1:-1], lineno)]
    if not cats:
        raise ArffError("empty category list", lineno)
    if len(set(cats)) != len(cats):
        raise ArffError("duplicate categories", lineno)
    return tuple(cats)


def _read_token(text: str, pos: int, lineno: int) -> tuple[str, int]:
    """Read one (possibly quoted) token starting at ``pos``; returns the
    unescaped token and the position just past it."""
    n = len(text)
    while pos < n and text[pos] in " \t":
        pos += 1
    if pos >= n:
        raise ArffError("missing token", lineno)
    if text[pos] in "'\"":
        quote = text[pos]
        pos += 1
        buf = []
        while pos < n:
            ch = text[pos]
            if ch == "\\" and pos + 1 < n:
                buf.append(text[pos + 1])
                pos += 2
                continue
            if ch == quote:
                return "".join(buf), pos + 1
            buf.append(ch)
            pos += 1
        raise ArffError("unterminated quote", lineno)
    start = pos
    while pos < n and text[pos] not in " \t":
        pos += 1
    return text[start:pos], pos


def _parse_attribute_line(rest: str, lineno: int) -> AttributeSpec:
    rest = rest.strip()
    if not rest:
        raise ArffError("missing attribute name", lineno)
    name, pos = _read_token(rest, 0, lineno)
    type_part = rest[pos:].strip()
    if not type_part:
        raise ArffError("missing attribute type", lineno)
    if type_part.startswith("{"):
        return AttributeSpec(name, _parse_categories(type_part, lineno))
    kind = type_part.split()[0].lower()
    if kind in ("numeric", "real", "integer"):
        return AttributeSpec(name)
    if kind in ("string", "date", "relational"):
        raise ArffError(f"unsupported attribute type '{kind}'", lineno)
    raise ArffError(f"unknown attribute type '{type_part}'", lineno)


def parse_document(text: str) -> ArffDocument:
    """Parse ARFF text into a typed document."""
    relation: str | None = None
    attributes: list[AttributeSpec] = []
    rows: list[tuple[DocCell, ...]] = []
    in_data = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        lowered = line.lower()
        if not in_data:
            if lowered.startswith("@relation"):
                rest = line[len("@relation"):].strip()
                if not rest:
                    raise ArffError("malformed header: empty relation name",
                                    lineno)
                relation = _tokenize(rest, lineno)[0][0]
            elif lowered.startswith("@attribute"):
                attributes.append(
                    _parse_attribute_line(line[len("@attribute"):], lineno))
            elif lowered.startswith("@data"):
                if relation is None or not attributes:
                    raise ArffError("malformed header: @data before "
                                    "@relation/@attribute", lineno)
                in_data = True
            else:
                raise ArffError(f"malformed header: unexpected '{line[:30]}'",
                                lineno)
            continue

        if line.startswith("{"):
            raise ArffError("sparse data rows are not supported", lineno)
        tokens = _tokenize(line, lineno)
        if len(tokens) != len(attributes):
            raise ArffError(f"expected {len(attributes)} values, "
                            f"got {len(tokens)}", lineno)
        row: list[DocCell] = []
        for spec, (token, quoted) in zip(attributes, tokens):
            if token == "?" and not quoted:
                row.append(None)
            elif spec.is_nominal:
                if token not in spec.categories:
                    raise ArffError(f"undeclared category '{token}'", lineno)
                row.append(token)
            else:
                try:
                    row.append(float(token))
                except ValueError:
                    raise ArffError(f"invalid numeric value '{token}'",
                                    lineno) from None
        rows.append(tuple(row))

    if not in_data:
        raise ArffError("malformed header: missing @data section")
    return ArffDocument(relation or "", tuple(attributes), tuple(rows))


def write_document(doc: ArffDocument) -> str:
    """Render a document in canonical form."""
    lines = [f"@relation {_quote(doc.relation)}", ""]
    for spec in doc.attributes:
        if spec.is_nominal:
            cats = ",".join(_quote(c) for c in spec.categories)
            lines.append(f"@attribute {_quote(spec.name)} {{{cats}}}")
        else:
            lines.append(f"@attribute {_quote(spec.name)} numeric")
    lines.append("")
    lines.append("@data")
    for r, row in enumerate(doc.rows):
        if len(row) != len(doc.attributes):
            raise DataError(f"row {r} has {len(row)} values, "
                            f"expected {len(doc.attributes)}")
        cells = []
        for spec, value in zip(doc.attributes, row):
            if value is None:
                cells.append("?")
            elif isinstance(value, str):
                cells.append(_quote(value))
            else:
                cells.append(format_number(float(value)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def document_to_dataset(doc: ArffDocument,
                        class_attribute: str | None = None) -> Dataset:
    """Attach dataset semantics: resolve the class attribute and turn
    nominal text into category indices."""
    if not doc.attributes:
        raise DataError("document has no attributes")
    if class_attribute is None:
        class_index = len(doc.attributes) - 1
    else:
        names = [a.name for a in doc.attributes]
        try:
            class_index = names.index(class_attribute)
        except ValueError:
            raise DataError(f"no attribute named '{class_attribute}'") from None
    rows = []
    for row in doc.rows:
        converted: list[CellValue] = []
        for spec, value in zip(doc.attributes, row):
            if value is None or spec.is_numeric:
                converted.append(value)
            else:
                converted.append(spec.categories.index(value))
        rows.append(tuple(converted))
    return Dataset(doc.relation, doc.attributes, tuple(rows), class_index)


def parse_arff(text: str, class_attribute: str | None = None) -> Dataset:
    """Parse ARFF text into a dataset; the last attribute is the class
    unless one is named."""
    return document_to_dataset(parse_document(text), class_attribute)


def dataset_to_document(dataset: Dataset) -> ArffDocument:
    rows = []
    for row in dataset.instances:
        cells: list[DocCell] = []
        for spec, value in zip(dataset.attributes, row):
            if value is None:
                cells.append(None)
            elif spec.is_nominal:
                cells.append(spec.categories[int(value)])
            else:
                cells.append(float(value))
        rows.append(tuple(cells))
    return ArffDocument(dataset.name, dataset.attributes, tuple(rows))


def write_arff(dataset: Dataset) -> str:
    """Render a valid dataset in canonical ARFF form."""
    require_valid(dataset)
    return write_document(dataset_to_document(dataset))


def _is_numeric_token(cell: DocCell) -> bool:
    if isinstance(cell, (int, float)):
        return True
    try:
        float(cell)
        return True
    except (TypeError, ValueError):
        return False


def write_meta_table(headers: list[str], rows: list[list[DocCell]],
                     relation: str) -> str:
    """Emit a meta-data table as ARFF.

    Columns are numeric unless every observed value is a non-numeric
    token, in which case they become nominal over the observed tokens.
    ``None`` cells emit ``?``.  String cells that look numeric are written
    verbatim, which lets callers pin a rendering such as ``96.80``.
    """
    for r, row in enumerate(rows):
        if len(row) != len(headers):
            raise DataError(f"row {r} has {len(row)} values, "
                            f"expected {len(headers)}")
    attributes = []
    for c, header in enumerate(headers):
        observed = [row[c] for row in rows if row[c] is not None]
        if all(_is_numeric_token(v) for v in observed):
            attributes.append(AttributeSpec(header))
        elif all(isinstance(v, str) and not _is_numeric_token(v)
                 for v in observed):
            categories: list[str] = []
            for v in observed:
                if v not in categories:
                    categories.append(v)
            attributes.append(AttributeSpec(header, tuple(categories)))
        else:
            raise DataError(f"column '{header}' mixes numeric and "
                            "non-numeric tokens")
    doc = ArffDocument(relation, tuple(attributes),
                       tuple(tuple(row) for row in rows))
    return write_document(doc)
