"""
Response and output helpers: API envelopes and CSV/JSON serialization of sweep tables
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

from schemas.responses import APIResponse


def create_success_response(result: Union[str, Dict[str, Any], List[Any]]) -> APIResponse:
    """
    Create successful API response

    Args:
        result: Response data

    Returns:
        APIResponse object with success=True
    """
    return APIResponse(result=result, success=True)


def complex_pair(value: complex) -> Dict[str, float]:
    """JSON form of a complex number"""
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def rows_to_csv(header: List[str], rows: Iterable[Dict[str, Any]]) -> str:
    """CSV text with a header row; floats use repr so the text round-trips"""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: repr(v) if isinstance(v, float) else v for key, v in row.items()})
    return buffer.getvalue()


def rows_to_json(name: str, header: List[str], rows: Iterable[Dict[str, Any]]) -> str:
    return json.dumps({"name": name, "columns": header, "rows": list(rows)}, sort_keys=True, indent=2) + "\n"


def write_table(table, path: Path, fmt: str = "csv") -> Path:
    """
    Serialize a SweepTable

    Args:
        table: Object with name, header and to_rows()
        path: Output file; parents are created
        fmt: "csv" or "json"

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        text = rows_to_json(table.name, table.header, table.to_rows())
    else:
        text = rows_to_csv(table.header, table.to_rows())
    path.write_text(text, encoding="utf-8")
    return path
