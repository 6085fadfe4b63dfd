"""
Logging endpoints
Exposes the in-memory ring of command runs and analysis failures
"""

from collections import Counter
from datetime import datetime
from typing import Optional

from fastapi import APIRouter, Query

from schemas.common import LogLevel, SystemLog
from utils import create_success_response, add_system_log
from utils.errors import SYSTEM_LOGS

router = APIRouter(prefix="/logs", tags=["logs"])


def _matches(
    log: SystemLog,
    level: Optional[LogLevel],
    component: Optional[str],
    error_type: Optional[str],
    command: Optional[str],
    since: Optional[datetime],
) -> bool:
    details = log.details or {}
    if level and log.level != level:
        return False
    if component and log.component.lower() != component.lower():
        return False
    if error_type and details.get("error_type") != error_type:
        return False
    if command and details.get("command") != command:
        return False
    return not (since and log.timestamp < since)


@router.get("")
async def get_system_logs(
    level: Optional[LogLevel] = Query(None, description="Filter by log level"),
    component: Optional[str] = Query(None, description="Filter by component (Medium, FD, DG, cli, ...)"),
    error_type: Optional[str] = Query(None, description="Filter by error type, e.g. PoleAtResonance"),
    command: Optional[str] = Query(None, description="Filter by CLI command"),
    since: Optional[datetime] = Query(None, description="Only entries at or after this timestamp"),
    limit: int = Query(100, ge=1, le=1000, description="Maximum number of entries"),
):
    """Newest-first log entries plus failure counts per component"""
    selected = [log for log in SYSTEM_LOGS if _matches(log, level, component, error_type, command, since)]
    selected.sort(key=lambda log: log.timestamp, reverse=True)
    failures = Counter(log.component for log in selected if log.level in (LogLevel.ERROR, LogLevel.CRITICAL))

    return create_success_response(
        {
            "logs": [log.model_dump(mode="json") for log in selected[:limit]],
            "total_logs": len(SYSTEM_LOGS),
            "filtered_count": len(selected),
            "failures_by_component": dict(failures),
        }
    )


@router.delete("")
async def clear_system_logs():
    """Empty the ring; the clear itself is the first new entry"""
    cleared = len(SYSTEM_LOGS)
    SYSTEM_LOGS.clear()
    add_system_log(LogLevel.INFO.value, "system", "System logs cleared via API", {"cleared": cleared})

    return create_success_response({"cleared": cleared, "cleared_at": datetime.now().isoformat()})
