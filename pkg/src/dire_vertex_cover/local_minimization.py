"""
Local minimization of the represents-table endpoint set.

Three passes over the table (necessary vertices, top-down terminals, bottom-up
resolution) freeze endpoints into the cover or remove them; every freeze or removal
cascades through the represents lists.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any

from dire_vertex_cover.graph import VertexId
from dire_vertex_cover.maximal_matching import EndpointStatus, RepresentsTable

logger = logging.getLogger(__name__)

ACTIVE = EndpointStatus.ACTIVE
FROZEN = EndpointStatus.FROZEN
REMOVED = EndpointStatus.REMOVED


class FreezeCause(Enum):
    NECESSARY = "necessary"
    TERMINAL_TOPDOWN = "terminal-topdown"
    REMAINS_VS_REMOVED = "remains-vs-removed"
    COUNT_COMPARE = "count-compare"
    TIE = "tie"
    CASCADE_A = "cascadeA"
    CASCADE_B = "cascadeB"


class LocalMinimizationError(RuntimeError):
    """A bottom-up case the freeze/remove rules should make unreachable was reached."""

    def __init__(self, kind: str, row: int | None, detail: dict[str, Any] | None = None):
        self.kind = kind
        self.row = row
        self.detail = detail or {}
        super().__init__(f"{kind} at row {row}: {self.detail}")


def freeze_and_remove(
    table: RepresentsTable,
    freeze: VertexId | None = None,
    remove: VertexId | None = None,
    cause: FreezeCause = FreezeCause.NECESSARY,
) -> None:
    """
    Freeze one endpoint and/or remove another, then cascade.

    Cascade A freezes every active endpoint still representing the removed vertex.
    Cascade B removes every active endpoint whose represents list became empty.
    Both scan the table top-down, node1 first, re-checking status at visit time.
    """
    if freeze is None and remove is None:
        raise ValueError("freeze_and_remove() needs a vertex to freeze or to remove")
    if freeze is not None and freeze == remove:
        raise ValueError(f"Cannot freeze and remove the same vertex {freeze}")
    for v in (freeze, remove):
        if v is not None and (v not in table.endpoint_row or table.status(v) is not ACTIVE):
            raise ValueError(f"Vertex {v} is not an active endpoint of the table")

    names = table.graph.names
    if remove is not None:
        row = table.row_of(remove)
        row.set_status(remove, REMOVED)
        row.represents(remove).clear()
        table.removed.append(remove)
        table.emit(
            "removed", vertex=names[remove], row=table.endpoint_row[remove], cause=cause.value
        )

    if freeze is not None:
        row = table.row_of(freeze)
        row.set_status(freeze, FROZEN)
        table.cover.append(freeze)
        for other in table.rows:
            for entries in (other.list1, other.list2):
                if freeze in entries:
                    entries.remove(freeze)
        row.represents(freeze).clear()
        table.emit(
            "frozen", vertex=names[freeze], row=table.endpoint_row[freeze], cause=cause.value
        )

    if remove is not None:
        for e in list(table.endpoints_in_order()):
            if table.status(e) is ACTIVE and remove in table.represents(e):
                table.emit(
                    "cascade",
                    rule="A",
                    vertex=names[e],
                    row=table.endpoint_row[e],
                    trigger=names[remove],
                )
                freeze_and_remove(table, freeze=e, cause=FreezeCause.CASCADE_A)

    for e in list(table.endpoints_in_order()):
        if table.status(e) is ACTIVE and not table.represents(e):
            table.emit(
                "cascade", rule="B", vertex=names[e], row=table.endpoint_row[e], trigger=None
            )
            freeze_and_remove(table, remove=e, cause=FreezeCause.CASCADE_B)


def _freeze_necessary(table: RepresentsTable) -> None:
    endpoints = table.endpoints
    for v in list(table.endpoints_in_order()):
        if table.status(v) is not ACTIVE:
            continue
        if any(w not in endpoints for w in table.represents(v)):
            freeze_and_remove(table, freeze=v, cause=FreezeCause.NECESSARY)


def _represented_elsewhere(table: RepresentsTable, u: VertexId, holder: VertexId) -> bool:
    """True iff some active endpoint other than `holder` lists `u`."""
    return any(
        e != holder and u in table.represents(e) for e in table.active_endpoints()
    )


def _remove_terminals(table: RepresentsTable) -> None:
    for row in table.rows:
        if row.status1 is not ACTIVE or row.status2 is not ACTIVE:
            continue
        for u, v in ((row.node1, row.node2), (row.node2, row.node1)):
            if (
                table.represents(u) == [v]
                and len(table.represents(v)) > 1
                and not _represented_elsewhere(table, u, v)
            ):
                freeze_and_remove(table, freeze=v, remove=u, cause=FreezeCause.TERMINAL_TOPDOWN)
                break


def _represented_count(table: RepresentsTable, x: VertexId, partner: VertexId) -> int:
    return sum(
        1 for e in table.active_endpoints() if e != partner and x in table.represents(e)
    )


def _resolve_bottom_up(table: RepresentsTable) -> None:
    for index in range(len(table.rows) - 1, -1, -1):
        row = table.rows[index]
        statuses = (row.status1, row.status2)
        if FROZEN in statuses and ACTIVE not in statuses:
            continue
        if statuses == (ACTIVE, REMOVED):
            freeze_and_remove(table, freeze=row.node1, cause=FreezeCause.REMAINS_VS_REMOVED)
            continue
        if statuses == (REMOVED, ACTIVE):
            freeze_and_remove(table, freeze=row.node2, cause=FreezeCause.REMAINS_VS_REMOVED)
            continue
        if statuses != (ACTIVE, ACTIVE):
            raise LocalMinimizationError(
                "unexpected-statuses",
                index,
                {"status1": row.status1.value, "status2": row.status2.value},
            )
        if row.list1 != [row.node2] or row.list2 != [row.node1]:
            raise LocalMinimizationError(
                "lists-not-mutual",
                index,
                {"list1": list(row.list1), "list2": list(row.list2)},
            )

        count1 = _represented_count(table, row.node1, row.node2)
        count2 = _represented_count(table, row.node2, row.node1)
        if count1 > count2:
            freeze_and_remove(table, row.node1, row.node2, FreezeCause.COUNT_COMPARE)
        elif count2 > count1:
            freeze_and_remove(table, row.node2, row.node1, FreezeCause.COUNT_COMPARE)
        else:
            freeze_and_remove(table, row.node1, row.node2, FreezeCause.TIE)


def local_minimization(table: RepresentsTable) -> list[VertexId]:
    """
    Run the three freeze/remove stages on a fresh table.

    Returns:
        S, the frozen endpoints in freeze order (also left in `table.cover`)

    Raises:
        LocalMinimizationError: when a bottom-up row is in a state the stages exclude,
            or when an endpoint is still active at the end
    """
    if any(table.status(v) is not ACTIVE for v in table.endpoints_in_order()):
        raise ValueError("local_minimization() needs a table with every endpoint active")

    _freeze_necessary(table)
    _remove_terminals(table)
    _resolve_bottom_up(table)

    leftover = table.active_endpoints()
    if leftover:
        raise LocalMinimizationError("active-after-bottom-up", None, {"vertices": leftover})
    logger.debug("Froze %d of %d endpoints", len(table.cover), len(table.endpoint_row))
    return list(table.cover)
