# app/models.py

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional
from enum import Enum

from sqlalchemy import JSON, inspect
from sqlalchemy.orm import DeclarativeBase, mapped_column, Mapped

from app.arbiter_enums import Policy, WorkloadKind
from app.enum_column_type import EnumColumnType

class InfoKeys(str, Enum):
    """
    Metadata info tags for columns in the SimulationRun table.
    REPORT_KEY names the SimReport field a column is filled from.
    """
    REPORT_KEY = "report_key"

class Base(DeclarativeBase):
    pass

class SimulationRun(Base):
    """
    SQLAlchemy model of one recorded simulation: the arbiter and workload
    configuration plus the resulting SimReport.
    """
    __tablename__ = 'SimulationRun'

    id: Mapped[int] = mapped_column(primary_key=True)
    timeCreated: Mapped[datetime] = mapped_column(
        default=lambda: datetime.now(timezone.utc)
    )

    # configuration
    num_ports: Mapped[int] = mapped_column(nullable=False)
    policy: Mapped[Policy] = mapped_column(
        EnumColumnType(Policy),
        nullable=False
    )
    # NULL is an unlimited slice
    time_slice: Mapped[Optional[int]]
    workload: Mapped[WorkloadKind] = mapped_column(
        EnumColumnType(WorkloadKind),
        nullable=False
    )
    seed: Mapped[Optional[int]]
    trace_path: Mapped[Optional[str]]

    # results
    total_cycles: Mapped[int] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "total_cycles"}
    )
    turn_hits: Mapped[int] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "turn_hits"}
    )
    turn_misses: Mapped[int] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "turn_misses"}
    )
    lost_cycles: Mapped[int] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "lost_cycles"}
    )
    utilization: Mapped[float] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "utilization"}
    )
    jain_index: Mapped[float] = mapped_column(
        info = {InfoKeys.REPORT_KEY: "jain_index"}
    )
    grants_per_port: Mapped[List[int]] = mapped_column(
        JSON,
        info = {InfoKeys.REPORT_KEY: "grants_per_port"}
    )
    max_wait_per_port: Mapped[List[int]] = mapped_column(
        JSON,
        info = {InfoKeys.REPORT_KEY: "max_wait_per_port"}
    )

    def __repr__(self):
        slice_string = "unlimited" if self.time_slice is None else self.time_slice
        return (f"<{self.__class__.__name__}(id={self.id},"
                + f" policy='{self.policy}',"
                + f" num_ports={self.num_ports},"
                + f" time_slice={slice_string},"
                + f" workload='{self.workload}',"
                + f" jain_index={self.jain_index})>")

    ############################################################################
    # Interface methods
    @classmethod
    def get_report_key_mapping(cls) -> Dict[str, str]:
        """
        Return a dict whose keys are SimReport field names and whose values
        are the attribute names of the associated columns.
        """
        mapper = inspect(cls)
        return {
            column.info[InfoKeys.REPORT_KEY]: column.key
            for column in mapper.columns
            if InfoKeys.REPORT_KEY in column.info
        }

    def apply_report(self, report_dict: Dict[str, Any]) -> None:
        """ Copy the mapped SimReport values onto this row. """
        for report_key, attr in self.get_report_key_mapping().items():
            if report_key in report_dict:
                setattr(self, attr, report_dict[report_key])

    def to_dict(self) -> Dict[str, Any]:
        """ Row as a flat JSON-ready dict. """
        mapper = inspect(self.__class__)
        row = {}
        for column in mapper.columns:
            value = getattr(self, column.key)
            if isinstance(value, Enum):
                value = str(value)
            elif isinstance(value, datetime):
                value = value.isoformat()
            row[column.key] = value
        return row
