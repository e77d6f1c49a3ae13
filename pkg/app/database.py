# app/database.py

from typing import Any, Dict, Iterator, Optional
import logging

import sqlalchemy
from sqlalchemy import create_engine, select
from sqlalchemy.orm import sessionmaker

from config import settings
from app.arbiter_enums import Policy, WorkloadKind
from app.models import Base, SimulationRun
from app.arbiter_logger import logger_names

module_logger = logging.getLogger(logger_names.DATABASE)

class DatabaseHandler:
    """ Run history store for simulations, backed by any SQLAlchemy engine. """
    def __init__(self, db_url: Optional[str] = None):
        self.db_url = db_url or settings.DATABASE_URI
        if not self.db_url:
            raise ValueError(
                "No database URL given and settings.DATABASE_URI is not set."
            )
        self._Base = Base
        self._engine: Optional[sqlalchemy.engine.Engine] = None
        self._Session: Optional[sqlalchemy.orm.sessionmaker] = None
        self.session: Optional[sqlalchemy.orm.Session] = None

    # enable context management via __enter__ and __exit__
    def __enter__(self):
        """
        Enables clean opening of the data handler with a `with` statement.
        """
        self.load_data()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        """
        Enables clean closing of the data handler while in a `with`
        statement. Pending changes are only committed if no exception is
        propagating.
        """
        self.close(commit = exc_type is None)

    ############################################################################
    # interface methods
    def load_data(self):
        """
        Establish a connection to the database
        """
        try:
            self._engine = create_engine(self.db_url)

            # Create tables if they don't exist
            self._Base.metadata.create_all(self._engine)

            # update the attributes to point to the bound database
            self._Session = sessionmaker(bind=self._engine)
            # create the Session obj instance to use that database conn
            self.session = self._Session()
            module_logger.info("Connected to database: %s", self.db_url)

        except Exception as e:
            module_logger.error(
                "Error connecting to database.",
                exc_info = e
            )
            raise

    def close(self, commit: bool = True):
        """
        Close the connection to the database. SQLAlchemy handles connection
        pooling, so the connection is not explicitly closed here. Instead,
        dispose of the session and the engine.
        """
        try:
            if self.session:
                if commit:
                    self.session.commit()
                else:
                    self.session.rollback()
                self.session.close()
                self.session = None
                module_logger.info(
                    "Disconnected from database (session closed)."
                )
            if self._engine:
                self._engine.dispose()
                self._engine = None
                module_logger.info(
                    "Disconnected from database (engine disposed)."
                )

        except Exception as e:
            module_logger.error(
                "Error disconnecting from database.",
                exc_info = e
            )
            raise

    def _require_session(self):
        if not self.session:
            module_logger.error("Not connected to the database.")
            raise RuntimeError("Not connected to the database.")

    def record_run(
            self,
            arbiter_config,
            workload_spec,
            report_dict: Dict[str, Any]
        ) -> SimulationRun:
        """
        Insert a SimulationRun row for one simulation.

        Arguments
        ---------
            arbiter_config
                ArbiterConfig the simulation ran with.
            workload_spec
                WorkloadSpec that produced the trace.
            report_dict
                SimReport.to_dict() of the simulation.

        Returns
        -------
            The committed SimulationRun row.
        """
        self._require_session()
        explicit = WorkloadKind.from_value(workload_spec.kind) is WorkloadKind.EXPLICIT
        run = SimulationRun(
            num_ports = arbiter_config.num_ports,
            policy = arbiter_config.policy,
            time_slice = arbiter_config.time_slice,
            workload = workload_spec.kind,
            seed = None if explicit else workload_spec.seed,
            trace_path = workload_spec.trace_path,
        )
        run.apply_report(report_dict)
        self.session.add(run)
        self.session.commit()
        module_logger.info("Recorded %s.", run.__repr__())
        return run

    def fetch_runs(
            self,
            policy: Optional[Policy] = None
        ) -> Iterator[SimulationRun]:
        """
        Yield recorded runs in insertion order, optionally only those of one
        policy.

        Arguments
        ---------
            policy
                Policy to filter on, or None for every run.
        """
        self._require_session()
        statement = select(SimulationRun).order_by(SimulationRun.id.asc())
        if policy is not None:
            statement = statement.where(
                SimulationRun.policy == Policy.from_value(policy)
            )
        try:
            for row in self.session.execute(statement):
                yield row[0]
        except Exception as e:
            module_logger.error(
                "Error fetching simulation runs with policy %s.",
                policy,
                exc_info = e
            )
            raise
