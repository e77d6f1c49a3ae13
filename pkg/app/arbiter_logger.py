# app/arbiter_logger.py

from typing import Optional
import logging
from enum import Enum

class logger_names(str, Enum):
    """
    String Enum to contain the names for the various loggers used.
    Names/strings follow the expected magic naming of parent.child names. In
    this regard, rr_arbiter is the parent logger with children loggers for
    each module that gets called.
    """
    MAIN = "rr_arbiter"
    PLUGIN_LOADER = "rr_arbiter.plugin_loader"
    ARBITER = "rr_arbiter.arbiter_core"
    WORKLOAD = "rr_arbiter.workload"
    METRICS = "rr_arbiter.metrics"
    NETLIST = "rr_arbiter.netlist_model"
    VERIFY = "rr_arbiter.verification"
    DATABASE = "rr_arbiter.database"

def setup_logger(
        name,
        log_file: Optional[str] = None,
        file_level=logging.DEBUG,
        console_level=logging.WARNING
    ) -> logging.Logger:
    """
    Set up a logging manager that writes to stderr and, if a log file is
    given, to file. Only used to set up the logger_names.MAIN logger, all
    children loggers propagate their log events to the parent logger.

    stdout is reserved for machine readable output (JSON, CSV), so the
    console handler always writes to stderr.
    """
    logger = logging.getLogger(name)
    logger.setLevel(min(file_level, console_level))

    # create a uniform format for both handlers to use
    formatter = logging.Formatter(
        '{asctime}\t\t{levelname} {module:>15}({lineno}):\t{message}',
        style = "{" # specifically use {}-formatted or str.format() style
    )

    if log_file:
        file_handler = logging.FileHandler(
            log_file,
            mode = "a"
        )
        file_handler.setLevel(file_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # StreamHandler defaults to sys.stderr
    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(console_level)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    return logger

def clean_logger(logger):
    """ Clean up the logger's handler instances once we are done with them. """
    for handle in list(logger.handlers):
        handle.flush()
        handle.close()
        logger.removeHandler(handle)
