# app/enum_column_type.py

from typing import Optional
from enum import Enum
from sqlalchemy import String
from sqlalchemy.types import TypeDecorator

class EnumColumnType(TypeDecorator):
    """
    SQLAlchemy does not know how to handle python Enum values as DB column
    values the way we want them stored. This class is the custom handling of
    a str column (stored as a VARCHAR or equivalent) and an associated python
    Enum whose `__str__` gives the stored text and whose `from_value()`
    classmethod parses it back.

    Used for the policy and workload columns of the SimulationRun table.
    """
    impl = String   # DB column is implemented as a SQLAlchemy String
    cache_ok = True

    def __init__(self, enum_class, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.enum_class = enum_class

    def process_bind_param(self, value: Optional[Enum], dialect):
        """
        Overwrite TypeDecorator.process_bind_param() method to implement custom
        handling for this object. Documentation:
        https://docs.sqlalchemy.org/en/20/core/custom_types.html#sqlalchemy.types.TypeDecorator.process_bind_param

        This is used to convert an instance of the python Enum class (e.g.
        Policy.SKIPSCAN) into a string that can be used in the SQL DB (e.g.
        "skipscan").
        """
        if value is None:
            return None
        return str(self.enum_class.from_value(value))

    def process_result_value(self, value: Optional[str], dialect) -> Optional[Enum]:
        """
        Overwrite TypeDecorator.process_result_value() method to implement
        custom handling for this object. Documentation:
        https://docs.sqlalchemy.org/en/20/core/custom_types.html#sqlalchemy.types.TypeDecorator.process_result_value

        This is used to convert a row column's value to the returned python
        type, for example a policy column value of "skipscan" in the DB is
        converted to Policy.SKIPSCAN.
        """
        if value is None:
            return None
        return self.enum_class.from_value(value)
