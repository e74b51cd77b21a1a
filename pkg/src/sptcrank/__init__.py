"""Exact q-series tools for spt-crank-type functions, Bailey pairs and their identities."""

from .qseries import QSeries
from .ring import CycInt
from .zqseries import ZQSeries

__all__ = ["CycInt", "QSeries", "ZQSeries"]
__version__ = "0.1.0"
