"""
Query routing toward a target domain and aggregation of the answers

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    aggregate
    handling
"""

from .aggregate import Hit, QueryState, collect_results, DedupWindow, LateResult, DeadEnd, DEDUP_WINDOW
from .handling import (QueryHandle, handle_query, handle_result, start_query, close_query,
                       disseminate, continue_cover)

__all__ = ['Hit', 'QueryState', 'collect_results', 'DedupWindow', 'LateResult', 'DeadEnd',
           'DEDUP_WINDOW', 'QueryHandle', 'handle_query', 'handle_result', 'start_query',
           'close_query', 'disseminate', 'continue_cover']
