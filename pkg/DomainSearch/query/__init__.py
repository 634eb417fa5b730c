"""
Query parsing, execution and result presentation

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    engine
"""

from .engine import (Query, parse_query, serialize_query, run_query, finish_query, format_hits,
                     QueryError, NoAtSign, EmptyKeywords, NotJoined, NoResults, DEFAULT_K)

__all__ = ['Query', 'parse_query', 'serialize_query', 'run_query', 'finish_query', 'format_hits',
           'QueryError', 'NoAtSign', 'EmptyKeywords', 'NotJoined', 'NoResults', 'DEFAULT_K']
