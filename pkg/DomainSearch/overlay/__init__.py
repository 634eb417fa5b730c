"""
Virtual hierarchical group tree: groups, gateway election and the dual route table

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    groups
    routes
"""

from .groups import GroupId, GroupView, elect_gateways
from .routes import (RouteKind, CachePolicy, RouteEntry, CoverSend, RouteTable, JoinError,
                     BootstrapUnreachable, JoinRejected, DEFAULT_N_TUPLE, DEFAULT_CACHE_CAPACITY)

__all__ = ['GroupId', 'GroupView', 'elect_gateways', 'RouteKind', 'CachePolicy', 'RouteEntry',
           'CoverSend', 'RouteTable', 'JoinError', 'BootstrapUnreachable', 'JoinRejected',
           'DEFAULT_N_TUPLE', 'DEFAULT_CACHE_CAPACITY']
