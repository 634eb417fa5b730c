"""
Deterministic discrete-event simulation of a whole overlay in one process

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    config
    trace
    network
"""

from .config import (SimConfig, NodeSpec, DocumentSpec, QuerySpec, LatencyRange, CacheSpec, ConfigInvalid,
                     load_sim_config, sim_config)
from .trace import (TraceEvent, TraceViolation, assert_trace, no_loop, at_most_once_serve, hop_bound,
                    message_budget, root_transit_fraction, route_forwards, servers, write_trace,
                    SEND, DELIVER, DROP, TIMER, SERVE)
from .network import SimNetwork, SimTransport, build_network, NotQuiescent, UnknownNode, sim_endpoint

__all__ = ['SimConfig', 'NodeSpec', 'DocumentSpec', 'QuerySpec', 'LatencyRange', 'CacheSpec',
           'ConfigInvalid', 'load_sim_config', 'sim_config', 'TraceEvent', 'TraceViolation',
           'assert_trace', 'no_loop', 'at_most_once_serve', 'hop_bound', 'message_budget',
           'root_transit_fraction', 'route_forwards', 'servers', 'write_trace', 'SEND', 'DELIVER',
           'DROP', 'TIMER', 'SERVE', 'SimNetwork', 'SimTransport', 'build_network', 'NotQuiescent',
           'UnknownNode', 'sim_endpoint']
