"""
The protocol node, its transports, the daemon and the command line

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    settings
    transport
    membership
    protocol
    daemon
    cli
"""

from .settings import NodeSettings, read_config_file, describe_validation_error
from .transport import Transport, TimerHandle, UdpTransport, BindFailed, parse_endpoint, describe
from .protocol import Node
from .daemon import (NodeConfig, CacheConfig, load_node_config, node_config, Daemon, Client, start,
                     ConfigError, JoinFailed)

__all__ = ['NodeSettings', 'read_config_file', 'describe_validation_error', 'Transport', 'TimerHandle',
           'UdpTransport', 'BindFailed', 'parse_endpoint', 'describe', 'Node', 'NodeConfig', 'CacheConfig',
           'load_node_config', 'node_config', 'Daemon', 'Client', 'start', 'ConfigError', 'JoinFailed']
