"""
The runnable node: configuration, the loop thread that owns a
:class:`~DomainSearch.node.protocol.Node` on a UDP socket, and the ephemeral
client the command line uses to talk to a running daemon.

A node configuration file is a YAML mapping::

    node_id: 7
    endpoint: 127.0.0.1:4700
    domain: all.education.operating systems
    bootstrap: 127.0.0.1:4600        # omit to found a new network
    sandbox: /srv/shared
    index_cache: /var/cache/sp2p/7.sidx
    n_tuple: 2
    cache.policy: lru                # or mind
    cache.capacity: 32
    ttl: 16
    deadline_ms: 2000
    probe_interval_ms: 0             # periodic liveness probes, 0 = off

``SP2P_ENDPOINT`` and ``SP2P_SANDBOX`` override ``endpoint`` and ``sandbox``.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import logging
import os
import queue
import threading
import time
from concurrent.futures import Future
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..domain import DomainPath, parse_domain_path
from ..files import fetch_file, list_dir
from ..overlay import CachePolicy, DEFAULT_CACHE_CAPACITY, DEFAULT_N_TUPLE
from ..search import SandboxRoot, index_directory, load_or_build, save_index
from ..wire import MAX_NODE_ID, MAX_TTL, NodeAddr, WireError
from .protocol import Node
from .settings import NodeSettings, describe_validation_error, read_config_file
from .transport import UdpTransport, parse_endpoint

__all__ = ['NodeConfig', 'CacheConfig', 'load_node_config', 'node_config', 'Daemon', 'Client', 'start',
           'ConfigError', 'JoinFailed', 'ENV_ENDPOINT', 'ENV_SANDBOX']

logger = logging.getLogger(__name__)

ENV_ENDPOINT = 'SP2P_ENDPOINT'
ENV_SANDBOX = 'SP2P_SANDBOX'


class ConfigError(ValueError):
    pass


class JoinFailed(RuntimeError):
    pass


class CacheConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    policy: CachePolicy = CachePolicy.LRU
    capacity: int = Field(DEFAULT_CACHE_CAPACITY, ge=0)


class NodeConfig(BaseModel):
    """Identity, sharing and protocol settings of one daemon"""
    model_config = ConfigDict(frozen=True, extra='forbid', arbitrary_types_allowed=True)

    node_id: int = Field(ge=0, le=MAX_NODE_ID)
    endpoint: str
    domain: DomainPath
    bootstrap: Optional[str] = None
    sandbox: str
    index_cache: Optional[str] = None
    n_tuple: int = Field(DEFAULT_N_TUPLE, ge=1, le=255)
    cache: CacheConfig = CacheConfig()
    ttl: int = Field(16, ge=0, le=MAX_TTL)
    deadline_ms: int = Field(2000, ge=1)
    probe_interval_ms: int = Field(0, ge=0)

    @field_validator('domain', mode='before')
    @classmethod
    def _parse_domain(cls, value):
        return value if isinstance(value, DomainPath) else parse_domain_path(str(value))

    @field_validator('endpoint', 'bootstrap')
    @classmethod
    def _check_endpoint(cls, value):
        if value is not None:
            parse_endpoint(value)
        return value

    @field_validator('sandbox')
    @classmethod
    def _check_sandbox(cls, value):
        if not os.path.isdir(value):
            raise ValueError('sandbox root {!r} is not a directory'.format(value))
        return value

    def to_settings(self):
        return NodeSettings(n_tuple=self.n_tuple, cache_policy=self.cache.policy,
                            cache_capacity=self.cache.capacity, ttl=self.ttl, deadline_ms=self.deadline_ms)


def node_config(**fields):
    """Builds a :class:`NodeConfig`, raising :class:`ConfigError` naming the bad field"""
    try:
        return NodeConfig(**fields)
    except ValidationError as err:
        raise ConfigError(describe_validation_error(err))


def load_node_config(path, environ=None):
    """
    Reads a node configuration file and applies the environment overrides

    Parameters
    ----------
    path : str
        YAML file
    environ : dict, optional
        Environment to read overrides from. Default ``os.environ``

    Returns
    -------
    NodeConfig

    Raises
    ------
    ConfigError
    """
    environ = os.environ if environ is None else environ
    try:
        data = read_config_file(path)
    except (OSError, ValueError) as err:
        raise ConfigError(str(err))
    if environ.get(ENV_ENDPOINT):
        data['endpoint'] = environ[ENV_ENDPOINT]
    if environ.get(ENV_SANDBOX):
        data['sandbox'] = environ[ENV_SANDBOX]
    return node_config(**data)


def _random_msg_base():
    return int(np.random.default_rng().integers(1, 2 ** 48))


class Daemon(object):
    """
    Owns one member node and the thread running its event loop

    Every protocol state change happens on the loop thread; other threads hand
    work over with :meth:`submit`.

    Parameters
    ----------
    config : NodeConfig
        Daemon configuration
    verbose : bool, optional
        Print indexing summaries. Default False
    """

    def __init__(self, config, verbose=False):
        self.config = config
        self.verbose = verbose
        self.sandbox = SandboxRoot(config.sandbox)
        index = load_or_build(self.sandbox, config.index_cache, verbose=verbose)
        self.transport = UdpTransport(config.endpoint)
        self.node = Node(NodeAddr(config.node_id, self.transport.endpoint), config.domain, self.transport,
                         index=index, sandbox=self.sandbox, settings=config.to_settings(),
                         first_msg_id=_random_msg_base())
        self._inbox = queue.Queue()
        self._stopping = threading.Event()
        self._thread = None
        self._reindex_lock = threading.Lock()

    def __repr__(self):
        return 'Daemon({})'.format(self.node)

    @property
    def endpoint(self):
        return self.transport.endpoint

    # ### loop thread ###

    def run(self):
        """Serves the node until :meth:`stop`"""
        logger.info('node %s serving %s at %s', self.node.addr.node, self.node.domain, self.endpoint)
        if self.config.probe_interval_ms:
            self.transport.call_later(self.config.probe_interval_ms, self._probe_round)
        try:
            while not self._stopping.is_set():
                self._drain()
                self.transport.poll(max_wait_ms=20)
        finally:
            self.transport.close()
            logger.info('node %s stopped', self.node.addr.node)

    def _drain(self):
        while True:
            try:
                function, args, future = self._inbox.get_nowait()
            except queue.Empty:
                return
            if not future.set_running_or_notify_cancel():
                continue
            try:
                future.set_result(function(*args))
            except Exception as err:
                future.set_exception(err)

    def _probe_round(self):
        self.node.probe_all()
        self.transport.call_later(self.config.probe_interval_ms, self._probe_round)

    def start_in_thread(self):
        self._thread = threading.Thread(target=self.run, name='sp2p-{}'.format(self.node.addr.node),
                                        daemon=True)
        self._thread.start()
        return self._thread

    def stop(self, timeout=5.0):
        self._stopping.set()
        if self._thread is not None:
            self._thread.join(timeout)

    # ### cross-thread API ###

    def submit(self, function, *args):
        """
        Runs ``function(*args)`` on the loop thread

        Returns
        -------
        concurrent.futures.Future
        """
        future = Future()
        self._inbox.put((function, args, future))
        return future

    def call(self, start, timeout=None):
        """
        Runs ``start(on_done)`` on the loop thread and waits until the
        operation it begins calls ``on_done(result)``
        """
        done = Future()

        def begin():
            try:
                start(done.set_result)
            except Exception as err:
                done.set_exception(err)

        self.submit(begin)
        return done.result(timeout)

    def join_overlay(self):
        """
        Joins through the configured bootstrap, or founds a network

        Raises
        ------
        JoinFailed
        """
        settings = self.node.settings
        timeout = settings.join_timeout_ms * (settings.join_attempts + 1) / 1000.0
        try:
            error = self.call(lambda on_done: self.node.join(self.config.bootstrap, on_done), timeout=timeout)
        except Exception as err:
            raise JoinFailed('node {} could not join: {}'.format(self.node.addr, err))
        if error is not None:
            raise JoinFailed('node {} could not join: {}'.format(self.node.addr, error))

    def reindex(self):
        """
        Rebuilds the index off the loop thread, rewrites the cache and swaps
        the new index in

        Returns
        -------
        InvertedIndex
        """
        with self._reindex_lock:
            index = index_directory(self.sandbox, verbose=self.verbose)
            if self.config.index_cache:
                try:
                    save_index(index, self.config.index_cache)
                except (OSError, WireError) as err:
                    logger.warning('could not write index cache %s: %s', self.config.index_cache, err)
            self.submit(self.node.set_index, index).result()
        logger.info('node %s reindexed: %d documents', self.node.addr.node, index.doc_count)
        return index


def start(config, verbose=False):
    """
    Indexes the sandbox, binds the endpoint, starts the loop thread and joins
    the overlay

    Parameters
    ----------
    config : NodeConfig
        Daemon configuration
    verbose : bool, optional
        Print indexing summaries

    Returns
    -------
    Daemon
        Running daemon; call :meth:`Daemon.stop` to shut it down

    Raises
    ------
    BindFailed, JoinFailed
    """
    daemon = Daemon(config, verbose=verbose)
    daemon.start_in_thread()
    try:
        daemon.join_overlay()
    except JoinFailed:
        daemon.stop()
        raise
    return daemon


class Client(object):
    """
    Ephemeral non-member node driven synchronously by the calling thread

    Parameters
    ----------
    bind : str, optional
        Local endpoint; the daemon answers to it directly. Default
        ``127.0.0.1:0``
    settings : NodeSettings, optional
        Protocol tunables
    """

    def __init__(self, bind='127.0.0.1:0', settings=None):
        self.transport = UdpTransport(bind)
        node_id = int(np.random.default_rng().integers(1, 2 ** 63))
        self.node = Node(NodeAddr(node_id, self.transport.endpoint), None, self.transport,
                         settings=settings, first_msg_id=_random_msg_base())

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def drive(self, until, timeout_s=60.0):
        """Polls the socket and timers until ``until()`` holds"""
        give_up = time.monotonic() + timeout_s
        while not until():
            if time.monotonic() > give_up:
                raise TimeoutError('client gave up after {} s'.format(timeout_s))
            self.transport.poll(max_wait_ms=20)

    def list_dir(self, endpoint, rel_path=''):
        return list_dir(self.node, endpoint, rel_path, self.drive)

    def fetch(self, endpoint, rel_path):
        return fetch_file(self.node, endpoint, rel_path, self.drive)

    def close(self):
        self.transport.close()
