"""
Deterministic discrete-event network hosting many protocol nodes in one
process.

Events sit in a heap ordered by ``(tick, insertion order)``; the only source
of randomness is one seeded numpy generator, drawn from only when latency
varies or loss is enabled. Every node runs the same
:class:`~DomainSearch.node.protocol.Node` code as the daemon, over a
:class:`SimTransport` that encodes each message to bytes on send and decodes
it on delivery.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import heapq
import itertools
import logging

import numpy as np

from ..domain import is_ancestor_or_self
from ..node.protocol import Node
from ..node.transport import TimerHandle, Transport, describe
from ..query import parse_query
from ..search import SandboxRoot, SourceDocument, build_index, index_directory
from ..wire import NodeAddr, WireError, decode, encode
from .trace import DELIVER, DROP, SEND, TIMER, TraceEvent

__all__ = ['SimNetwork', 'SimTransport', 'build_network', 'NotQuiescent', 'UnknownNode', 'sim_endpoint']

logger = logging.getLogger(__name__)


class NotQuiescent(RuntimeError):
    """The tick budget ran out with events still queued; ``trace`` holds what ran"""

    def __init__(self, message, trace):
        super(NotQuiescent, self).__init__(message)
        self.trace = trace


class UnknownNode(KeyError):
    pass


def sim_endpoint(node_id):
    return 'sim:{}'.format(node_id)


def _endpoint_node(endpoint):
    prefix, _, number = endpoint.partition(':')
    if prefix != 'sim' or not number.isdigit():
        return None
    return int(number)


class SimTransport(Transport):
    """Transport of one simulated node; all state lives in the network"""

    def __init__(self, network, node_id):
        super(SimTransport, self).__init__()
        self.network = network
        self.node_id = node_id
        self.endpoint = sim_endpoint(node_id)

    def now(self):
        return self.network.tick

    def send(self, endpoint, message):
        self.network.transmit(self.node_id, endpoint, encode(message), message)

    def call_later(self, delay_ms, callback, *args):
        return self.network.schedule_timer(self.node_id, delay_ms, callback, args)

    def observe(self, kind, src, dst, tag, msg_id, detail=''):
        self.network.record(kind, src, dst, tag, msg_id, detail)


class SimNetwork(object):
    """
    A simulated overlay; use :func:`build_network` to create a joined one

    Parameters
    ----------
    config : SimConfig
        Scenario
    """

    def __init__(self, config):
        self.config = config
        self.settings = config.settings()
        self.tick = 0
        self.trace = []
        self.nodes = {}
        self.specs = {spec.id: spec for spec in config.nodes}
        self.dead = set()
        self.lossless = False
        self.rng = np.random.default_rng(config.seed)
        self._queue = []
        self._sequence = itertools.count()

    def __repr__(self):
        return 'SimNetwork({} nodes, tick {}, {} events)'.format(len(self.nodes), self.tick, len(self.trace))

    # ### population ###

    def _first_msg_id(self, node_id):
        # disjoint per-node ranges keep msg_ids unique across the whole trace
        return ((node_id & 0xFFFFFFFF) << 32) + 1

    def add_node(self, spec):
        """Creates the node of `spec` (not yet joined)"""
        sandbox = None
        if spec.sandbox is not None:
            sandbox = SandboxRoot(spec.sandbox)
            index = index_directory(sandbox, scheduler='sync')
        else:
            index = build_index([SourceDocument(doc.path, doc.text) for doc in spec.documents])
        node = Node(NodeAddr(spec.id, sim_endpoint(spec.id)), spec.domain, SimTransport(self, spec.id),
                    index=index, sandbox=sandbox, settings=self.settings,
                    first_msg_id=self._first_msg_id(spec.id))
        self.nodes[spec.id] = node
        return node

    def add_client(self, node_id):
        """Creates a non-member client node that can inject queries at members"""
        if node_id in self.nodes:
            raise ValueError('node id {} is already in use'.format(node_id))
        node = Node(NodeAddr(node_id, sim_endpoint(node_id)), None, SimTransport(self, node_id),
                    settings=self.settings, first_msg_id=self._first_msg_id(node_id))
        self.nodes[node_id] = node
        return node

    def node(self, node_id):
        if node_id not in self.nodes or node_id in self.dead:
            raise UnknownNode(node_id)
        return self.nodes[node_id]

    @property
    def live_ids(self):
        return sorted(node_id for node_id, node in self.nodes.items()
                      if node_id not in self.dead and node.is_member)

    # ### event queue ###

    def _push(self, due, event):
        heapq.heappush(self._queue, (due, next(self._sequence), event))

    def record(self, kind, src, dst, tag=None, msg_id=0, detail=''):
        event = TraceEvent(self.tick, kind, src, dst, tag, msg_id, detail)
        self.trace.append(event)
        logger.debug(event.line())

    def transmit(self, src, endpoint, data, message):
        dst = _endpoint_node(endpoint)
        self.record(SEND, src, dst, message.tag, message.msg_id, describe(message))
        if dst is None or dst not in self.nodes or dst in self.dead:
            self.record(DROP, src, dst, message.tag, message.msg_id, 'unreachable')
            return
        if not self.lossless and self.config.loss_rate > 0 and self.rng.random() < self.config.loss_rate:
            self.record(DROP, src, dst, message.tag, message.msg_id, 'loss')
            return
        latency = self.config.latency
        delay = latency.min if latency.min == latency.max else int(self.rng.integers(latency.min, latency.max + 1))
        self._push(self.tick + delay, ('deliver', dst, data))

    def schedule_timer(self, node_id, delay, callback, args):
        handle = TimerHandle(self.tick + delay, callback, args)
        self._push(handle.due, ('timer', node_id, handle))
        return handle

    def step(self):
        """Processes the next event; False once the queue is empty"""
        if not self._queue:
            return False
        due, _, (kind, node_id, item) = heapq.heappop(self._queue)
        self.tick = due
        if kind == 'timer':
            if not item.cancelled and node_id not in self.dead:
                self.record(TIMER, node_id, node_id, None, 0, getattr(item.callback, '__name__', 'timer'))
                item.fire()
            return True
        node = self.nodes[node_id]
        if node_id in self.dead:
            return True
        try:
            message = decode(item)
        except WireError as err:
            node.on_decode_error(err)
            return True
        self.record(DELIVER, message.src.node, node_id, message.tag, message.msg_id, describe(message))
        node.on_message(message)
        return True

    def _budget(self, max_ticks):
        return self.tick + (max_ticks if max_ticks is not None else self.config.max_ticks)

    def run_until_quiescent(self, max_ticks=None):
        """
        Processes events until none is left

        Returns
        -------
        list of TraceEvent
            The whole trace so far

        Raises
        ------
        NotQuiescent
            If events remain past `max_ticks` from now
        """
        limit = self._budget(max_ticks)
        while self._queue:
            if self._queue[0][0] > limit:
                raise NotQuiescent('events remain after tick {}'.format(limit), self.trace)
            self.step()
        return self.trace

    def run_until(self, until, max_ticks=None):
        """Processes events until ``until()`` holds; returns whether it does"""
        limit = self._budget(max_ticks)
        while not until():
            if not self._queue:
                return False
            if self._queue[0][0] > limit:
                raise NotQuiescent('condition still unmet after tick {}'.format(limit), self.trace)
            self.step()
        return True

    def drive(self, until):
        """``drive`` callable for :func:`DomainSearch.query.run_query`"""
        if not self.run_until(until):
            raise NotQuiescent('network went quiet before the condition held', self.trace)

    # ### scenario operations ###

    def join(self, node_id, bootstrap_id=None):
        node = self.nodes[node_id]
        bootstrap = sim_endpoint(bootstrap_id) if bootstrap_id is not None else None
        node.join(bootstrap)
        self.run_until_quiescent()
        if node.join_error is not None:
            raise node.join_error

    def inject_query(self, origin, text, match_all=False, expected=None, via=None):
        """
        Issues ``keywords@domain`` `text` from node `origin`

        Returns
        -------
        QueryHandle
            Closed once the network ran long enough; see ``handle.done``
        """
        node = self.node(origin)
        query = parse_query(text, match_all=match_all, k=self.settings.k)
        return node.start_query(query, via=sim_endpoint(via) if via is not None else None, expected=expected)

    def kill_node(self, node_id):
        """
        Removes a node silently; every live node referencing it starts
        probing it and drops it once the probes go unanswered
        """
        self.node(node_id)
        self.dead.add(node_id)
        logger.info('killed node %s at tick %s', node_id, self.tick)
        for other in self.live_ids:
            node = self.nodes[other]
            if node.table.references(node_id):
                node.probe(node_id)

    # ### oracles ###

    def ground_truth(self, target):
        """Ids of the live members whose domain lies in the `target` subtree"""
        return {node_id for node_id in self.live_ids
                if is_ancestor_or_self(target, self.specs[node_id].domain)}

    def group_gateways(self):
        """Vertex to the ids of its n-tuple gateways: the n smallest live ids of its subtree"""
        vertices = set()
        for node_id in self.live_ids:
            vertices.update(self.specs[node_id].domain.ancestors())
        return {vertex: sorted(self.ground_truth(vertex))[:self.settings.n_tuple] for vertex in vertices}

    def root_layer_gateways(self):
        return sorted(self.live_ids)[:self.settings.n_tuple]


def build_network(config):
    """
    Creates every node of `config` and joins them one after the other through
    the bootstrap node, running to quiescence after each join

    Parameters
    ----------
    config : SimConfig
        Scenario

    Returns
    -------
    SimNetwork
    """
    network = SimNetwork(config)
    network.lossless = config.lossless_build
    bootstrap = config.bootstrap_id
    ordered = [network.specs[bootstrap]] + [spec for spec in config.nodes if spec.id != bootstrap]
    for spec in ordered:
        network.add_node(spec)
        network.join(spec.id, None if spec.id == bootstrap else bootstrap)
    network.lossless = False
    logger.info('built a network of %d nodes at tick %d', len(network.nodes), network.tick)
    return network
