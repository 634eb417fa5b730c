"""
Overlay membership protocol: joining through a bootstrap node, announcing a
new member (or a newly elected gateway) to every node that has to record it,
and detecting failed peers with PING probes.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import logging
from dataclasses import dataclass, field

from ..domain import ROOT
from ..overlay import BootstrapUnreachable, JoinRejected
from ..router import continue_cover, disseminate
from ..wire import JoinAck, JoinReq, Message, Ping, Pong, QueryMode

__all__ = ['JoinAttempt', 'Probe', 'start_join', 'handle_join_req', 'handle_join_ack', 'announce',
           'handle_ping', 'handle_pong', 'probe', 'peer_failed']

logger = logging.getLogger(__name__)


@dataclass
class JoinAttempt(object):
    bootstrap: str
    on_done: object = None
    attempts: int = 0
    msg_ids: set = field(default_factory=set)
    timer: object = None


@dataclass
class Probe(object):
    peer: object
    attempts: int = 0
    timer: object = None


# ### joining ###

def start_join(node, bootstrap=None, on_done=None):
    """
    Joins the overlay in ``node.domain``

    Parameters
    ----------
    node : Node
        Joining node
    bootstrap : str, optional
        Endpoint of any member. None (or the node's own endpoint) founds a
        new network
    on_done : callable, optional
        Called with None on success or the :class:`JoinError` on failure
    """
    if bootstrap is None or bootstrap == node.addr.endpoint:
        node.joined = True
        logger.info('node %s founded a network in %s', node.addr, node.domain)
        if on_done is not None:
            on_done(None)
        return
    node.pending_join = JoinAttempt(bootstrap, on_done)
    _send_join_req(node)


def _send_join_req(node):
    attempt = node.pending_join
    attempt.attempts += 1
    msg_id = node.next_msg_id()
    attempt.msg_ids.add(msg_id)
    node.send(attempt.bootstrap, Message(msg_id, node.settings.ttl, node.addr, JoinReq(node.addr, node.domain)))
    attempt.timer = node.transport.call_later(node.settings.join_timeout_ms, _on_join_timeout, node, msg_id)


def _on_join_timeout(node, msg_id):
    attempt = node.pending_join
    if attempt is None or msg_id not in attempt.msg_ids:
        return
    if attempt.attempts >= node.settings.join_attempts:
        _finish_join(node, BootstrapUnreachable('no JOIN_ACK from {} after {} attempts'.format(
            attempt.bootstrap, attempt.attempts)))
    else:
        _send_join_req(node)


def _finish_join(node, error):
    attempt = node.pending_join
    node.pending_join = None
    if attempt.timer is not None:
        attempt.timer.cancel()
    node.join_error = error
    if error is not None:
        logger.error('node %s failed to join: %s', node.addr, error)
    if attempt.on_done is not None:
        attempt.on_done(error)


def _duplicate_id(node, joiner):
    if joiner.node == node.addr.node:
        return joiner.endpoint != node.addr.endpoint
    known = node.table.lookup(joiner.node)
    return known is not None and known.peer.endpoint != joiner.endpoint


def handle_join_req(node, message):
    """
    Routes a JOIN_REQ greedily toward the joiner's domain; a member of that
    domain, or the nearest node when none is reachable, answers with its
    per-layer group views.
    """
    if node.table is None or not node.joined:
        return
    if node.dedup.check_and_add((message.src.node, message.msg_id)):
        node.metrics['duplicates'] += 1
        return
    request = message.payload
    if _duplicate_id(node, request.joiner):
        reason = 'node id {} is already in use'.format(request.joiner.node)
        node.send(request.joiner.endpoint, Message(message.msg_id, 0, node.addr,
                                                   JoinAck(False, node.domain, reason=reason)))
        return
    if request.domain != node.domain and message.ttl > 0:
        candidates = [entry for entry in node.table.candidates_for(request.domain)
                      if entry.node != request.joiner.node]
        if candidates:
            node.table.cache_insert(request.joiner, request.domain)
            node.table.touch(candidates[0].node)
            node.send(candidates[0].peer.endpoint, message.forwarded())
            return
    layers = tuple(view.to_snapshot() for view in node.table.group_views())
    node.send(request.joiner.endpoint, Message(message.msg_id, 0, node.addr,
                                               JoinAck(True, node.domain, layers)))
    if not node.table.offer(request.joiner, request.domain):
        node.table.cache_insert(request.joiner, request.domain)


def handle_join_ack(node, message):
    attempt = node.pending_join
    if attempt is None or message.msg_id not in attempt.msg_ids:
        return
    ack = message.payload
    if not ack.accepted:
        _finish_join(node, JoinRejected(ack.reason or 'join rejected'))
        return
    node.table.offer(message.src, ack.responder_domain)
    node.table.apply_join_ack(ack.layers)
    node.joined = True
    logger.info('node %s joined %s through %s', node.addr, node.domain, message.src)
    _finish_join(node, None)
    announce(node)
    for gateway in node.table.gateways_of(node.domain):
        if gateway.node != node.addr.node:
            node.send(gateway.peer.endpoint, Message(node.next_msg_id(), 0, node.addr, Ping(node.domain)))


def announce(node, scope=None):
    """
    Disseminates an announcement PING over the subtree whose nodes have to
    record this node (see :meth:`RouteTable.announce_scope`)
    """
    scope = scope or node.table.announce_scope()
    msg_id = node.next_msg_id()
    node.dedup.check_and_add((node.addr.node, msg_id))
    message = Message(msg_id, node.settings.ttl, node.addr,
                      Ping(node.domain, announce=True, mode=QueryMode.COVER, scope=scope))
    logger.debug('node %s announces itself over %s', node.addr.node, scope)
    disseminate(node, message, node.table.cover_plan(scope))


# ### liveness ###

def handle_ping(node, message):
    ping = message.payload
    if ping.announce:
        if node.table is None or node.dedup.check_and_add((message.src.node, message.msg_id)):
            return
        node.table.offer(message.src, ping.domain)
        disseminate(node, message, continue_cover(node, message))
        return
    if node.table is not None:
        node.table.offer(message.src, ping.domain)
    node.send(message.src.endpoint, Message(message.msg_id, 0, node.addr,
                                            Pong(node.domain if node.domain is not None else ROOT)))


def handle_pong(node, message):
    if node.table is not None:
        node.table.offer(message.src, message.payload.domain)
    pending = node.probes.pop(message.src.node, None)
    if pending is not None and pending.timer is not None:
        pending.timer.cancel()


def probe(node, peer_id):
    """
    Checks that a referenced peer is alive; after ``ping_attempts`` silent
    PINGs it is dropped from the route table
    """
    if node.table is None or peer_id in node.probes:
        return
    entry = node.table.lookup(peer_id)
    if entry is None:
        return
    node.probes[peer_id] = Probe(entry.peer)
    _send_probe(node, peer_id)


def _send_probe(node, peer_id):
    pending = node.probes[peer_id]
    pending.attempts += 1
    node.send(pending.peer.endpoint, Message(node.next_msg_id(), 0, node.addr, Ping(node.domain)))
    pending.timer = node.transport.call_later(node.settings.ping_timeout_ms, _on_probe_timeout, node, peer_id)


def _on_probe_timeout(node, peer_id):
    pending = node.probes.get(peer_id)
    if pending is None:
        return
    if pending.attempts < node.settings.ping_attempts:
        _send_probe(node, peer_id)
        return
    del node.probes[peer_id]
    peer_failed(node, peer_id)


def peer_failed(node, peer_id):
    """Drops a dead peer and re-announces this node if it became a gateway anywhere"""
    before = set(node.table.gateway_vertices())
    if node.table.handle_peer_failure(peer_id):
        node.metrics['peer_failures'] += 1
        logger.info('node %s dropped unresponsive peer %s', node.addr.node, peer_id)
    if set(node.table.gateway_vertices()) - before:
        announce(node)
