"""
Query routing protocol: greedy forwarding toward the target domain, exactly
once dissemination over the target subtree, and RESULT return to the
originator.

The functions take the owning :class:`~DomainSearch.node.protocol.Node` and
run on its event loop.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import logging
from dataclasses import dataclass

from ..domain import ROOT, is_ancestor_or_self
from ..overlay import CoverSend
from ..wire import Message, QueryMode, QueryPayload, ResultPayload, Tag, WireHit, MAX_MESSAGE_SIZE
from .aggregate import LateResult, QueryState, collect_results

__all__ = ['QueryHandle', 'handle_query', 'handle_result', 'start_query', 'close_query',
           'disseminate', 'continue_cover']

logger = logging.getLogger(__name__)

# RESULT header, responder address and flags stay well below this
_RESULT_BUDGET = MAX_MESSAGE_SIZE - 1024


@dataclass
class QueryHandle(object):
    """
    A query issued by this node, across its retry

    ``state`` is the aggregation of the current attempt; ``on_done`` is called
    with the handle once it finally closes.
    """
    query: object
    via: str = None
    expected: int = None
    on_done: object = None
    state: QueryState = None
    timer: object = None
    retried: bool = False
    done: bool = False


def _fit_hits(hits):
    kept, used = [], 0
    for hit in hits:
        try:
            size = 22 + len(hit.path.encode('utf-8')) + len(hit.snippet.encode('utf-8'))
        except UnicodeEncodeError:
            logger.warning('dropping hit %r: not encodable as UTF-8', hit.path)
            continue
        used += size
        if used > _RESULT_BUDGET:
            break
        kept.append(hit)
    return tuple(kept)


def reply_result(node, query, hits=(), dead_end=False, ttl_expired=False):
    payload = ResultPayload(node.addr, _fit_hits(hits), dead_end=dead_end, ttl_expired=ttl_expired)
    node.send(query.src.endpoint, Message(query.msg_id, 0, node.addr, payload))


def serve_query(node, message):
    """Runs the local search and answers the originator"""
    payload = message.payload
    node.observe('SERVE', message.src.node, node.addr.node, Tag.QUERY, message.msg_id,
                 payload.mode.name.lower())
    hits = node.index.search(payload.keywords, k=payload.k, match_all=payload.match_all)
    reply_result(node, message, [WireHit(hit.doc.rel_path, hit.score_micros, hit.doc.size, hit.snippet)
                                 for hit in hits])


def disseminate(node, message, sends):
    """Forwards `message` once per planned send, carrying the send's mode and scope"""
    for send in sends:
        if message.ttl == 0:
            node.metrics['ttl_exhausted'] += 1
            logger.debug('node %s cannot disseminate %s: ttl exhausted', node.addr.node, message.msg_id)
            return
        node.send(send.peer.endpoint, message.forwarded(mode=send.mode, scope=send.scope))


def continue_cover(node, message):
    """Sends that continue a dissemination received in COVER / RESIDENTS / DIRECT mode"""
    payload = message.payload
    if payload.mode is QueryMode.COVER:
        if not is_ancestor_or_self(payload.scope, node.domain):
            logger.warning('node %s in %s asked to cover %s', node.addr.node, node.domain, payload.scope)
            return []
        return node.table.cover_plan(payload.scope)
    if payload.mode is QueryMode.RESIDENTS:
        return [CoverSend(entry.peer, QueryMode.DIRECT) for entry in node.table.leaf_peers()]
    return []


def _route(node, message):
    payload = message.payload
    if not payload.client:
        node.table.cache_insert(message.src, payload.origin_domain)
    if is_ancestor_or_self(payload.target, node.domain):
        serve_query(node, message)
        disseminate(node, message, node.table.cover_plan(payload.target))
        return
    candidates = node.table.candidates_for(payload.target)
    if not candidates or message.ttl == 0:
        node.metrics['dead_ends' if not candidates else 'ttl_expired'] += 1
        reply_result(node, message, dead_end=not candidates, ttl_expired=bool(candidates))
        return
    nearest = candidates[0]
    node.table.touch(nearest.node)
    node.metrics['forwards'] += 1
    node.send(nearest.peer.endpoint, message.forwarded())


def handle_query(node, message):
    """
    Handles one QUERY

    In ROUTE mode a node inside the target subtree serves the query and
    covers the subtree; any other node forwards it to its nearest candidate
    or reports a dead end to the originator. In the dissemination modes the
    node serves and continues the plan. Duplicates are dropped.
    """
    if node.table is None:
        return
    if node.dedup.check_and_add((message.src.node, message.msg_id)):
        node.metrics['duplicates'] += 1
        return
    if message.payload.mode is QueryMode.ROUTE:
        _route(node, message)
        return
    serve_query(node, message)
    disseminate(node, message, continue_cover(node, message))


def handle_result(node, message):
    handle = node.queries.get(message.msg_id)
    if handle is None:
        node.metrics['late_results' if message.msg_id in node.closed_queries else 'stray_results'] += 1
        return
    try:
        collect_results(handle.state, message)
    except LateResult:
        node.metrics['late_results'] += 1
        return
    if handle.state.complete:
        close_query(node, handle)


def _launch(node, handle):
    query = handle.query
    msg_id = node.next_msg_id()
    deadline_ms = node.settings.deadline_ms
    handle.state = QueryState(msg_id, node.addr, query.target, tuple(query.keywords),
                              node.transport.now() + deadline_ms, handle.expected)
    node.queries[msg_id] = handle
    handle.timer = node.transport.call_later(deadline_ms, _on_deadline, node, msg_id)
    payload = QueryPayload(target=query.target, keywords=tuple(query.keywords),
                           origin_domain=node.domain if node.domain is not None else ROOT,
                           match_all=query.match_all, client=handle.via is not None, k=query.k)
    message = Message(msg_id, node.settings.ttl, node.addr, payload)
    if handle.via is not None:
        node.send(handle.via, message)
    else:
        handle_query(node, message)


def _on_deadline(node, msg_id):
    handle = node.queries.get(msg_id)
    if handle is not None:
        close_query(node, handle)


def start_query(node, query, via=None, expected=None, on_done=None):
    """
    Issues a query from `node`

    Parameters
    ----------
    node : Node
        Originator; must be joined unless `via` is given
    query : Query
        Parsed query
    via : str, optional
        Endpoint of a member node to inject the query at, for non-member clients
    expected : int, optional
        Close as soon as this many nodes served the query
    on_done : callable, optional
        Called with the :class:`QueryHandle` once it is closed for good

    Returns
    -------
    QueryHandle
    """
    handle = QueryHandle(query, via=via, expected=expected, on_done=on_done)
    _launch(node, handle)
    return handle


def close_query(node, handle):
    """
    Closes the current attempt; retries once under a new msg_id if no node
    served it
    """
    state = handle.state
    state.close()
    if handle.timer is not None:
        handle.timer.cancel()
    node.queries.pop(state.msg_id, None)
    node.closed_queries.check_and_add(state.msg_id)
    if not state.responders and not handle.retried and node.settings.retry_empty:
        handle.retried = True
        node.metrics['query_retries'] += 1
        logger.info('query %s got no responders, retrying once', state.msg_id)
        _launch(node, handle)
        return
    handle.done = True
    if handle.on_done is not None:
        handle.on_done(handle)
