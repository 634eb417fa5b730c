"""
The protocol node: one event loop body shared by the daemon and the simulator.

A :class:`Node` owns every piece of per-node protocol state (route table,
local index, pending queries, transfers and probes) and reacts to one message
or timer at a time. It never blocks; the transport decides how datagrams and
timers reach it.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import itertools
import logging
from collections import Counter

from ..files import FetchSession, ListingRequest, TooManyRetries, chunk_response, listing_response
from ..overlay import RouteTable
from ..router import DedupWindow, handle_query, handle_result, start_query
from ..search import build_index
from ..wire import ChunkStatus, FileChunk, FileReq, ListDirReq, ListStatus, ListDirResp, Message, Tag, WireError
from . import membership
from .settings import NodeSettings

__all__ = ['Node']

logger = logging.getLogger(__name__)


class Node(object):
    """
    One overlay participant, or a non-member client when `domain` is None

    Parameters
    ----------
    addr : NodeAddr
        Identity and endpoint of this node
    domain : DomainPath or None
        Domain the node joins; None makes a client that can only inject
        queries at a member and talk to peers directly
    transport : Transport
        Datagram transport, clock and timers
    index : InvertedIndex, optional
        Local search index. Default: empty
    sandbox : SandboxRoot, optional
        Shared directory served to LIST_DIR / FILE_REQ. Default: nothing is shared
    settings : NodeSettings, optional
        Protocol tunables
    first_msg_id : int, optional
        First message id this node allocates
    """

    def __init__(self, addr, domain, transport, index=None, sandbox=None, settings=None, first_msg_id=1):
        self.addr = addr
        self.domain = domain
        self.transport = transport
        self.settings = settings if settings is not None else NodeSettings()
        self.table = None
        if domain is not None:
            self.table = RouteTable(addr, domain, n_tuple=self.settings.n_tuple,
                                    capacity=self.settings.cache_capacity,
                                    policy=self.settings.cache_policy)
        self.index = index if index is not None else build_index([])
        self.sandbox = sandbox
        self.dedup = DedupWindow(self.settings.dedup_window)
        self.closed_queries = DedupWindow(self.settings.dedup_window)
        self.metrics = Counter()
        self.queries = {}
        self.fetches = {}
        self.listings = {}
        self.probes = {}
        self.pending_join = None
        self.joined = False
        self.join_error = None
        self._msg_ids = itertools.count(first_msg_id)
        self._handlers = {
            Tag.JOIN_REQ: membership.handle_join_req,
            Tag.JOIN_ACK: membership.handle_join_ack,
            Tag.QUERY: handle_query,
            Tag.RESULT: handle_result,
            Tag.PING: membership.handle_ping,
            Tag.PONG: membership.handle_pong,
            Tag.LIST_DIR_REQ: Node._handle_list_req,
            Tag.LIST_DIR_RESP: Node._handle_list_resp,
            Tag.FILE_REQ: Node._handle_file_req,
            Tag.FILE_CHUNK: Node._handle_file_chunk,
        }
        transport.attach(self)

    def __repr__(self):
        return 'Node({}, {})'.format(self.addr, self.domain if self.domain is not None else 'client')

    @property
    def is_member(self):
        return self.table is not None

    def next_msg_id(self):
        return next(self._msg_ids)

    def send(self, endpoint, message):
        try:
            self.transport.send(endpoint, message)
        except WireError as err:
            self.metrics['encode_errors'] += 1
            logger.warning('node %s could not encode %s: %s', self.addr.node, message.tag.name, err)

    def observe(self, kind, src, dst, tag, msg_id, detail=''):
        self.transport.observe(kind, src, dst, tag, msg_id, detail)

    # ### incoming ###

    def on_decode_error(self, error):
        self.metrics['decode_errors'] += 1
        logger.debug('node %s dropped a malformed datagram: %s', self.addr.node, error)

    def on_message(self, message):
        """Dispatches one decoded message to its handler"""
        self.metrics['received'] += 1
        self._handlers[message.tag](self, message)

    # ### overlay ###

    def join(self, bootstrap=None, on_done=None):
        """Joins (or founds) the overlay; see :func:`membership.start_join`"""
        if self.table is None:
            raise RuntimeError('a client node cannot join the overlay')
        membership.start_join(self, bootstrap, on_done)

    def probe(self, peer_id):
        membership.probe(self, peer_id)

    def probe_all(self):
        """Probes every referenced peer once"""
        if self.table is None:
            return
        for entry in self.table.known_peers():
            membership.probe(self, entry.node)

    def set_index(self, index):
        """Swaps in a rebuilt index; queries in flight finish on the old one"""
        self.index = index

    # ### queries ###

    def start_query(self, query, via=None, expected=None, on_done=None):
        """Issues `query` from this node; see :func:`DomainSearch.router.start_query`"""
        return start_query(self, query, via=via, expected=expected, on_done=on_done)

    # ### file access: serving side ###

    def _handle_list_req(self, message):
        rel_path = message.payload.rel_path
        if self.sandbox is None:
            response = ListDirResp(ListStatus.NOT_FOUND, rel_path)
        else:
            response = listing_response(self.sandbox, rel_path)
        self.send(message.src.endpoint, Message(message.msg_id, 0, self.addr, response))

    def _handle_file_req(self, message):
        request = message.payload
        for offset in request.offsets:
            chunk = self._chunk(request, offset)
            self.send(message.src.endpoint, Message(self.next_msg_id(), 0, self.addr, chunk))

    def _chunk(self, request, offset):
        if self.sandbox is None:
            return FileChunk(request.session_id, ChunkStatus.NOT_FOUND, offset)
        return chunk_response(self.sandbox, request.session_id, request.rel_path, offset)

    # ### file access: client side ###

    def list_dir(self, endpoint, rel_path='', on_done=None):
        """
        Lists a directory of the peer at `endpoint`

        Parameters
        ----------
        endpoint : str
            Peer endpoint
        rel_path : str, optional
            Directory relative to the peer's sandbox. Default: its root
        on_done : callable, optional
            Called with the finished :class:`ListingRequest`

        Returns
        -------
        ListingRequest
        """
        request = ListingRequest(endpoint, rel_path, attempts=self.settings.list_attempts)
        request.on_done = on_done
        self._send_listing(request)
        return request

    def _send_listing(self, request):
        msg_id = self.next_msg_id()
        request.msg_ids.append(msg_id)
        self.listings[msg_id] = request
        self.send(request.peer, Message(msg_id, 0, self.addr, ListDirReq(request.send())))
        request.timer = self.transport.call_later(self.settings.list_timeout_ms, self._on_listing_timeout,
                                                  msg_id)

    def _on_listing_timeout(self, msg_id):
        request = self.listings.get(msg_id)
        if request is None or request.msg_ids[-1] != msg_id:
            return
        if request.on_timeout():
            self._send_listing(request)
        else:
            self._finish_listing(request)

    def _handle_list_resp(self, message):
        request = self.listings.get(message.msg_id)
        if request is None or request.done:
            return
        request.on_response(message.payload)
        self._finish_listing(request)

    def _finish_listing(self, request):
        request.timer.cancel()
        for msg_id in request.msg_ids:
            self.listings.pop(msg_id, None)
        if request.on_done is not None:
            request.on_done(request)

    def fetch(self, endpoint, rel_path, on_done=None):
        """
        Fetches a file from the peer at `endpoint` in 8 KiB chunks

        Parameters
        ----------
        endpoint : str
            Peer endpoint, normally the responder of a search hit
        rel_path : str
            File path relative to the peer's sandbox
        on_done : callable, optional
            Called with the finished :class:`FetchSession`

        Returns
        -------
        FetchSession
        """
        session = FetchSession(self.next_msg_id(), endpoint, rel_path, window=self.settings.fetch_window,
                               max_retries=self.settings.fetch_retries)
        session.on_done = on_done
        self.fetches[session.session_id] = session
        self._request_chunks(session, session.start())
        return session

    def _request_chunks(self, session, offsets):
        # one datagram per requested copy, so losses hit copies independently
        for offset in offsets:
            request = FileReq(session.session_id, session.rel_path, (offset,))
            self.send(session.peer, Message(self.next_msg_id(), 0, self.addr, request))
        if session.timer is not None:
            session.timer.cancel()
        session.timer = self.transport.call_later(self.settings.fetch_timeout_ms, self._on_fetch_timeout,
                                                  session.session_id, session.rounds)

    def _on_fetch_timeout(self, session_id, round_number):
        session = self.fetches.get(session_id)
        if session is None or session.rounds != round_number:
            return
        self.metrics['fetch_timeouts'] += 1
        try:
            offsets = session.on_timeout()
        except TooManyRetries as err:
            logger.warning('fetch of %r from %s failed: %s', session.rel_path, session.peer, err)
            self._finish_fetch(session)
            return
        self._request_chunks(session, offsets)

    def _handle_file_chunk(self, message):
        chunk = message.payload
        session = self.fetches.get(chunk.session_id)
        if session is None:
            self.metrics['stray_chunks'] += 1
            return
        offsets = session.on_chunk(chunk)
        if session.done:
            self._finish_fetch(session)
        elif offsets:
            self._request_chunks(session, offsets)

    def _finish_fetch(self, session):
        if session.timer is not None:
            session.timer.cancel()
        self.fetches.pop(session.session_id, None)
        if session.on_done is not None:
            session.on_done(session)
