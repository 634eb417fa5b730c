"""
Client-side state of remote listings and chunked file fetches.

Both classes are plain state machines: the owning node sends the datagrams
they ask for, feeds replies in and reports round timeouts. No I/O happens
here.

Fetches run stop-and-go: a batch of up to ``window`` chunk offsets is
requested, and the next batch starts once every chunk of the current one has
arrived. The first batch asks for offset 0 alone since its reply announces
the file size and digest. When a round times out every missing chunk of the
batch is charged one retry and the ``window`` request slots are spread over
the missing chunks, so a short tail is requested several times over.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import hashlib
import logging

import numpy as np

from ..search import OutsideSandbox
from ..wire import CHUNK_SIZE, ChunkStatus, ListStatus
from .server import ChecksumMismatch, NotADirectory, NotFound, Timeout, TooManyRetries

__all__ = ['FetchSession', 'ListingRequest', 'fetch_file', 'list_dir', 'FETCH_WINDOW', 'FETCH_MAX_RETRIES',
           'ROUND_TIMEOUT_MS', 'LIST_ATTEMPTS']

logger = logging.getLogger(__name__)

FETCH_WINDOW = 8
FETCH_MAX_RETRIES = 5
ROUND_TIMEOUT_MS = 500
LIST_ATTEMPTS = 3


def _status_error(status, rel_path):
    if status is ChunkStatus.OUTSIDE_SANDBOX or status is ListStatus.OUTSIDE_SANDBOX:
        return OutsideSandbox('{!r} is outside the remote sandbox'.format(rel_path))
    if status is ListStatus.NOT_A_DIRECTORY:
        return NotADirectory('{!r} is not a directory'.format(rel_path))
    return NotFound('{!r} not found on the remote node'.format(rel_path))


class FetchSession(object):
    """
    One file transfer from a peer

    Parameters
    ----------
    session_id : int
        Id echoed by every FILE_CHUNK of this transfer
    peer : str
        Endpoint of the serving node
    rel_path : str
        File path relative to the peer's sandbox
    window : int, optional
        Request slots per round. Default 8
    max_retries : int, optional
        Retries allowed per chunk. Default 5
    """

    def __init__(self, session_id, peer, rel_path, window=FETCH_WINDOW, max_retries=FETCH_MAX_RETRIES):
        if not 1 <= window <= 64:
            raise ValueError('fetch window must be within 1..64')
        self.session_id = session_id
        self.peer = peer
        self.rel_path = rel_path
        self.window = window
        self.max_retries = max_retries
        self.file_size = None
        self.digest = None
        self.received = None
        self.chunks = {}
        self.retries = {}
        self.batch = [0]
        self.rounds = 0
        self.result = None
        self.error = None
        self.on_done = None
        self.timer = None

    def __repr__(self):
        return 'FetchSession({}, {}:{}, {}/{} chunks)'.format(
            self.session_id, self.peer, self.rel_path, len(self.chunks), self.chunk_count or '?')

    @property
    def chunk_count(self):
        if self.file_size is None:
            return None
        return max(1, -(-self.file_size // CHUNK_SIZE))

    @property
    def done(self):
        return self.result is not None or self.error is not None

    @property
    def next_offset(self):
        """Offset of the first chunk still missing (the file size once complete)"""
        if self.received is None:
            return 0
        missing = np.flatnonzero(~self.received)
        return int(missing[0]) * CHUNK_SIZE if len(missing) else self.file_size

    def missing_in_batch(self):
        return [offset for offset in self.batch if offset not in self.chunks]

    def start(self):
        """Offsets to request in the first round"""
        self.rounds = 1
        return list(self.batch)

    def on_chunk(self, chunk):
        """
        Accepts one FILE_CHUNK

        Returns
        -------
        list of int
            Offsets to request next; empty while the current batch is still
            incomplete or once the transfer is finished
        """
        if self.done:
            return []
        if chunk.status != ChunkStatus.OK:
            self.error = _status_error(chunk.status, self.rel_path)
            return []
        if self.file_size is None:
            if chunk.offset != 0 or not chunk.digest:
                return []
            self.file_size = chunk.file_size
            self.digest = chunk.digest
            self.received = np.zeros(self.chunk_count, dtype=bool)
        index = chunk.offset // CHUNK_SIZE
        if chunk.offset % CHUNK_SIZE or index >= len(self.received) or self.received[index]:
            return []
        self.received[index] = True
        self.chunks[chunk.offset] = chunk.data
        if self.missing_in_batch():
            return []
        if self.received.all():
            self._finish()
            return []
        return self._next_batch()

    def _next_batch(self):
        missing = np.flatnonzero(~self.received)[:self.window]
        self.batch = [int(index) * CHUNK_SIZE for index in missing]
        self.rounds += 1
        return list(self.batch)

    def on_timeout(self):
        """
        Charges a retry to every missing chunk of the batch

        Returns
        -------
        list of int
            Offsets to request again, the window spread over the missing chunks

        Raises
        ------
        TooManyRetries
            If a chunk exceeded its retry budget (also recorded in ``error``)
        """
        missing = self.missing_in_batch()
        if self.done or not missing:
            return []
        for offset in missing:
            self.retries[offset] = self.retries.get(offset, 0) + 1
            if self.retries[offset] > self.max_retries:
                self.error = TooManyRetries('chunk at offset {} of {!r} lost {} times'.format(
                    offset, self.rel_path, self.retries[offset]))
                raise self.error
        self.rounds += 1
        logger.debug('fetch %s round %d re-requests %s', self.session_id, self.rounds, missing)
        return [missing[slot % len(missing)] for slot in range(self.window)]

    def _finish(self):
        data = b''.join(self.chunks[index * CHUNK_SIZE] for index in range(self.chunk_count))
        if len(data) != self.file_size or hashlib.sha256(data).digest() != self.digest:
            self.error = ChecksumMismatch('{!r} does not match the announced SHA-256'.format(self.rel_path))
            return
        self.result = data

    def outcome(self):
        """The fetched bytes; raises the transfer's error if it failed"""
        if self.error is not None:
            raise self.error
        if self.result is None:
            raise RuntimeError('fetch of {!r} has not finished'.format(self.rel_path))
        return self.result


class ListingRequest(object):
    """
    One LIST_DIR exchange, retried on timeout

    Parameters
    ----------
    peer : str
        Endpoint of the node to list
    rel_path : str
        Directory relative to the peer's sandbox
    attempts : int, optional
        Requests sent before giving up. Default 3
    """

    def __init__(self, peer, rel_path, attempts=LIST_ATTEMPTS):
        self.peer = peer
        self.rel_path = rel_path
        self.attempts = attempts
        self.sent = 0
        self.entries = None
        self.truncated = False
        self.error = None
        self.on_done = None
        self.msg_ids = []
        self.timer = None

    @property
    def done(self):
        return self.entries is not None or self.error is not None

    def send(self):
        self.sent += 1
        return self.rel_path

    def on_response(self, response):
        if self.done:
            return
        if response.status != ListStatus.OK:
            self.error = _status_error(response.status, self.rel_path)
            return
        self.entries = list(response.entries)
        self.truncated = response.truncated

    def on_timeout(self):
        """True if another request should be sent"""
        if self.done:
            return False
        if self.sent >= self.attempts:
            self.error = Timeout('no listing of {!r} from {} after {} attempts'.format(
                self.rel_path, self.peer, self.sent))
            return False
        return True

    def outcome(self):
        if self.error is not None:
            raise self.error
        if self.entries is None:
            raise RuntimeError('listing of {!r} has not finished'.format(self.rel_path))
        return self.entries


def fetch_file(node, peer, rel_path, drive):
    """
    Downloads one file from a peer and waits for the transfer to finish

    Parameters
    ----------
    node : Node
        Local node (member or client) sending the requests
    peer : str
        Endpoint of the serving node
    rel_path : str
        File path relative to the peer's sandbox
    drive : callable
        ``drive(until)`` runs the node's event loop until ``until()`` holds

    Returns
    -------
    bytes
        File contents, verified against the announced SHA-256

    Raises
    ------
    NotFound, OutsideSandbox, ChecksumMismatch, TooManyRetries
    """
    session = node.fetch(peer, rel_path)
    drive(lambda: session.done)
    return session.outcome()


def list_dir(node, peer, rel_path, drive):
    """
    Lists a directory of a peer's sandbox; entries come back sorted by name

    Raises
    ------
    NotFound, NotADirectory, OutsideSandbox, Timeout
    """
    request = node.list_dir(peer, rel_path)
    drive(lambda: request.done)
    return request.outcome()
