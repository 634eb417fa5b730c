"""
The closed set of protocol messages exchanged between nodes.

Every message shares one header (``msg_id``, ``ttl`` and the sender's
:class:`NodeAddr`) and carries exactly one variant payload. Payloads are
frozen dataclasses; sequences inside them are tuples so messages compare and
hash by value.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

from dataclasses import dataclass, field
from enum import IntEnum

from ..domain import DomainPath

__all__ = ['Tag', 'QueryMode', 'ListStatus', 'ChunkStatus', 'EntryKind', 'NodeAddr',
           'GroupSnapshot', 'PeerInfo', 'WireHit', 'DirEntry',
           'JoinReq', 'JoinAck', 'QueryPayload', 'ResultPayload', 'ListDirReq',
           'ListDirResp', 'FileReq', 'FileChunk', 'Ping', 'Pong', 'Message',
           'MAX_NODE_ID', 'MAX_TTL', 'CHUNK_SIZE']

MAX_NODE_ID = 2 ** 64 - 1
MAX_TTL = 64
CHUNK_SIZE = 8192


class Tag(IntEnum):
    JOIN_REQ = 0x01
    JOIN_ACK = 0x02
    QUERY = 0x03
    RESULT = 0x04
    LIST_DIR_REQ = 0x05
    LIST_DIR_RESP = 0x06
    FILE_REQ = 0x07
    PING = 0x08
    FILE_CHUNK = 0x09
    PONG = 0x0A


class QueryMode(IntEnum):
    """How a receiver treats a QUERY (or announcement PING)"""
    ROUTE = 0       # greedy forwarding toward the target domain
    COVER = 1       # serve, then cover the whole ``scope`` subtree
    RESIDENTS = 2   # serve, then hand to the other residents of the own domain
    DIRECT = 3      # serve only


class ListStatus(IntEnum):
    OK = 0
    NOT_FOUND = 1
    OUTSIDE_SANDBOX = 2
    NOT_A_DIRECTORY = 3


class ChunkStatus(IntEnum):
    OK = 0
    NOT_FOUND = 1
    OUTSIDE_SANDBOX = 2
    BAD_OFFSET = 3


class EntryKind(IntEnum):
    FILE = 0
    DIR = 1


@dataclass(frozen=True, order=True)
class NodeAddr(object):
    """
    Stable node identity plus the transport endpoint it is reachable at

    Parameters
    ----------
    node : int
        64-bit unsigned node id
    endpoint : str
        ``host:port`` for UDP, ``sim:<id>`` inside the simulator
    """
    node: int
    endpoint: str

    def __post_init__(self):
        if not isinstance(self.node, int) or not 0 <= self.node <= MAX_NODE_ID:
            raise ValueError('node id must be a 64-bit unsigned integer, got {!r}'.format(self.node))
        if not self.endpoint:
            raise ValueError('endpoint may not be empty')

    def __str__(self):
        return '{}@{}'.format(self.node, self.endpoint)


@dataclass(frozen=True)
class PeerInfo(object):
    addr: NodeAddr
    domain: DomainPath


@dataclass(frozen=True)
class GroupSnapshot(object):
    """One layer of a JOIN_ACK: the sender's view of the group at `prefix`"""
    prefix: DomainPath
    members: tuple = ()
    gateways: tuple = ()


@dataclass(frozen=True)
class WireHit(object):
    path: str
    score_micros: int
    size: int
    snippet: str = ''


@dataclass(frozen=True)
class DirEntry(object):
    name: str
    kind: EntryKind
    size: int = 0


@dataclass(frozen=True)
class JoinReq(object):
    TAG = Tag.JOIN_REQ
    joiner: NodeAddr
    domain: DomainPath


@dataclass(frozen=True)
class JoinAck(object):
    TAG = Tag.JOIN_ACK
    accepted: bool
    responder_domain: DomainPath
    layers: tuple = ()
    reason: str = ''


@dataclass(frozen=True)
class QueryPayload(object):
    TAG = Tag.QUERY
    target: DomainPath
    keywords: tuple
    origin_domain: DomainPath
    mode: QueryMode = QueryMode.ROUTE
    scope: DomainPath = None
    match_all: bool = False
    client: bool = False
    k: int = 10


@dataclass(frozen=True)
class ResultPayload(object):
    TAG = Tag.RESULT
    responder: NodeAddr
    hits: tuple = ()
    dead_end: bool = False
    ttl_expired: bool = False


@dataclass(frozen=True)
class ListDirReq(object):
    TAG = Tag.LIST_DIR_REQ
    rel_path: str = ''


@dataclass(frozen=True)
class ListDirResp(object):
    TAG = Tag.LIST_DIR_RESP
    status: ListStatus
    rel_path: str = ''
    entries: tuple = ()
    truncated: bool = False


@dataclass(frozen=True)
class FileReq(object):
    TAG = Tag.FILE_REQ
    session_id: int
    rel_path: str
    offsets: tuple = ()


@dataclass(frozen=True)
class FileChunk(object):
    TAG = Tag.FILE_CHUNK
    session_id: int
    status: ChunkStatus
    offset: int = 0
    file_size: int = 0
    eof: bool = False
    digest: bytes = b''
    data: bytes = b''


@dataclass(frozen=True)
class Ping(object):
    TAG = Tag.PING
    domain: DomainPath
    announce: bool = False
    mode: QueryMode = QueryMode.DIRECT
    scope: DomainPath = None


@dataclass(frozen=True)
class Pong(object):
    TAG = Tag.PONG
    domain: DomainPath


@dataclass(frozen=True)
class Message(object):
    """
    One datagram: header plus variant payload

    Parameters
    ----------
    msg_id : int
        64-bit id, unique per sender within the dedup window
    ttl : int
        Remaining hop budget, 0..64
    src : NodeAddr
        Sender (for QUERY and JOIN_REQ the originator, kept across forwards)
    payload : object
        One of the payload dataclasses of this module
    """
    msg_id: int
    ttl: int
    src: NodeAddr
    payload: object = field(default=None)

    @property
    def tag(self):
        return self.payload.TAG

    def forwarded(self, **changes):
        """Copy with the ttl decremented and payload fields replaced"""
        payload = self.payload
        if changes:
            payload = type(payload)(**dict(vars(payload), **changes))
        return Message(self.msg_id, self.ttl - 1, self.src, payload)
