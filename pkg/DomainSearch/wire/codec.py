# -*- coding: utf-8 -*-
"""
Binary framing of :class:`~DomainSearch.wire.messages.Message`.

Layout (all integers big-endian)::

    magic   4s   b'SP2P'
    version u8   0x01
    tag     u8
    msg_id  u64
    ttl     u8
    src     u64 node id + str16 endpoint
    payload variant specific

``str16`` is a u16 byte length followed by UTF-8 bytes. Decoding only accepts
the canonical encoding, so ``encode(decode(b)) == b`` for every accepted `b`.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import struct

from ..domain import DomainPath, DomainPathError, PathLimitExceeded, parse_domain_path
from .messages import (Tag, QueryMode, ListStatus, ChunkStatus, EntryKind, NodeAddr,
                       GroupSnapshot, PeerInfo, WireHit, DirEntry, JoinReq, JoinAck,
                       QueryPayload, ResultPayload, ListDirReq, ListDirResp, FileReq,
                       FileChunk, Ping, Pong, Message, MAX_TTL, CHUNK_SIZE)

__all__ = ['encode', 'decode', 'peek_header', 'Writer', 'Reader', 'WireError', 'Truncated',
           'UnknownTag', 'BadUtf8', 'LimitExceeded', 'Oversize', 'BadMagic', 'BadField',
           'MAGIC', 'VERSION', 'MAX_MESSAGE_SIZE', 'MAX_SNIPPET', 'MAX_KEYWORDS',
           'MAX_OFFSETS', 'HEADER_SIZE']

MAGIC = b'SP2P'
VERSION = 0x01
MAX_MESSAGE_SIZE = 64 * 1024
MAX_SNIPPET = 160
MAX_KEYWORDS = 64
MAX_OFFSETS = 64
DIGEST_SIZE = 32
# magic, version, tag, msg_id, ttl, src node id, endpoint length
HEADER_SIZE = 4 + 1 + 1 + 8 + 1 + 8 + 2

_U8 = struct.Struct('>B')
_U16 = struct.Struct('>H')
_U32 = struct.Struct('>L')
_U64 = struct.Struct('>Q')


class WireError(ValueError):
    """
    Structured encode / decode failure

    Parameters
    ----------
    reason : str
        What went wrong
    offset : int
        Byte offset at which the problem was detected
    """

    def __init__(self, reason, offset=0):
        super(WireError, self).__init__('{} at byte offset {}'.format(reason, offset))
        self.reason = reason
        self.offset = offset


class Truncated(WireError):
    pass


class UnknownTag(WireError):
    pass


class BadUtf8(WireError):
    pass


class LimitExceeded(WireError):
    pass


class Oversize(LimitExceeded):
    pass


class BadMagic(WireError):
    pass


class BadField(WireError):
    pass


class Writer(object):
    """Accumulates big-endian primitives into a byte buffer"""

    def __init__(self):
        self.buffer = bytearray()

    def __len__(self):
        return len(self.buffer)

    def getvalue(self):
        return bytes(self.buffer)

    def raw(self, data):
        self.buffer += data

    def u8(self, value):
        self._pack(_U8, value)

    def u16(self, value):
        self._pack(_U16, value)

    def u32(self, value):
        self._pack(_U32, value)

    def u64(self, value):
        self._pack(_U64, value)

    def _pack(self, fmt, value):
        try:
            self.buffer += fmt.pack(value)
        except struct.error:
            raise LimitExceeded('integer {!r} does not fit {} bytes'.format(value, fmt.size), len(self.buffer))

    def str16(self, text, max_chars=None):
        if max_chars is not None and len(text) > max_chars:
            raise LimitExceeded('string longer than {} characters'.format(max_chars), len(self.buffer))
        try:
            data = text.encode('utf-8')
        except UnicodeEncodeError:
            raise BadUtf8('string is not encodable as UTF-8', len(self.buffer))
        self.bytes16(data)

    def bytes16(self, data):
        self.u16(len(data))
        self.buffer += data

    def domain(self, path):
        self.str16(str(path))

    def addr(self, addr):
        self.u64(addr.node)
        self.str16(addr.endpoint)

    def count(self, items, width, limit=None):
        items = tuple(items)
        if limit is not None and len(items) > limit:
            raise LimitExceeded('{} items exceed the limit of {}'.format(len(items), limit), len(self.buffer))
        (self.u8 if width == 1 else self.u16)(len(items))
        return items


class Reader(object):
    """
    Cursor over an encoded buffer; every failure is a :class:`WireError`
    naming the offset it happened at.
    """

    def __init__(self, data, offset=0):
        self.data = bytes(data)
        self.offset = offset

    @property
    def remaining(self):
        return len(self.data) - self.offset

    def take(self, size):
        if self.remaining < size:
            raise Truncated('needed {} more bytes, {} left'.format(size, self.remaining), self.offset)
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def u8(self):
        return _U8.unpack(self.take(1))[0]

    def u16(self):
        return _U16.unpack(self.take(2))[0]

    def u32(self):
        return _U32.unpack(self.take(4))[0]

    def u64(self):
        return _U64.unpack(self.take(8))[0]

    def bytes16(self):
        return self.take(self.u16())

    def str16(self, max_chars=None):
        start = self.offset
        raw = self.bytes16()
        try:
            text = raw.decode('utf-8')
        except UnicodeDecodeError as err:
            raise BadUtf8('invalid UTF-8: {}'.format(err.reason), start + 2 + err.start)
        if max_chars is not None and len(text) > max_chars:
            raise LimitExceeded('string longer than {} characters'.format(max_chars), start)
        return text

    def domain(self):
        start = self.offset
        text = self.str16()
        try:
            path = parse_domain_path(text)
        except PathLimitExceeded as err:
            raise LimitExceeded(str(err), start)
        except DomainPathError as err:
            raise BadField('invalid domain path: {}'.format(err), start)
        if str(path) != text:
            raise BadField('domain path {!r} is not in canonical form'.format(text), start)
        return path

    def addr(self):
        node = self.u64()
        start = self.offset
        endpoint = self.str16()
        if not endpoint:
            raise BadField('empty endpoint', start)
        return NodeAddr(node, endpoint)

    def enum(self, kind):
        start = self.offset
        value = self.u8()
        try:
            return kind(value)
        except ValueError:
            raise BadField('{} is not a valid {}'.format(value, kind.__name__), start)

    def flags(self, known_bits):
        """Reads a flag byte, rejecting undefined bits; returns a tuple of bools"""
        start = self.offset
        value = self.u8()
        if value >> known_bits:
            raise BadField('undefined flag bits in 0x{:02x}'.format(value), start)
        return tuple(bool(value & (1 << bit)) for bit in range(known_bits))

    def finish(self):
        if self.remaining:
            raise BadField('{} trailing bytes'.format(self.remaining), self.offset)


def _flags(*bits):
    value = 0
    for index, bit in enumerate(bits):
        if bit:
            value |= 1 << index
    return value


def _write_scope(w, mode, scope):
    if mode == QueryMode.COVER:
        if scope is None:
            raise BadField('COVER mode needs a scope', len(w))
        w.domain(scope)
    else:
        if scope is not None:
            raise BadField('scope is only carried in COVER mode', len(w))
        w.str16('')


def _read_scope(r, mode):
    if mode == QueryMode.COVER:
        return r.domain()
    start = r.offset
    if r.str16():
        raise BadField('scope is only carried in COVER mode', start)
    return None


# ### payload encoders ###

def _enc_join_req(w, p):
    w.addr(p.joiner)
    w.domain(p.domain)


def _enc_join_ack(w, p):
    w.u8(0 if p.accepted else 1)
    w.str16(p.reason)
    w.domain(p.responder_domain)
    for layer in w.count(p.layers, 1):
        w.domain(layer.prefix)
        for peer in w.count(layer.members, 2):
            w.addr(peer.addr)
            w.domain(peer.domain)
        for gateway in w.count(layer.gateways, 1):
            w.u64(gateway)


def _enc_query(w, p):
    w.domain(p.target)
    w.domain(p.origin_domain)
    w.u8(int(p.mode))
    _write_scope(w, p.mode, p.scope)
    w.u8(_flags(p.match_all, p.client))
    w.u8(p.k)
    for keyword in w.count(p.keywords, 1, MAX_KEYWORDS):
        w.str16(keyword)


def _enc_result(w, p):
    w.addr(p.responder)
    w.u8(_flags(p.dead_end, p.ttl_expired))
    for hit in w.count(p.hits, 2):
        w.str16(hit.path)
        w.u64(hit.score_micros)
        w.u64(hit.size)
        w.str16(hit.snippet, MAX_SNIPPET)


def _enc_list_req(w, p):
    w.str16(p.rel_path)


def _enc_list_resp(w, p):
    w.u8(int(p.status))
    w.u8(_flags(p.truncated))
    w.str16(p.rel_path)
    for entry in w.count(p.entries, 2):
        w.str16(entry.name)
        w.u8(int(entry.kind))
        w.u64(entry.size)


def _enc_file_req(w, p):
    w.u64(p.session_id)
    w.str16(p.rel_path)
    for offset in w.count(p.offsets, 1, MAX_OFFSETS):
        w.u64(offset)


def _enc_file_chunk(w, p):
    w.u64(p.session_id)
    w.u8(int(p.status))
    w.u64(p.offset)
    w.u64(p.file_size)
    w.u8(_flags(p.eof))
    if len(p.digest) not in (0, DIGEST_SIZE):
        raise BadField('digest must be empty or {} bytes'.format(DIGEST_SIZE), len(w))
    w.u8(len(p.digest))
    w.raw(p.digest)
    if len(p.data) > CHUNK_SIZE:
        raise LimitExceeded('chunk data larger than {} bytes'.format(CHUNK_SIZE), len(w))
    w.bytes16(p.data)


def _enc_ping(w, p):
    w.domain(p.domain)
    w.u8(_flags(p.announce))
    w.u8(int(p.mode))
    _write_scope(w, p.mode, p.scope)


def _enc_pong(w, p):
    w.domain(p.domain)


# ### payload decoders ###

def _dec_join_req(r):
    return JoinReq(joiner=r.addr(), domain=r.domain())


def _dec_join_ack(r):
    start = r.offset
    status = r.u8()
    if status > 1:
        raise BadField('join status {} unknown'.format(status), start)
    reason = r.str16()
    responder_domain = r.domain()
    layers = []
    for _ in range(r.u8()):
        prefix = r.domain()
        members = tuple(PeerInfo(r.addr(), r.domain()) for _ in range(r.u16()))
        gateways = tuple(r.u64() for _ in range(r.u8()))
        layers.append(GroupSnapshot(prefix, members, gateways))
    return JoinAck(accepted=status == 0, responder_domain=responder_domain,
                   layers=tuple(layers), reason=reason)


def _dec_query(r):
    target = r.domain()
    origin_domain = r.domain()
    mode = r.enum(QueryMode)
    scope = _read_scope(r, mode)
    match_all, client = r.flags(2)
    k = r.u8()
    start = r.offset
    count = r.u8()
    if count > MAX_KEYWORDS:
        raise LimitExceeded('{} keywords exceed the limit of {}'.format(count, MAX_KEYWORDS), start)
    keywords = tuple(r.str16() for _ in range(count))
    return QueryPayload(target=target, keywords=keywords, origin_domain=origin_domain, mode=mode,
                        scope=scope, match_all=match_all, client=client, k=k)


def _dec_result(r):
    responder = r.addr()
    dead_end, ttl_expired = r.flags(2)
    hits = tuple(WireHit(path=r.str16(), score_micros=r.u64(), size=r.u64(),
                         snippet=r.str16(MAX_SNIPPET))
                 for _ in range(r.u16()))
    return ResultPayload(responder=responder, hits=hits, dead_end=dead_end, ttl_expired=ttl_expired)


def _dec_list_req(r):
    return ListDirReq(rel_path=r.str16())


def _dec_list_resp(r):
    status = r.enum(ListStatus)
    truncated, = r.flags(1)
    rel_path = r.str16()
    entries = tuple(DirEntry(name=r.str16(), kind=r.enum(EntryKind), size=r.u64())
                    for _ in range(r.u16()))
    return ListDirResp(status=status, rel_path=rel_path, entries=entries, truncated=truncated)


def _dec_file_req(r):
    session_id = r.u64()
    rel_path = r.str16()
    start = r.offset
    count = r.u8()
    if count > MAX_OFFSETS:
        raise LimitExceeded('{} offsets exceed the limit of {}'.format(count, MAX_OFFSETS), start)
    return FileReq(session_id=session_id, rel_path=rel_path,
                   offsets=tuple(r.u64() for _ in range(count)))


def _dec_file_chunk(r):
    session_id = r.u64()
    status = r.enum(ChunkStatus)
    offset = r.u64()
    file_size = r.u64()
    eof, = r.flags(1)
    start = r.offset
    digest_size = r.u8()
    if digest_size not in (0, DIGEST_SIZE):
        raise BadField('digest must be empty or {} bytes'.format(DIGEST_SIZE), start)
    digest = r.take(digest_size)
    start = r.offset
    data = r.bytes16()
    if len(data) > CHUNK_SIZE:
        raise LimitExceeded('chunk data larger than {} bytes'.format(CHUNK_SIZE), start)
    return FileChunk(session_id=session_id, status=status, offset=offset, file_size=file_size,
                     eof=eof, digest=digest, data=data)


def _dec_ping(r):
    domain = r.domain()
    announce, = r.flags(1)
    mode = r.enum(QueryMode)
    return Ping(domain=domain, announce=announce, mode=mode, scope=_read_scope(r, mode))


def _dec_pong(r):
    return Pong(domain=r.domain())


_ENCODERS = {JoinReq: _enc_join_req, JoinAck: _enc_join_ack, QueryPayload: _enc_query,
             ResultPayload: _enc_result, ListDirReq: _enc_list_req, ListDirResp: _enc_list_resp,
             FileReq: _enc_file_req, FileChunk: _enc_file_chunk, Ping: _enc_ping, Pong: _enc_pong}

_DECODERS = {Tag.JOIN_REQ: _dec_join_req, Tag.JOIN_ACK: _dec_join_ack, Tag.QUERY: _dec_query,
             Tag.RESULT: _dec_result, Tag.LIST_DIR_REQ: _dec_list_req,
             Tag.LIST_DIR_RESP: _dec_list_resp, Tag.FILE_REQ: _dec_file_req,
             Tag.FILE_CHUNK: _dec_file_chunk, Tag.PING: _dec_ping, Tag.PONG: _dec_pong}


def encode(message):
    """
    Serializes a message into its canonical datagram

    Parameters
    ----------
    message : Message
        Message to encode

    Returns
    -------
    bytes

    Raises
    ------
    Oversize
        If the encoded datagram would exceed 64 KiB
    LimitExceeded, BadField, BadUtf8
        If a field violates the wire caps
    """
    encoder = _ENCODERS.get(type(message.payload))
    if encoder is None:
        raise TypeError('not a wire payload: {!r}'.format(message.payload))
    w = Writer()
    w.raw(MAGIC)
    w.u8(VERSION)
    w.u8(int(message.tag))
    w.u64(message.msg_id)
    if not 0 <= message.ttl <= MAX_TTL:
        raise LimitExceeded('ttl {} outside 0..{}'.format(message.ttl, MAX_TTL), len(w))
    w.u8(message.ttl)
    w.addr(message.src)
    encoder(w, message.payload)
    if len(w) > MAX_MESSAGE_SIZE:
        raise Oversize('encoded message is {} bytes, the cap is {}'.format(len(w), MAX_MESSAGE_SIZE),
                       MAX_MESSAGE_SIZE)
    return w.getvalue()


def _read_header(r):
    if r.remaining > MAX_MESSAGE_SIZE:
        raise LimitExceeded('datagram larger than {} bytes'.format(MAX_MESSAGE_SIZE), MAX_MESSAGE_SIZE)
    start = r.offset
    magic = r.take(len(MAGIC))
    if magic != MAGIC:
        raise BadMagic('bad magic {!r}'.format(magic), start)
    start = r.offset
    version = r.u8()
    if version != VERSION:
        raise BadMagic('unsupported version {}'.format(version), start)
    start = r.offset
    raw_tag = r.u8()
    try:
        tag = Tag(raw_tag)
    except ValueError:
        raise UnknownTag('unknown tag 0x{:02x}'.format(raw_tag), start)
    return tag, r.u64()


def peek_header(data):
    """
    Returns ``(tag, msg_id)`` of an encoded datagram without decoding the payload

    Raises
    ------
    WireError
        If the fixed part of the header is malformed
    """
    return _read_header(Reader(data))


def decode(data):
    """
    Parses one datagram

    Parameters
    ----------
    data : bytes
        Encoded datagram, at most 64 KiB

    Returns
    -------
    Message

    Raises
    ------
    WireError
        One of Truncated, UnknownTag, BadUtf8, LimitExceeded, BadMagic or
        BadField, carrying the offending byte offset in ``.offset``
    """
    r = Reader(data)
    tag, msg_id = _read_header(r)
    start = r.offset
    ttl = r.u8()
    if ttl > MAX_TTL:
        raise LimitExceeded('ttl {} exceeds {}'.format(ttl, MAX_TTL), start)
    src = r.addr()
    payload = _DECODERS[tag](r)
    r.finish()
    return Message(msg_id=msg_id, ttl=ttl, src=src, payload=payload)
