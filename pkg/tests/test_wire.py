# -*- coding: utf-8 -*-
"""
Created on Oct 18, 2026
"""
from __future__ import division, print_function, unicode_literals, absolute_import
import os
import random
import unittest

from DomainSearch.domain import ROOT, parse_domain_path
from DomainSearch.wire import (Tag, QueryMode, ListStatus, ChunkStatus, EntryKind, NodeAddr,
                               GroupSnapshot, PeerInfo, WireHit, DirEntry, JoinReq, JoinAck,
                               QueryPayload, ResultPayload, ListDirReq, ListDirResp, FileReq,
                               FileChunk, Ping, Pong, Message, encode, decode, peek_header,
                               WireError, Truncated, UnknownTag, BadUtf8, LimitExceeded, Oversize,
                               BadMagic, BadField, CHUNK_SIZE)

GOLDEN = os.path.join(os.path.dirname(__file__), 'data', 'golden_messages.txt')

LABELS = ['education', 'cs', 'os', 'undergraduated course', 'math', 'industry', 'été', 'db']


class MessageFactory(object):
    """Random valid messages of every variant"""

    def __init__(self, seed):
        self.rng = random.Random(seed)

    def text(self, limit=12, alphabet='abcdefghij XYZ_-/.é中'):
        return ''.join(self.rng.choice(alphabet) for _ in range(self.rng.randint(0, limit)))

    def domain(self):
        labels = ['all'] + [self.rng.choice(LABELS) for _ in range(self.rng.randint(0, 4))]
        return parse_domain_path('.'.join(labels))

    def addr(self):
        return NodeAddr(self.rng.randrange(2 ** 64), '10.0.0.{}:{}'.format(self.rng.randint(1, 254),
                                                                          self.rng.randint(1, 65535)))

    def flag(self):
        return self.rng.random() < 0.5

    def mode_and_scope(self):
        mode = self.rng.choice(list(QueryMode))
        return mode, (self.domain() if mode is QueryMode.COVER else None)

    def payload(self, tag):
        rng = self.rng
        if tag is Tag.JOIN_REQ:
            return JoinReq(self.addr(), self.domain())
        if tag is Tag.JOIN_ACK:
            layers = tuple(GroupSnapshot(self.domain(),
                                         tuple(PeerInfo(self.addr(), self.domain()) for _ in range(rng.randint(0, 3))),
                                         tuple(rng.randrange(2 ** 64) for _ in range(rng.randint(0, 2))))
                           for _ in range(rng.randint(0, 3)))
            return JoinAck(self.flag(), self.domain(), layers, self.text())
        if tag is Tag.QUERY:
            mode, scope = self.mode_and_scope()
            return QueryPayload(self.domain(), tuple(self.text(8) for _ in range(rng.randint(0, 5))),
                                self.domain(), mode, scope, self.flag(), self.flag(), rng.randint(0, 255))
        if tag is Tag.RESULT:
            hits = tuple(WireHit(self.text(), rng.randrange(2 ** 64), rng.randrange(2 ** 40), self.text(160))
                         for _ in range(rng.randint(0, 4)))
            return ResultPayload(self.addr(), hits, self.flag(), self.flag())
        if tag is Tag.LIST_DIR_REQ:
            return ListDirReq(self.text())
        if tag is Tag.LIST_DIR_RESP:
            entries = tuple(DirEntry(self.text(), rng.choice(list(EntryKind)), rng.randrange(2 ** 40))
                            for _ in range(rng.randint(0, 4)))
            return ListDirResp(rng.choice(list(ListStatus)), self.text(), entries, self.flag())
        if tag is Tag.FILE_REQ:
            return FileReq(rng.randrange(2 ** 64), self.text(),
                           tuple(rng.randrange(2 ** 30) * CHUNK_SIZE for _ in range(rng.randint(0, 8))))
        if tag is Tag.FILE_CHUNK:
            digest = bytes(rng.getrandbits(8) for _ in range(32)) if self.flag() else b''
            data = bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 64)))
            return FileChunk(rng.randrange(2 ** 64), rng.choice(list(ChunkStatus)), rng.randrange(2 ** 40),
                             rng.randrange(2 ** 40), self.flag(), digest, data)
        if tag is Tag.PING:
            mode, scope = self.mode_and_scope()
            return Ping(self.domain(), self.flag(), mode, scope)
        return Pong(self.domain())

    def message(self, tag=None):
        tag = tag if tag is not None else self.rng.choice(list(Tag))
        return Message(self.rng.randrange(2 ** 64), self.rng.randint(0, 64), self.addr(), self.payload(tag))


def read_golden():
    fixtures = {}
    with open(GOLDEN, 'r') as file_handle:
        for line in file_handle:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            name, *hex_parts = line.split()
            fixtures[name] = bytes.fromhex(''.join(hex_parts))
    return fixtures


def golden_messages():
    h1 = NodeAddr(1, 'h:1')
    cs = parse_domain_path('all.cs')
    return {
        'join_req': Message(1, 16, NodeAddr(3, 'h:3'), JoinReq(NodeAddr(3, 'h:3'), cs)),
        'join_ack_rejected': Message(1, 0, NodeAddr(4, 'h:4'), JoinAck(False, ROOT, (), 'dup')),
        'query_route': Message(0x10, 16, NodeAddr(5, 'h:5'),
                               QueryPayload(cs, ('paging',), ROOT, QueryMode.ROUTE, None, False, False, 10)),
        'result': Message(0x10, 0, NodeAddr(9, 'h:9'),
                          ResultPayload(NodeAddr(9, 'h:9'), (WireHit('a.txt', 1000000, 12, 'x'),))),
        'list_dir_req': Message(7, 0, h1, ListDirReq('docs')),
        'list_dir_resp': Message(7, 0, NodeAddr(2, 'h:2'),
                                 ListDirResp(ListStatus.OK, '', (DirEntry('a', EntryKind.FILE, 5),))),
        'file_req': Message(2, 0, h1, FileReq(4, 'a.txt', (0, 8192))),
        'ping_probe': Message(3, 0, h1, Ping(cs)),
        'file_chunk_not_found': Message(9, 0, NodeAddr(2, 'h:2'), FileChunk(4, ChunkStatus.NOT_FOUND)),
        'pong': Message(1, 0, NodeAddr(2, 'h:1'), Pong(ROOT)),
    }


class TestGoldenBytes(unittest.TestCase):

    def test_one_fixture_per_variant(self):
        fixtures = read_golden()
        self.assertEqual({peek_header(data)[0] for data in fixtures.values()}, set(Tag))

    def test_encode_matches_fixture(self):
        fixtures = read_golden()
        for name, message in golden_messages().items():
            with self.subTest(name=name):
                self.assertEqual(encode(message).hex(), fixtures[name].hex())

    def test_decode_matches_fixture(self):
        fixtures = read_golden()
        for name, message in golden_messages().items():
            with self.subTest(name=name):
                self.assertEqual(decode(fixtures[name]), message)

    def test_ping_header_tag(self):
        data = encode(Message(1, 8, NodeAddr(1, 'sim:1'), Ping(ROOT)))
        self.assertEqual(data[:6], b'SP2P\x01\x08')
        self.assertEqual(peek_header(data), (Tag.PING, 1))


class TestRoundTrip(unittest.TestCase):

    def test_randomized_all_variants(self):
        factory = MessageFactory(seed=20261018)
        seen = set()
        for _ in range(10000):
            message = factory.message()
            seen.add(message.tag)
            data = encode(message)
            self.assertEqual(decode(data), message)
            self.assertEqual(encode(decode(data)), data)
        self.assertEqual(seen, set(Tag))

    def test_deterministic(self):
        message = MessageFactory(seed=5).message(Tag.JOIN_ACK)
        self.assertEqual(encode(message), encode(message))

    def test_query_keywords_survive(self):
        target = parse_domain_path('all.education.undergraduated course.operating systems')
        message = Message(77, 16, NodeAddr(1, 'sim:1'), QueryPayload(target, ('windows', '10'), ROOT))
        decoded = decode(encode(message))
        self.assertEqual(list(decoded.payload.keywords), ['windows', '10'])
        self.assertEqual(decoded.payload.target, target)

    def test_forwarded_decrements_ttl(self):
        message = Message(1, 5, NodeAddr(1, 'sim:1'), QueryPayload(ROOT, ('ab',), ROOT))
        forwarded = message.forwarded(mode=QueryMode.COVER, scope=ROOT)
        self.assertEqual(forwarded.ttl, 4)
        self.assertEqual(forwarded.payload.mode, QueryMode.COVER)
        self.assertEqual(forwarded.src, message.src)


class TestDecodeErrors(unittest.TestCase):

    def setUp(self):
        self.valid = encode(Message(1, 3, NodeAddr(1, 'sim:1'), Pong(ROOT)))

    def test_empty(self):
        with self.assertRaises(Truncated) as context:
            decode(b'')
        self.assertEqual(context.exception.offset, 0)

    def test_unknown_tag(self):
        data = bytearray(self.valid)
        data[5] = 0xFF
        with self.assertRaises(UnknownTag) as context:
            decode(bytes(data))
        self.assertEqual(context.exception.offset, 5)

    def test_bad_magic_and_version(self):
        with self.assertRaises(BadMagic):
            decode(b'XXXX' + self.valid[4:])
        with self.assertRaises(BadMagic):
            decode(self.valid[:4] + b'\x02' + self.valid[5:])

    def test_truncated_everywhere(self):
        for size in range(len(self.valid)):
            with self.assertRaises(Truncated):
                decode(self.valid[:size])

    def test_trailing_bytes(self):
        with self.assertRaises(BadField):
            decode(self.valid + b'\x00')

    def test_bad_utf8(self):
        data = bytearray(self.valid)
        data[-1] = 0xFF
        with self.assertRaises(BadUtf8):
            decode(bytes(data))

    def test_non_canonical_domain(self):
        data = self.valid[:-3] + b'ALL'
        with self.assertRaises(BadField):
            decode(data)

    def test_ttl_cap(self):
        data = bytearray(self.valid)
        data[14] = 65
        with self.assertRaises(LimitExceeded):
            decode(bytes(data))

    def test_scope_outside_cover_mode(self):
        with self.assertRaises(BadField):
            encode(Message(1, 1, NodeAddr(1, 'sim:1'), Ping(ROOT, scope=ROOT)))

    def test_oversize(self):
        hits = tuple(WireHit('p' * 300, 1, 1, 's' * 160) for _ in range(200))
        with self.assertRaises(Oversize):
            encode(Message(1, 1, NodeAddr(1, 'sim:1'), ResultPayload(NodeAddr(1, 'sim:1'), hits)))

    def test_caps_on_encode(self):
        with self.assertRaises(LimitExceeded):
            encode(Message(1, 65, NodeAddr(1, 'sim:1'), Pong(ROOT)))
        with self.assertRaises(LimitExceeded):
            encode(Message(1, 1, NodeAddr(1, 'sim:1'), FileReq(1, 'a', tuple(range(65)))))

    def test_errors_are_value_errors(self):
        self.assertTrue(issubclass(WireError, ValueError))


class TestFuzz(unittest.TestCase):

    def _decode_or_wire_error(self, data):
        try:
            decode(data)
        except WireError as err:
            self.assertGreaterEqual(err.offset, 0)

    def test_random_bytes(self):
        rng = random.Random(1)
        for _ in range(50000):
            size = rng.randint(0, 96)
            self._decode_or_wire_error(bytes(rng.getrandbits(8) for _ in range(size)))

    def test_mutated_valid_messages(self):
        rng = random.Random(2)
        factory = MessageFactory(seed=3)
        for _ in range(50000):
            data = bytearray(encode(factory.message()))
            for _ in range(rng.randint(1, 4)):
                action = rng.random()
                position = rng.randrange(len(data))
                if action < 0.6:
                    data[position] = rng.getrandbits(8)
                elif action < 0.8:
                    del data[position:]
                    if not data:
                        break
                else:
                    data.insert(position, rng.getrandbits(8))
            self._decode_or_wire_error(bytes(data))

    def test_oversized_input(self):
        with self.assertRaises(LimitExceeded):
            decode(encode(Message(1, 3, NodeAddr(1, 'sim:1'), Pong(ROOT))) + bytes(64 * 1024))


if __name__ == '__main__':
    unittest.main()
