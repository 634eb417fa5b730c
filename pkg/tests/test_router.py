# -*- coding: utf-8 -*-
"""
Created on Oct 18, 2026
"""
from __future__ import division, print_function, unicode_literals, absolute_import
import unittest

from DomainSearch.domain import ROOT, parse_domain_path
from DomainSearch.node import Node, NodeSettings, Transport, TimerHandle
from DomainSearch.query import parse_query
from DomainSearch.router import (QueryState, collect_results, DedupWindow, LateResult, handle_query,
                                 start_query)
from DomainSearch.search import build_index
from DomainSearch.wire import (Message, NodeAddr, QueryMode, QueryPayload, ResultPayload, Tag, WireHit,
                               MAX_MESSAGE_SIZE, encode)


def _addr(node):
    return NodeAddr(node, 'sim:{}'.format(node))


class RecordingTransport(Transport):
    """Keeps every send and timer instead of delivering anything"""

    def __init__(self, endpoint):
        super(RecordingTransport, self).__init__()
        self.endpoint = endpoint
        self.clock = 0
        self.sent = []
        self.timers = []
        self.events = []

    def send(self, endpoint, message):
        encode(message)
        self.sent.append((endpoint, message))

    def now(self):
        return self.clock

    def call_later(self, delay_ms, callback, *args):
        handle = TimerHandle(self.clock + delay_ms, callback, args)
        self.timers.append(handle)
        return handle

    def observe(self, kind, src, dst, tag, msg_id, detail=''):
        self.events.append((kind, src, dst, Tag(tag), msg_id, detail))

    def fire_timers(self):
        for handle in list(self.timers):
            handle.fire()

    def take(self):
        sent, self.sent = self.sent, []
        return sent


def _node(node_id, domain, documents=(), settings=None):
    addr = _addr(node_id)
    return Node(addr, parse_domain_path(domain) if domain else None, RecordingTransport(addr.endpoint),
                index=build_index(documents), settings=settings)


def _query(target, msg_id=100, ttl=8, origin=1, mode=QueryMode.ROUTE, scope=None, keywords=('paging',),
           client=False):
    payload = QueryPayload(parse_domain_path(target), keywords, parse_domain_path('all.c'), mode,
                           parse_domain_path(scope) if scope else None, client=client)
    return Message(msg_id, ttl, _addr(origin), payload)


def _result(msg_id, responder, hits=(), dead_end=False, ttl_expired=False):
    return Message(msg_id, 0, _addr(responder),
                   ResultPayload(_addr(responder), tuple(WireHit(path, score, 1) for path, score in hits),
                                 dead_end, ttl_expired))


class TestCollectResults(unittest.TestCase):

    def setUp(self):
        self.state = QueryState(7, _addr(1), parse_domain_path('all.a'), ('paging',), 2000)

    def test_merge_and_rank(self):
        collect_results(self.state, _result(7, 4, [('b.txt', 500), ('a.txt', 900)]))
        ranking = collect_results(self.state, _result(7, 3, [('c.txt', 900)]))
        self.assertEqual([(hit.responder.node, hit.path) for hit in ranking],
                         [(3, 'c.txt'), (4, 'a.txt'), (4, 'b.txt')])
        self.assertEqual(self.state.responders, {3, 4})
        self.assertEqual(self.state.results_received, 2)

    def test_duplicate_hits_merged(self):
        collect_results(self.state, _result(7, 4, [('a.txt', 900)]))
        collect_results(self.state, _result(7, 4, [('a.txt', 900)]))
        self.assertEqual(len(self.state.ranked()), 1)

    def test_empty_result_counts_as_responder(self):
        collect_results(self.state, _result(7, 4))
        self.assertEqual(self.state.responders, {4})
        self.assertEqual(self.state.ranked(), [])

    def test_dead_end_and_ttl_flags(self):
        collect_results(self.state, _result(7, 4, dead_end=True))
        collect_results(self.state, _result(7, 5, ttl_expired=True))
        self.assertTrue(self.state.dead_end)
        self.assertTrue(self.state.ttl_expired)
        self.assertEqual(self.state.responders, set())

    def test_late_result(self):
        self.state.close()
        with self.assertRaises(LateResult):
            collect_results(self.state, _result(7, 4))

    def test_foreign_result(self):
        with self.assertRaises(ValueError):
            collect_results(self.state, _result(8, 4))

    def test_complete(self):
        state = QueryState(7, _addr(1), ROOT, ('x',), 10, expected=2)
        collect_results(state, _result(7, 4))
        self.assertFalse(state.complete)
        collect_results(state, _result(7, 5))
        self.assertTrue(state.complete)

    def test_hit_as_dict(self):
        hit = collect_results(self.state, _result(7, 4, [('a.txt', 1500000)]))[0]
        self.assertEqual(hit.as_dict(), {'responder': 4, 'endpoint': 'sim:4', 'path': 'a.txt',
                                         'score_micros': 1500000, 'size': 1, 'snippet': ''})


class TestDedupWindow(unittest.TestCase):

    def test_fifo_eviction(self):
        window = DedupWindow(3)
        for key in ((1, 1), (1, 2), (1, 3)):
            self.assertFalse(window.check_and_add(key))
        self.assertTrue(window.check_and_add((1, 1)))
        self.assertFalse(window.check_and_add((2, 1)))
        self.assertNotIn((1, 1), window)
        self.assertEqual(len(window), 3)
        self.assertFalse(window.check_and_add((1, 1)))


class TestHandleQuery(unittest.TestCase):

    def setUp(self):
        self.node = _node(5, 'all.a', [('os/paging.txt', 'paging and virtual memory')])
        for node_id, domain in ((2, 'all.a'), (20, 'all.a.x'), (9, 'all.b')):
            self.node.table.offer(_addr(node_id), parse_domain_path(domain))
        self.transport = self.node.transport

    def test_forwards_toward_target(self):
        handle_query(self.node, _query('all.b.x'))
        [(endpoint, message)] = self.transport.take()
        self.assertEqual(endpoint, 'sim:9')
        self.assertEqual(message.ttl, 7)
        self.assertEqual(message.src, _addr(1))
        self.assertEqual(message.payload.mode, QueryMode.ROUTE)
        self.assertTrue(self.node.table.references(1))
        self.assertEqual(self.node.metrics['forwards'], 1)

    def test_client_origin_not_cached(self):
        handle_query(self.node, _query('all.b.x', client=True))
        self.assertFalse(self.node.table.references(1))

    def test_serves_and_covers_target(self):
        handle_query(self.node, _query('all.a'))
        sent = self.transport.take()
        result_endpoint, result = sent[0]
        self.assertEqual(result_endpoint, 'sim:1')
        self.assertEqual(result.tag, Tag.RESULT)
        self.assertEqual(result.msg_id, 100)
        self.assertEqual([hit.path for hit in result.payload.hits], ['os/paging.txt'])
        self.assertEqual([(endpoint, message.payload.mode, message.ttl) for endpoint, message in sent[1:]],
                         [('sim:2', QueryMode.DIRECT, 7), ('sim:20', QueryMode.COVER, 7)])
        self.assertEqual(sent[2][1].payload.scope, parse_domain_path('all.a.x'))
        self.assertEqual([event[0] for event in self.transport.events], ['SERVE'])

    def test_ancestor_target_covers_from_here(self):
        handle_query(self.node, _query('all'))
        modes = [(endpoint, message.payload.mode) for endpoint, message in self.transport.take()[1:]]
        self.assertEqual(modes, [('sim:9', QueryMode.COVER), ('sim:2', QueryMode.DIRECT),
                                 ('sim:20', QueryMode.COVER)])

    def test_duplicates_dropped(self):
        handle_query(self.node, _query('all.a'))
        self.transport.take()
        handle_query(self.node, _query('all.a'))
        self.assertEqual(self.transport.take(), [])
        self.assertEqual(self.node.metrics['duplicates'], 1)

    def test_dead_end(self):
        lonely = _node(5, 'all.a')
        handle_query(lonely, _query('all.b', client=True))
        [(endpoint, message)] = lonely.transport.take()
        self.assertEqual(endpoint, 'sim:1')
        self.assertTrue(message.payload.dead_end)
        self.assertEqual(lonely.metrics['dead_ends'], 1)

    def test_unencodable_hit_is_left_out_of_the_result(self):
        node = _node(5, 'all.a', [('\udcffnotes.txt', 'paging'), ('notes.txt', 'paging notes')])
        with self.assertLogs('DomainSearch.router.handling', level='WARNING'):
            handle_query(node, _query('all.a'))
        [(endpoint, result)] = node.transport.take()
        self.assertEqual(endpoint, 'sim:1')
        self.assertEqual([hit.path for hit in result.payload.hits], ['notes.txt'])

    def test_equally_near_peer_is_a_dead_end(self):
        stuck = _node(5, 'all.a')
        stuck.table.cache_insert(_addr(3), parse_domain_path('all.c'))
        handle_query(stuck, _query('all.b.x', client=True))
        [(endpoint, message)] = stuck.transport.take()
        self.assertEqual(endpoint, 'sim:1')
        self.assertTrue(message.payload.dead_end)
        self.assertEqual(stuck.metrics['forwards'], 0)

    def test_ttl_exhausted_while_routing(self):
        handle_query(self.node, _query('all.b', ttl=0))
        [(endpoint, message)] = self.transport.take()
        self.assertEqual(endpoint, 'sim:1')
        self.assertTrue(message.payload.ttl_expired)
        self.assertFalse(message.payload.dead_end)

    def test_ttl_exhausted_while_covering(self):
        handle_query(self.node, _query('all.a', ttl=0))
        sent = self.transport.take()
        self.assertEqual([message.tag for _, message in sent], [Tag.RESULT])
        self.assertEqual(self.node.metrics['ttl_exhausted'], 1)

    def test_direct_mode_only_serves(self):
        handle_query(self.node, _query('all.a', mode=QueryMode.DIRECT))
        self.assertEqual([message.tag for _, message in self.transport.take()], [Tag.RESULT])

    def test_residents_mode(self):
        handle_query(self.node, _query('all.a', mode=QueryMode.RESIDENTS))
        sent = self.transport.take()
        self.assertEqual([(endpoint, message.payload.mode) for endpoint, message in sent[1:]],
                         [('sim:2', QueryMode.DIRECT)])

    def test_cover_mode_outside_scope(self):
        with self.assertLogs('DomainSearch.router.handling', level='WARNING'):
            handle_query(self.node, _query('all.b', mode=QueryMode.COVER, scope='all.b'))
        self.assertEqual([message.tag for _, message in self.transport.take()], [Tag.RESULT])

    def test_client_nodes_ignore_queries(self):
        client = _node(77, None)
        handle_query(client, _query('all.a'))
        self.assertEqual(client.transport.sent, [])

    def test_result_fits_one_datagram(self):
        documents = [('d{:03d}/{}'.format(i, 'p' * 240), 'paging ' + 'x' * 300) for i in range(255)]
        node = _node(5, 'all.a', documents)
        message = _query('all.a')
        handle_query(node, Message(message.msg_id, message.ttl, message.src,
                                   QueryPayload(message.payload.target, ('paging',), ROOT, k=255)))
        [(_, result)] = node.transport.take()
        self.assertLess(len(result.payload.hits), 255)
        self.assertLessEqual(len(encode(result)), MAX_MESSAGE_SIZE)


class TestQueryLifecycle(unittest.TestCase):

    def setUp(self):
        self.client = _node(77, None)
        self.transport = self.client.transport
        self.done = []

    def _start(self, expected=None):
        return start_query(self.client, parse_query('paging@all.a'), via='sim:5', expected=expected,
                           on_done=self.done.append)

    def test_injected_at_member(self):
        handle = self._start()
        [(endpoint, message)] = self.transport.take()
        self.assertEqual(endpoint, 'sim:5')
        self.assertTrue(message.payload.client)
        self.assertEqual(message.payload.origin_domain, ROOT)
        self.assertEqual(message.ttl, self.client.settings.ttl)
        self.assertEqual(message.msg_id, handle.state.msg_id)

    def test_closes_when_expected_responders_answered(self):
        handle = self._start(expected=2)
        msg_id = handle.state.msg_id
        self.client.on_message(_result(msg_id, 5, [('a.txt', 10)]))
        self.assertFalse(handle.done)
        self.client.on_message(_result(msg_id, 6, [('b.txt', 20)]))
        self.assertTrue(handle.done)
        self.assertEqual(self.done, [handle])
        self.assertEqual([hit.path for hit in handle.state.ranked()], ['b.txt', 'a.txt'])
        self.client.on_message(_result(msg_id, 7, [('c.txt', 30)]))
        self.assertEqual(self.client.metrics['late_results'], 1)
        self.assertEqual(len(handle.state.ranked()), 2)

    def test_deadline_closes(self):
        handle = self._start()
        self.client.on_message(_result(handle.state.msg_id, 5, [('a.txt', 10)]))
        self.transport.fire_timers()
        self.assertTrue(handle.done)
        self.assertFalse(handle.retried)

    def test_retried_once_without_responders(self):
        handle = self._start()
        first = handle.state.msg_id
        self.transport.take()
        self.transport.fire_timers()
        self.assertTrue(handle.retried)
        self.assertFalse(handle.done)
        [(_, retry)] = self.transport.take()
        self.assertNotEqual(retry.msg_id, first)
        self.client.on_message(_result(first, 5, [('a.txt', 10)]))
        self.assertEqual(self.client.metrics['late_results'], 1)
        self.transport.fire_timers()
        self.assertTrue(handle.done)
        self.assertEqual(self.done, [handle])
        self.assertEqual(self.client.metrics['query_retries'], 1)

    def test_no_retry_when_disabled(self):
        self.client = _node(77, None, settings=NodeSettings(retry_empty=False))
        self.transport = self.client.transport
        handle = self._start()
        self.transport.fire_timers()
        self.assertTrue(handle.done)

    def test_stray_result(self):
        self.client.on_message(_result(424242, 5))
        self.assertEqual(self.client.metrics['stray_results'], 1)


if __name__ == '__main__':
    unittest.main()
