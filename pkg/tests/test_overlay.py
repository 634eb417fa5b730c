# -*- coding: utf-8 -*-
"""
Created on Oct 18, 2026
"""
from __future__ import division, print_function, unicode_literals, absolute_import
import random
import unittest

from DomainSearch.domain import ROOT, parse_domain_path, common_prefix_len, domain_distance
from DomainSearch.overlay import (GroupId, GroupView, elect_gateways, RouteKind, CachePolicy,
                                  CoverSend, RouteTable)
from DomainSearch.wire import GroupSnapshot, NodeAddr, PeerInfo, QueryMode

DOMAINS = ['all', 'all.a', 'all.b', 'all.a.x', 'all.a.y', 'all.b.x', 'all.b.z', 'all.a.x.deep',
           'all.c', 'all.c.q']


def _addr(node):
    return NodeAddr(node, 'sim:{}'.format(node))


def _peer(node, domain):
    return PeerInfo(_addr(node), parse_domain_path(domain))


def _view(prefix, *ids):
    return GroupView(GroupId(parse_domain_path(prefix)), tuple(_peer(node, prefix) for node in ids))


def _table(node, domain, **kwargs):
    return RouteTable(_addr(node), parse_domain_path(domain), **kwargs)


class TestGroupId(unittest.TestCase):

    def test_layer_is_depth(self):
        self.assertEqual(GroupId(parse_domain_path('all.a.x')).layer, 2)
        self.assertEqual(GroupId(ROOT).layer, 0)

    def test_mismatched_layer(self):
        with self.assertRaises(ValueError):
            GroupId(ROOT, 1)


class TestElectGateways(unittest.TestCase):

    def test_fewer_members_than_n(self):
        self.assertEqual(elect_gateways(_view('all.a', 5), 2).gateway_ids, [5])

    def test_smallest_ids_win(self):
        elected = elect_gateways(_view('all.a', 9, 4, 7), 2)
        self.assertEqual(elected.gateway_ids, [4, 7])
        self.assertEqual(elected.member_ids, [4, 7, 9])

    def test_removed_gateway_is_replaced(self):
        elected = elect_gateways(_view('all.a', 9, 4, 7), 2)
        self.assertEqual(elect_gateways(elected.without(4), 2).gateway_ids, [7, 9])

    def test_deterministic_for_any_member_order(self):
        rng = random.Random(7)
        ids = rng.sample(range(1, 1000), 12)
        expected = elect_gateways(_view('all.a', *ids), 3).gateway_ids
        for _ in range(20):
            rng.shuffle(ids)
            self.assertEqual(elect_gateways(_view('all.a', *ids), 3).gateway_ids, expected)
        self.assertEqual(expected, sorted(ids)[:3])

    def test_errors(self):
        with self.assertRaises(ValueError):
            elect_gateways(_view('all.a'), 2)
        with self.assertRaises(ValueError):
            elect_gateways(_view('all.a', 1), 0)

    def test_snapshot_round_trip(self):
        elected = elect_gateways(_view('all.a', 3, 1, 2), 2)
        snapshot = elected.to_snapshot()
        self.assertEqual(snapshot.gateways, (1, 2))
        self.assertEqual(GroupView.from_snapshot(snapshot), elected)


class TestTreeRoutes(unittest.TestCase):

    def test_singleton_is_its_own_gateway(self):
        table = _table(1, 'all.education')
        view = table.group_view(parse_domain_path('all.education'))
        self.assertEqual(view.member_ids, [1])
        self.assertEqual(view.gateway_ids, [1])
        self.assertEqual(table.announce_scope(), ROOT)

    def test_three_nodes_same_leaf(self):
        table = _table(3, 'all.a')
        self.assertTrue(table.offer(_addr(2), parse_domain_path('all.a')))
        self.assertTrue(table.offer(_addr(1), parse_domain_path('all.a')))
        leaf = parse_domain_path('all.a')
        self.assertEqual([entry.node for entry in table.gateways_of(leaf)], [1, 2])
        self.assertEqual(table.group_view(leaf).gateway_ids, [1, 2])
        self.assertEqual(table.gateway_vertices(), [])
        self.assertEqual(table.announce_scope(), leaf)
        self.assertEqual([entry.node for entry in table.leaf_peers()], [1, 2])

    def test_offer_is_idempotent(self):
        table = _table(3, 'all.a')
        self.assertTrue(table.offer(_addr(2), parse_domain_path('all.a')))
        self.assertFalse(table.offer(_addr(2), parse_domain_path('all.a')))
        self.assertFalse(table.offer(_addr(3), parse_domain_path('all.a')))

    def test_offer_updates_endpoint(self):
        table = _table(3, 'all.a')
        table.offer(_addr(2), parse_domain_path('all.a'))
        self.assertTrue(table.offer(NodeAddr(2, 'sim:moved'), parse_domain_path('all.a')))
        self.assertEqual(table.lookup(2).peer.endpoint, 'sim:moved')

    def test_child_slot_keeps_n_smallest(self):
        table = _table(1, 'all.a', n_tuple=2)
        other = parse_domain_path('all.b.x')
        self.assertTrue(table.offer(_addr(9), other))
        self.assertTrue(table.offer(_addr(5), other))
        self.assertTrue(table.offer(_addr(7), other))
        self.assertFalse(table.offer(_addr(8), other))
        groups = table.child_groups(ROOT)
        self.assertEqual(list(groups), [parse_domain_path('all.b')])
        self.assertEqual([entry.node for entry in groups[parse_domain_path('all.b')]], [5, 7])

    def test_own_domain_residents_are_uncapped(self):
        table = _table(100, 'all.a', n_tuple=2)
        for node in range(1, 11):
            table.offer(_addr(node), parse_domain_path('all.a'))
        self.assertEqual(len(table.leaf_peers()), 10)

    def test_ancestor_residents_are_capped(self):
        table = _table(100, 'all.a.x', n_tuple=2)
        for node in (6, 3, 9):
            table.offer(_addr(node), parse_domain_path('all.a'))
        self.assertEqual([entry.node for entry in table.residents(parse_domain_path('all.a'))], [3, 6])

    def test_gateways_climb_the_path(self):
        table = _table(4, 'all.a.x', n_tuple=2)
        table.offer(_addr(9), parse_domain_path('all.a.x'))
        table.offer(_addr(2), parse_domain_path('all.a.y'))
        table.offer(_addr(1), parse_domain_path('all.b'))
        self.assertEqual([e.node for e in table.gateways_of(parse_domain_path('all.a.x'))], [4, 9])
        self.assertEqual([e.node for e in table.gateways_of(parse_domain_path('all.a'))], [2, 4])
        self.assertEqual([e.node for e in table.gateways_of(ROOT)], [1, 2])
        self.assertEqual(table.gateway_vertices(), [parse_domain_path('all.a'), parse_domain_path('all.a.x')])
        self.assertEqual(table.announce_scope(), ROOT)

    def test_gateways_of_off_path_vertex(self):
        with self.assertRaises(ValueError):
            _table(1, 'all.a').gateways_of(parse_domain_path('all.b'))

    def test_apply_join_ack(self):
        table = _table(5, 'all.a')
        layers = (GroupSnapshot(ROOT, (_peer(1, 'all.b'),), (1,)),
                  GroupSnapshot(parse_domain_path('all.a'), (_peer(2, 'all.a'), _peer(5, 'all.a')), (2, 5)))
        self.assertTrue(table.apply_join_ack(layers))
        self.assertFalse(table.apply_join_ack(layers))
        self.assertEqual(sorted(entry.node for entry in table.tree_entries()), [1, 2])
        self.assertEqual(table.lookup(1).kind, RouteKind.TREE)


class TestCoverPlan(unittest.TestCase):

    def setUp(self):
        self.table = _table(1, 'all.a')
        for node, domain in ((2, 'all.a'), (3, 'all.a'), (10, 'all'), (7, 'all.b'), (5, 'all.b.z'),
                             (20, 'all.a.x')):
            self.table.offer(_addr(node), parse_domain_path(domain))

    def test_whole_tree(self):
        self.assertEqual(self.table.cover_plan(ROOT), [
            CoverSend(_addr(10), QueryMode.RESIDENTS),
            CoverSend(_addr(5), QueryMode.COVER, parse_domain_path('all.b')),
            CoverSend(_addr(2), QueryMode.DIRECT),
            CoverSend(_addr(3), QueryMode.DIRECT),
            CoverSend(_addr(20), QueryMode.COVER, parse_domain_path('all.a.x')),
        ])

    def test_own_subtree(self):
        plan = self.table.cover_plan(parse_domain_path('all.a'))
        self.assertEqual([send.peer.node for send in plan], [2, 3, 20])

    def test_each_known_group_reached_once(self):
        plan = self.table.cover_plan(ROOT)
        self.assertEqual(len({send.peer.node for send in plan}), len(plan))

    def test_scope_must_contain_self(self):
        with self.assertRaises(ValueError):
            self.table.cover_plan(parse_domain_path('all.b'))


class TestCachedRoutes(unittest.TestCase):

    def test_below_capacity(self):
        table = _table(1, 'all.a', capacity=4)
        self.assertIsNone(table.cache_insert(_addr(2), parse_domain_path('all.b')))
        self.assertEqual([entry.node for entry in table.cached_routes], [2])
        self.assertEqual(table.lookup(2).kind, RouteKind.CACHED)

    def test_duplicate_refreshes(self):
        table = _table(1, 'all.a', capacity=4)
        table.cache_insert(_addr(2), parse_domain_path('all.b'))
        first = table.lookup(2).last_used
        self.assertIsNone(table.cache_insert(_addr(2), parse_domain_path('all.b')))
        self.assertEqual(len(table.cached_routes), 1)
        self.assertGreater(table.lookup(2).last_used, first)

    def test_tree_peers_and_self_are_not_cached(self):
        table = _table(1, 'all.a', capacity=4)
        table.offer(_addr(2), parse_domain_path('all.a'))
        table.cache_insert(_addr(2), parse_domain_path('all.a'))
        table.cache_insert(_addr(1), parse_domain_path('all.a'))
        self.assertEqual(table.cached_routes, [])

    def test_offer_promotes_cached_peer(self):
        table = _table(1, 'all.a', capacity=4)
        table.cache_insert(_addr(2), parse_domain_path('all.b'))
        table.offer(_addr(2), parse_domain_path('all.b'))
        self.assertEqual(table.cached_routes, [])
        self.assertEqual(table.lookup(2).kind, RouteKind.TREE)

    def test_lru_evicts_least_recently_used(self):
        table = _table(1, 'all.a', capacity=2, policy=CachePolicy.LRU)
        table.cache_insert(_addr(2), parse_domain_path('all.b'))
        table.cache_insert(_addr(3), parse_domain_path('all.c'))
        table.touch(2)
        victim = table.cache_insert(_addr(4), parse_domain_path('all.b.x'))
        self.assertEqual(victim.node, 3)
        self.assertEqual(sorted(entry.node for entry in table.cached_routes), [2, 4])

    def test_mind_evicts_nearest(self):
        table = _table(1, 'all.a.b.c', capacity=3, policy=CachePolicy.MIND)
        table.cache_insert(_addr(10), parse_domain_path('all.a.b.c'))
        table.cache_insert(_addr(12), parse_domain_path('all.a.b.d'))
        table.cache_insert(_addr(16), parse_domain_path('all.x.y.z'))
        victim = table.cache_insert(_addr(14), parse_domain_path('all.a.x.y'))
        self.assertEqual(victim.node, 10)
        self.assertEqual(sorted(domain_distance(entry.peer_domain, table.self_domain)
                                for entry in table.cached_routes), [2, 4, 6])

    def test_mind_tie_evicts_oldest(self):
        table = _table(1, 'all.a', capacity=2, policy='mind')
        table.cache_insert(_addr(2), parse_domain_path('all.b'))
        table.cache_insert(_addr(3), parse_domain_path('all.c'))
        self.assertEqual(table.cache_insert(_addr(4), parse_domain_path('all.d')).node, 2)

    def test_zero_capacity(self):
        table = _table(1, 'all.a', capacity=0)
        self.assertEqual(table.cache_insert(_addr(2), parse_domain_path('all.b')).node, 2)
        self.assertEqual(table.cached_routes, [])

    def test_random_sequences_respect_capacity(self):
        rng = random.Random(11)
        for policy in CachePolicy:
            for _ in range(50):
                capacity = rng.randint(1, 6)
                table = _table(0, rng.choice(DOMAINS), capacity=capacity, policy=policy)
                for _ in range(60):
                    domain = parse_domain_path(rng.choice(DOMAINS))
                    if rng.random() < 0.2:
                        table.offer(_addr(rng.randint(1, 30)), domain)
                        continue
                    before = list(table.cached_routes)
                    node = rng.randint(1, 30)
                    victim = table.cache_insert(_addr(node), domain)
                    cached = table.cached_routes
                    self.assertLessEqual(len(cached), capacity)
                    self.assertEqual(len({entry.node for entry in cached}), len(cached))
                    self.assertFalse(any(table.lookup_tree(entry.node) for entry in cached))
                    if victim is not None and policy is CachePolicy.MIND:
                        pool = before + [victim] + [entry for entry in cached if entry.node == node]
                        nearest = min(domain_distance(entry.peer_domain, table.self_domain) for entry in pool)
                        self.assertEqual(domain_distance(victim.peer_domain, table.self_domain), nearest)


class TestCandidates(unittest.TestCase):

    def test_target_is_own_domain(self):
        table = _table(5, 'all.a')
        table.offer(_addr(9), parse_domain_path('all.b'))
        table.cache_insert(_addr(11), parse_domain_path('all.c'))
        self.assertEqual(table.candidates_for(parse_domain_path('all.a')), [])

    def test_exact_domain_first(self):
        table = _table(5, 'all.a')
        table.offer(_addr(9), parse_domain_path('all.b'))
        table.cache_insert(_addr(11), parse_domain_path('all.b.x'))
        table.cache_insert(_addr(3), parse_domain_path('all.c'))
        order = [entry.node for entry in table.candidates_for(parse_domain_path('all.b.x'))]
        self.assertEqual(order, [11, 9])

    def test_same_domain_peers_are_not_nearer(self):
        table = _table(5, 'all.a')
        table.offer(_addr(2), parse_domain_path('all.a'))
        table.offer(_addr(8), parse_domain_path('all.a'))
        self.assertEqual(table.candidates_for(parse_domain_path('all.a')), [])

    def test_equally_near_sibling_is_not_a_candidate(self):
        table = _table(5, 'all.a')
        table.cache_insert(_addr(3), parse_domain_path('all.c'))
        self.assertEqual(table.candidates_for(parse_domain_path('all.b.x')), [])

    def test_node_id_breaks_ties_in_order(self):
        table = _table(5, 'all.a')
        for node_id in (12, 7):
            table.cache_insert(_addr(node_id), parse_domain_path('all.b'))
        self.assertEqual([entry.node for entry in table.candidates_for(parse_domain_path('all.b.x'))], [7, 12])

    def test_against_brute_force(self):
        rng = random.Random(3)
        for _ in range(200):
            table = _table(rng.randint(1, 40), rng.choice(DOMAINS), capacity=rng.randint(0, 8),
                           policy=rng.choice(list(CachePolicy)))
            for _ in range(rng.randint(0, 25)):
                insert = table.offer if rng.random() < 0.5 else table.cache_insert
                insert(_addr(rng.randint(1, 40)), parse_domain_path(rng.choice(DOMAINS)))
            target = parse_domain_path(rng.choice(DOMAINS))

            def key(domain, node):
                return -common_prefix_len(domain, target), domain_distance(domain, target), node

            own = key(table.self_domain, table.self_id)[:2]
            expected = sorted((key(entry.peer_domain, entry.node) for entry in table.known_peers()
                               if key(entry.peer_domain, entry.node)[:2] < own))
            actual = [key(entry.peer_domain, entry.node) for entry in table.candidates_for(target)]
            self.assertEqual(actual, expected)


class TestFailures(unittest.TestCase):

    def setUp(self):
        self.leaf = parse_domain_path('all.a')
        self.table = _table(3, 'all.a', n_tuple=2)
        for node in (1, 2, 4):
            self.table.offer(_addr(node), self.leaf)
        self.table.cache_insert(_addr(30), parse_domain_path('all.b'))

    def test_non_gateway_removed(self):
        self.assertTrue(self.table.handle_peer_failure(4))
        self.assertEqual([entry.node for entry in self.table.gateways_of(self.leaf)], [1, 2])

    def test_gateway_replaced(self):
        self.assertTrue(self.table.handle_peer_failure(1))
        self.assertEqual([entry.node for entry in self.table.gateways_of(self.leaf)], [2, 3])
        self.assertEqual(self.table.gateway_vertices(), [ROOT, self.leaf])

    def test_cached_peer_removed(self):
        self.assertTrue(self.table.handle_peer_failure(30))
        self.assertFalse(self.table.references(30))

    def test_unknown_peer(self):
        self.assertFalse(self.table.handle_peer_failure(99))

    def test_leave(self):
        self.table.leave()
        self.assertEqual(self.table.known_peers(), [])

    def test_snapshot_is_independent(self):
        copy = self.table.snapshot()
        self.table.handle_peer_failure(1)
        self.assertTrue(copy.references(1))


if __name__ == '__main__':
    unittest.main()
