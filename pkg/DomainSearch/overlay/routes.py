"""
Per-node routing state: replicated tree routes along the node's own domain
path plus a bounded cache of opportunistically learned peers.

Tree routes are kept in slots. For every vertex ``V`` on the path from the
root to the node's own domain there is

* a *residents* slot holding peers joined exactly at ``V`` (every one of
  them for the node's own domain, the ``n`` smallest ids for ancestors), and
* one *child* slot per child group of ``V`` off the node's own path, holding
  the ``n`` smallest ids known in that child's subtree, i.e. its gateways.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import copy
import logging
from dataclasses import dataclass
from enum import Enum

import toolz

from ..domain import ROOT, common_prefix_len, domain_distance, is_ancestor_or_self
from ..wire import NodeAddr, PeerInfo, QueryMode
from .groups import GroupId, GroupView, elect_gateways

__all__ = ['RouteKind', 'CachePolicy', 'RouteEntry', 'CoverSend', 'RouteTable',
           'JoinError', 'BootstrapUnreachable', 'JoinRejected',
           'DEFAULT_N_TUPLE', 'DEFAULT_CACHE_CAPACITY']

logger = logging.getLogger(__name__)

DEFAULT_N_TUPLE = 2
DEFAULT_CACHE_CAPACITY = 32


class JoinError(RuntimeError):
    pass


class BootstrapUnreachable(JoinError):
    pass


class JoinRejected(JoinError):
    pass


class RouteKind(Enum):
    TREE = 'tree'
    CACHED = 'cached'


class CachePolicy(Enum):
    LRU = 'lru'
    MIND = 'mind'


@dataclass
class RouteEntry(object):
    peer: NodeAddr
    peer_domain: object
    kind: RouteKind = RouteKind.TREE
    last_used: int = 0
    inserted_at: int = 0

    @property
    def node(self):
        return self.peer.node

    def as_peer_info(self):
        return PeerInfo(self.peer, self.peer_domain)


@dataclass(frozen=True)
class CoverSend(object):
    """One send of an exactly-once subtree dissemination"""
    peer: NodeAddr
    mode: QueryMode
    scope: object = None


class RouteTable(object):
    """
    Dual route table of one node

    Parameters
    ----------
    self_addr : NodeAddr
        Address of the owning node
    self_domain : DomainPath
        Domain the owning node joined
    n_tuple : int, optional
        Gateway replication factor. Default 2
    capacity : int, optional
        Maximum number of cached routes. Default 32
    policy : CachePolicy, optional
        Cache eviction policy. Default LRU

    Notes
    -----
    Mutated only by the owning node's event loop. Use :meth:`snapshot` to hand
    a copy to another thread.
    """

    def __init__(self, self_addr, self_domain, n_tuple=DEFAULT_N_TUPLE,
                 capacity=DEFAULT_CACHE_CAPACITY, policy=CachePolicy.LRU):
        if n_tuple < 1:
            raise ValueError('n_tuple must be at least 1')
        if capacity < 0:
            raise ValueError('cache capacity may not be negative')
        self.self_addr = self_addr
        self.self_domain = self_domain
        self.n_tuple = n_tuple
        self.capacity = capacity
        self.policy = CachePolicy(policy)
        self.path = self_domain.ancestors()
        self._self_entry = RouteEntry(self_addr, self_domain, RouteKind.TREE)
        self._residents = {vertex: {} for vertex in self.path}
        self._children = {vertex: {} for vertex in self.path}
        self._cache = {}
        self._clock = 0
        self._gateway_memo = {}

    def __repr__(self):
        return 'RouteTable({}, {}, tree={}, cached={})'.format(self.self_addr, self.self_domain,
                                                               len(self.tree_entries()), len(self._cache))

    @property
    def self_id(self):
        return self.self_addr.node

    @property
    def cached_routes(self):
        return sorted(self._cache.values(), key=lambda entry: entry.inserted_at)

    def _tick(self):
        self._clock += 1
        return self._clock

    def _changed(self):
        self._gateway_memo.clear()

    # ### tree routes ###

    def _slot_for(self, domain):
        """Returns ``(slot, capped)`` where a peer of `domain` belongs"""
        if domain == self.self_domain:
            return self._residents[self.self_domain], False
        shared = common_prefix_len(domain, self.self_domain)
        vertex = self.self_domain.prefix(shared)
        if domain == vertex:
            return self._residents[vertex], True
        child = domain.prefix(shared + 1)
        return self._children[vertex].setdefault(child, {}), True

    def offer(self, peer, domain):
        """
        Offers a peer to the tree routes

        The peer is placed in the single slot its domain maps to; capped slots
        keep only the `n_tuple` smallest node ids.

        Parameters
        ----------
        peer : NodeAddr
            Peer address
        domain : DomainPath
            Domain the peer joined

        Returns
        -------
        bool
            True if the tree routes changed
        """
        if peer.node == self.self_id:
            return False
        slot, capped = self._slot_for(domain)
        known = slot.get(peer.node)
        if known is not None:
            if known.peer == peer:
                return False
            known.peer = peer
            return True
        slot[peer.node] = RouteEntry(peer, domain, RouteKind.TREE)
        if capped and len(slot) > self.n_tuple:
            del slot[max(slot)]
            if peer.node not in slot:
                return False
        self._cache.pop(peer.node, None)
        self._changed()
        logger.debug('node %s learned tree route %s in %s', self.self_id, peer, domain)
        return True

    def tree_entries(self):
        entries = []
        for vertex in self.path:
            entries.extend(self._residents[vertex].values())
            for slot in self._children[vertex].values():
                entries.extend(slot.values())
        return entries

    def residents(self, vertex):
        return sorted(self._residents[vertex].values(), key=lambda entry: entry.node)

    def child_groups(self, vertex):
        """Maps each known off-path child group of `vertex` to its entries, sorted"""
        return {child: sorted(slot.values(), key=lambda entry: entry.node)
                for child, slot in sorted(self._children[vertex].items()) if slot}

    def gateways_of(self, vertex):
        """
        Entries (self included) acting as the gateways of `vertex`, which must
        lie on this node's own domain path. Equals the `n_tuple` smallest ids
        known in the vertex's subtree.
        """
        if vertex in self._gateway_memo:
            return self._gateway_memo[vertex]
        if vertex not in self._residents:
            raise ValueError('{} is not on the path of {}'.format(vertex, self.self_domain))
        pool = list(self._residents[vertex].values())
        for slot in self._children[vertex].values():
            pool.extend(slot.values())
        if vertex == self.self_domain:
            pool.append(self._self_entry)
        else:
            pool.extend(self.gateways_of(self.self_domain.prefix(len(vertex) + 1)))
        gateways = sorted(toolz.unique(pool, key=lambda entry: entry.node), key=lambda entry: entry.node)
        self._gateway_memo[vertex] = gateways[:self.n_tuple]
        return self._gateway_memo[vertex]

    def gateway_vertices(self):
        """Path vertices this node is currently a gateway of, root first"""
        return [vertex for vertex in self.path
                if any(entry.node == self.self_id for entry in self.gateways_of(vertex))]

    def group_view(self, vertex):
        members = list(self._residents[vertex].values())
        for slot in self._children[vertex].values():
            members.extend(slot.values())
        if vertex == self.self_domain:
            members.append(self._self_entry)
        else:
            members.extend(self.gateways_of(self.self_domain.prefix(len(vertex) + 1)))
        peers = tuple(entry.as_peer_info() for entry in toolz.unique(members, key=lambda entry: entry.node))
        return elect_gateways(GroupView(GroupId(vertex), peers), self.n_tuple)

    def group_views(self):
        """One :class:`GroupView` per layer of the own domain path, root first"""
        return [self.group_view(vertex) for vertex in self.path]

    def apply_join_ack(self, layers):
        """
        Offers every member listed in the per-layer snapshots of a JOIN_ACK

        Returns
        -------
        bool
            True if the tree routes changed
        """
        changed = False
        for layer in layers:
            for member in layer.members:
                changed = self.offer(member.addr, member.domain) or changed
        return changed

    def announce_scope(self):
        """
        Smallest subtree that contains every node which has to record this node

        That is the parent of the highest vertex this node is a gateway of,
        the root if it is a gateway of the root, or the own domain otherwise.
        """
        vertices = self.gateway_vertices()
        if not vertices:
            return self.self_domain
        highest = vertices[0]
        return ROOT if highest.is_root else highest.parent

    def cover_plan(self, scope):
        """
        Sends that deliver a message exactly once to every other known node of
        the subtree `scope`, assuming every recipient continues the plan
        according to the send's mode.

        Parameters
        ----------
        scope : DomainPath
            Ancestor-or-self of this node's domain

        Returns
        -------
        list of CoverSend
        """
        if not is_ancestor_or_self(scope, self.self_domain):
            raise ValueError('{} does not contain {}'.format(scope, self.self_domain))
        sends = []
        for vertex in self.path[len(scope) - 1:]:
            residents = self.residents(vertex)
            if vertex == self.self_domain:
                sends.extend(CoverSend(entry.peer, QueryMode.DIRECT) for entry in residents)
            elif residents:
                sends.append(CoverSend(residents[0].peer, QueryMode.RESIDENTS))
            for child, entries in self.child_groups(vertex).items():
                sends.append(CoverSend(entries[0].peer, QueryMode.COVER, child))
        return sends

    def leaf_peers(self):
        """Other members of the own domain"""
        return self.residents(self.self_domain)

    # ### cached routes ###

    def cache_insert(self, peer, domain):
        """
        Records an unstructured route learned from passing traffic

        A peer already held as a tree route is not cached; a peer already
        cached only has its ``last_used`` refreshed. When the cache overflows
        exactly one entry is evicted by the table's policy.

        Returns
        -------
        RouteEntry or None
            The evicted entry, if any
        """
        if peer.node == self.self_id or self.lookup_tree(peer.node) is not None:
            return None
        now = self._tick()
        known = self._cache.get(peer.node)
        if known is not None:
            known.last_used = now
            known.peer = peer
            return None
        self._cache[peer.node] = RouteEntry(peer, domain, RouteKind.CACHED, last_used=now, inserted_at=now)
        if len(self._cache) <= self.capacity:
            return None
        if self.policy is CachePolicy.LRU:
            victim = min(self._cache.values(), key=lambda entry: entry.last_used)
        else:
            victim = min(self._cache.values(),
                         key=lambda entry: (domain_distance(entry.peer_domain, self.self_domain),
                                            entry.inserted_at))
        del self._cache[victim.node]
        return victim

    def touch(self, node_id):
        entry = self._cache.get(node_id)
        if entry is not None:
            entry.last_used = self._tick()

    # ### lookups ###

    def lookup_tree(self, node_id):
        for entry in self.tree_entries():
            if entry.node == node_id:
                return entry
        return None

    def lookup(self, node_id):
        return self.lookup_tree(node_id) or self._cache.get(node_id)

    def references(self, node_id):
        return self.lookup(node_id) is not None

    def known_peers(self):
        """Every distinct peer referenced by a tree or cached route"""
        return list(toolz.unique(self.tree_entries() + list(self._cache.values()), key=lambda entry: entry.node))

    def candidates_for(self, target):
        """
        Routes strictly nearer to `target` than this node, nearest first

        Nearness is ordered by (longest common prefix with `target`, smallest
        domain distance to `target`). A peer whose domain is exactly as near as
        this node's own domain is not a candidate. The smallest node id breaks
        ties in the ordering only.

        Parameters
        ----------
        target : DomainPath
            Query or join target

        Returns
        -------
        list of RouteEntry
        """
        def nearness(domain):
            return -common_prefix_len(domain, target), domain_distance(domain, target)

        own = nearness(self.self_domain)
        entries = toolz.unique(self.tree_entries() + self.cached_routes, key=lambda entry: entry.node)
        nearer = [entry for entry in entries if nearness(entry.peer_domain) < own]
        return sorted(nearer, key=lambda entry: nearness(entry.peer_domain) + (entry.node,))

    # ### failures ###

    def handle_peer_failure(self, node_id):
        """
        Removes a failed peer from every tree and cached route; gateways are
        re-elected from the remaining entries.

        Returns
        -------
        bool
            True if the peer was referenced
        """
        removed = self._cache.pop(node_id, None) is not None
        for vertex in self.path:
            if self._residents[vertex].pop(node_id, None) is not None:
                removed = True
            for slot in self._children[vertex].values():
                if slot.pop(node_id, None) is not None:
                    removed = True
        if removed:
            self._changed()
            logger.debug('node %s dropped failed peer %s', self.self_id, node_id)
        return removed

    def leave(self):
        """Forgets every route"""
        for vertex in self.path:
            self._residents[vertex].clear()
            self._children[vertex].clear()
        self._cache.clear()
        self._changed()

    def snapshot(self):
        return copy.deepcopy(self)
