"""
Virtual groups of the hierarchical overlay and n-tuple gateway election.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import heapq
from dataclasses import dataclass, field

from ..wire import GroupSnapshot

__all__ = ['GroupId', 'GroupView', 'elect_gateways']


@dataclass(frozen=True)
class GroupId(object):
    """
    A vertex of the virtual group tree

    Parameters
    ----------
    prefix : DomainPath
        Domain path prefix shared by every member of the group
    layer : int, optional
        Depth of `prefix`; computed when omitted
    """
    prefix: object
    layer: int = None

    def __post_init__(self):
        if self.layer is None:
            object.__setattr__(self, 'layer', self.prefix.depth)
        elif self.layer != self.prefix.depth:
            raise ValueError('group layer {} does not match depth of {}'.format(self.layer, self.prefix))


@dataclass(frozen=True)
class GroupView(object):
    """
    What one node knows about a group: the members it has heard of and the
    members elected to represent the group one layer up.

    ``members`` and ``gateways`` are tuples of :class:`~DomainSearch.wire.PeerInfo`
    sorted by node id.
    """
    group: GroupId
    members: tuple = ()
    gateways: tuple = field(default=())

    @property
    def member_ids(self):
        return [peer.addr.node for peer in self.members]

    @property
    def gateway_ids(self):
        return [peer.addr.node for peer in self.gateways]

    def without(self, node_id):
        """Copy with `node_id` dropped from the members (gateways untouched)"""
        return GroupView(self.group, tuple(peer for peer in self.members if peer.addr.node != node_id),
                         self.gateways)

    def to_snapshot(self):
        return GroupSnapshot(prefix=self.group.prefix, members=self.members,
                             gateways=tuple(self.gateway_ids))

    @classmethod
    def from_snapshot(cls, snapshot):
        members = tuple(sorted(snapshot.members, key=lambda peer: peer.addr.node))
        by_id = {peer.addr.node: peer for peer in members}
        gateways = tuple(by_id[node] for node in snapshot.gateways if node in by_id)
        return cls(GroupId(snapshot.prefix), members, gateways)


def elect_gateways(view, n):
    """
    Elects the `n` members with the smallest node ids as the group's gateways

    Parameters
    ----------
    view : GroupView
        Group whose members are considered; must not be empty
    n : int
        Replication factor (n-tuple), at least 1

    Returns
    -------
    GroupView
        Same group and members, gateways recomputed
    """
    if not view.members:
        raise ValueError('cannot elect gateways of an empty group {}'.format(view.group.prefix))
    if n < 1:
        raise ValueError('n-tuple must be at least 1, got {}'.format(n))
    members = tuple(sorted(view.members, key=lambda peer: peer.addr.node))
    gateways = tuple(heapq.nsmallest(n, members, key=lambda peer: peer.addr.node))
    return GroupView(view.group, members, gateways)
