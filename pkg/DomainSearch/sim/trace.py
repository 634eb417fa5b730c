"""
Simulation traces and the audit predicates evaluated over them.

A trace is the list of every protocol event in processing order. Each event
renders as one line::

    <tick> <kind> <src> <dst> <tag> <msg_id> [<detail>]

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

from collections import Counter
from dataclasses import dataclass

import toolz

from ..wire import Tag

__all__ = ['TraceEvent', 'TraceViolation', 'assert_trace', 'no_loop', 'at_most_once_serve', 'hop_bound',
           'message_budget', 'root_transit_fraction', 'route_forwards', 'servers', 'write_trace',
           'SEND', 'DELIVER', 'DROP', 'TIMER', 'SERVE']

SEND = 'SEND'
DELIVER = 'DELIVER'
DROP = 'DROP'
TIMER = 'TIMER'
SERVE = 'SERVE'


class TraceViolation(AssertionError):
    pass


@dataclass(frozen=True)
class TraceEvent(object):
    tick: int
    kind: str
    src: int
    dst: int
    tag: object = None
    msg_id: int = 0
    detail: str = ''

    def line(self):
        tag = Tag(self.tag).name if self.tag is not None else '-'
        return '{} {} {} {} {} {} {}'.format(self.tick, self.kind, self.src, self.dst, tag, self.msg_id,
                                             self.detail).rstrip()

    @property
    def is_route_query(self):
        return self.tag == Tag.QUERY and self.detail == 'route'


def write_trace(trace, path):
    with open(path, 'w', encoding='utf-8') as file_handle:
        for event in trace:
            file_handle.write(event.line() + '\n')


def route_forwards(trace, msg_id=None):
    """SEND events of route-phase QUERY messages, optionally of one query"""
    return [event for event in trace if event.kind == SEND and event.is_route_query
            and (msg_id is None or event.msg_id == msg_id)]


def servers(trace, msg_id):
    """Ids of the nodes that served query `msg_id`, in serving order"""
    return [event.dst for event in trace if event.kind == SERVE and event.msg_id == msg_id]


# ### predicates: each returns a list of violation descriptions ###

def no_loop(trace):
    """No node receives the route phase of the same query twice"""
    deliveries = Counter((event.msg_id, event.dst) for event in trace
                         if event.kind == DELIVER and event.is_route_query)
    return ['query {} reached node {} {} times while routing'.format(msg_id, node, count)
            for (msg_id, node), count in sorted(deliveries.items()) if count > 1]


def at_most_once_serve(trace):
    """No node serves the same query twice"""
    served = Counter((event.msg_id, event.dst) for event in trace if event.kind == SERVE)
    return ['node {} served query {} {} times'.format(node, msg_id, count)
            for (msg_id, node), count in sorted(served.items()) if count > 1]


def hop_bound(limit):
    """
    Predicate: every query is first served after at most `limit` route
    forwards
    """
    def check(trace):
        violations = []
        forwards = Counter()
        first_served = set()
        for event in trace:
            if event.kind == SEND and event.is_route_query and event.msg_id not in first_served:
                forwards[event.msg_id] += 1
            elif event.kind == SERVE and event.msg_id not in first_served:
                first_served.add(event.msg_id)
                if forwards[event.msg_id] > limit:
                    violations.append('query {} first served after {} forwards (limit {})'.format(
                        event.msg_id, forwards[event.msg_id], limit))
        return violations
    check.__name__ = 'hop_bound({})'.format(limit)
    return check


def message_budget(subtree_sizes, ttl):
    """
    Predicate: a query costs at most `ttl` route forwards plus one message
    per node of its target subtree

    Parameters
    ----------
    subtree_sizes : dict
        Query msg_id to the number of live nodes in its target subtree
    ttl : int
        Route hop budget
    """
    def check(trace):
        sent = Counter(event.msg_id for event in trace if event.kind == SEND and event.tag == Tag.QUERY)
        return ['query {} used {} QUERY messages (budget {})'.format(msg_id, sent[msg_id], ttl + size)
                for msg_id, size in sorted(subtree_sizes.items()) if sent[msg_id] > ttl + size]
    return check


def assert_trace(trace, *predicates):
    """
    Raises
    ------
    TraceViolation
        Listing every violation of every predicate
    """
    violations = list(toolz.concat(predicate(trace) for predicate in predicates))
    if violations:
        raise TraceViolation('{} trace violation(s):\n{}'.format(len(violations), '\n'.join(violations)))


def root_transit_fraction(trace, gateways):
    """
    Share of route forwards delivered to one of `gateways`, normally the
    gateways of the root layer

    Returns
    -------
    float
        0.0 when the trace holds no forward
    """
    forwards = route_forwards(trace)
    if not forwards:
        return 0.0
    gateways = set(gateways)
    return sum(event.dst in gateways for event in forwards) / len(forwards)
