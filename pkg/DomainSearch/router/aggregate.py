"""
Originator-side aggregation of RESULT messages.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

from collections import deque
from dataclasses import dataclass, field

__all__ = ['Hit', 'QueryState', 'collect_results', 'DedupWindow', 'LateResult', 'DeadEnd',
           'DEDUP_WINDOW']

DEDUP_WINDOW = 4096


class LateResult(RuntimeError):
    pass


class DeadEnd(LookupError):
    """No route nearer to the target domain exists"""


@dataclass(frozen=True)
class Hit(object):
    responder: object
    path: str
    score_micros: int
    size: int = 0
    snippet: str = ''

    @property
    def rank_key(self):
        return -self.score_micros, self.responder.node, self.path

    def as_dict(self):
        return {'responder': self.responder.node, 'endpoint': self.responder.endpoint, 'path': self.path,
                'score_micros': self.score_micros, 'size': self.size, 'snippet': self.snippet}


@dataclass
class QueryState(object):
    """
    Aggregation state of one query, kept at its originator only

    Parameters
    ----------
    msg_id : int
        Id of the QUERY message; every RESULT echoes it
    origin : NodeAddr
        Originator
    target : DomainPath
        Target domain
    keywords : tuple of str
        Normalized query terms
    deadline : int
        Transport time (ms or ticks) at which the aggregation closes
    expected : int, optional
        Number of serving nodes after which the aggregation may close early
    """
    msg_id: int
    origin: object
    target: object
    keywords: tuple
    deadline: int
    expected: int = None
    results_received: int = 0
    responders: set = field(default_factory=set)
    hits: dict = field(default_factory=dict)
    dead_end: bool = False
    ttl_expired: bool = False
    closed: bool = False

    @property
    def complete(self):
        return self.expected is not None and len(self.responders) >= self.expected

    def ranked(self):
        """Merged hits by descending score, then responder id, then path"""
        return sorted(self.hits.values(), key=lambda hit: hit.rank_key)

    def close(self):
        self.closed = True


def collect_results(state, message):
    """
    Merges one RESULT into an open aggregation

    Parameters
    ----------
    state : QueryState
        Open aggregation with the RESULT's msg_id
    message : Message
        RESULT message

    Returns
    -------
    list of Hit
        The merged ranking so far

    Raises
    ------
    LateResult
        If the aggregation already closed
    """
    if message.msg_id != state.msg_id:
        raise ValueError('RESULT {} does not belong to query {}'.format(message.msg_id, state.msg_id))
    if state.closed:
        raise LateResult('RESULT from {} for closed query {}'.format(message.payload.responder, state.msg_id))
    result = message.payload
    state.results_received += 1
    if result.dead_end:
        state.dead_end = True
    elif result.ttl_expired:
        state.ttl_expired = True
    else:
        state.responders.add(result.responder.node)
    for wire_hit in result.hits:
        key = (result.responder.node, wire_hit.path)
        if key not in state.hits:
            state.hits[key] = Hit(result.responder, wire_hit.path, wire_hit.score_micros, wire_hit.size,
                                  wire_hit.snippet)
    return state.ranked()


class DedupWindow(object):
    """
    The last `capacity` ``(src node, msg_id)`` pairs, evicted first in first out

    Parameters
    ----------
    capacity : int, optional
        Window size. Default 4096
    """

    def __init__(self, capacity=DEDUP_WINDOW):
        self.capacity = capacity
        self._order = deque()
        self._seen = set()

    def __len__(self):
        return len(self._seen)

    def __contains__(self, key):
        return key in self._seen

    def check_and_add(self, key):
        """True if `key` was already seen; records it otherwise"""
        if key in self._seen:
            return True
        self._seen.add(key)
        self._order.append(key)
        if len(self._order) > self.capacity:
            self._seen.discard(self._order.popleft())
        return False
