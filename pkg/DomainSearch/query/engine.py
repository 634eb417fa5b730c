"""
User-facing query lifecycle: ``keywords@domain`` parsing, dispatch through
the router and presentation of the merged ranking.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import logging
from dataclasses import dataclass

import toolz

from ..domain import parse_domain_path
from ..search import tokenize

__all__ = ['Query', 'parse_query', 'serialize_query', 'run_query', 'finish_query', 'format_hits',
           'QueryError', 'NoAtSign', 'EmptyKeywords', 'NotJoined', 'NoResults', 'DEFAULT_K']

logger = logging.getLogger(__name__)

DEFAULT_K = 10


class QueryError(ValueError):
    pass


class NoAtSign(QueryError):
    pass


class EmptyKeywords(QueryError):
    pass


class NotJoined(RuntimeError):
    pass


class NoResults(LookupError):
    """
    The query closed without a single hit

    ``dead_end`` tells a target domain nobody could route to apart from one
    whose members simply hold no matching document.
    """

    def __init__(self, message, dead_end=False, responders=0):
        super(NoResults, self).__init__(message)
        self.dead_end = dead_end
        self.responders = responders


@dataclass(frozen=True)
class Query(object):
    keywords: tuple
    target: object
    match_all: bool = False
    k: int = DEFAULT_K

    def __post_init__(self):
        if not self.keywords:
            raise EmptyKeywords('a query needs at least one keyword')
        if not 1 <= self.k <= 255:
            raise QueryError('k must be within 1..255')


def parse_query(text, match_all=False, k=DEFAULT_K):
    """
    Parses a ``keywords@domain`` query

    The input is split on its last '@': keywords never need one after
    tokenization, while a domain may not contain any.

    Parameters
    ----------
    text : str
        User input such as ``'Windows 10@all.education.operating systems'``
    match_all : bool, optional
        Require every keyword (AND) instead of any (OR)
    k : int, optional
        Hits per responder. Default 10

    Returns
    -------
    Query

    Raises
    ------
    NoAtSign, EmptyKeywords
    DomainPathError
        If the domain part is not a valid path
    """
    keywords, sep, domain = text.rpartition('@')
    if not sep:
        raise NoAtSign('query {!r} has no @domain part'.format(text))
    terms = tuple(toolz.unique(tokenize(keywords)))
    if not terms:
        raise EmptyKeywords('query {!r} has no keyword of 2 to 40 letters or digits'.format(text))
    return Query(terms, parse_domain_path(domain), match_all=match_all, k=k)


def serialize_query(query):
    """``keywords@domain`` text that parses back into `query`"""
    return '{}@{}'.format(' '.join(query.keywords), query.target)


def run_query(node, query, drive, via=None, expected=None):
    """
    Issues `query` from `node` and waits for its aggregation to close

    Parameters
    ----------
    node : Node
        Originator
    query : Query
        Parsed query
    drive : callable
        ``drive(until)`` runs the node's event loop (simulator or daemon)
        until ``until()`` returns True
    via : str, optional
        Member endpoint to inject at when `node` is not a joined member
    expected : int, optional
        Close as soon as this many nodes served the query

    Returns
    -------
    list of Hit
        Merged ranking

    Raises
    ------
    NotJoined
        If `node` is not a joined member and no `via` endpoint is given
    NoResults
    """
    if via is None and not (node.is_member and node.joined):
        raise NotJoined('node {} has not joined the overlay'.format(node.addr))
    handle = node.start_query(query, via=via, expected=expected)
    drive(lambda: handle.done)
    return finish_query(handle)


def finish_query(handle):
    """
    Ranked hits of a closed query

    Raises
    ------
    NoResults
        If no hit arrived; carries whether a dead end was reported
    """
    state = handle.state
    hits = state.ranked()
    if not hits:
        if state.dead_end and not state.responders:
            reason = 'no route toward {}'.format(state.target)
        else:
            reason = 'no document in {} matches {}'.format(state.target, ' '.join(state.keywords))
        raise NoResults(reason, dead_end=state.dead_end, responders=len(state.responders))
    logger.debug('query %s: %d hits from %d responders', state.msg_id, len(hits), len(state.responders))
    return hits


def format_hits(hits):
    """Plain-text ranking table, one hit per line"""
    lines = ['{:>4}  {:>10}  {:<24}  {}'.format('rank', 'score', 'responder', 'path')]
    for rank, hit in enumerate(hits, 1):
        lines.append('{:>4}  {:>10.6f}  {:<24}  {}'.format(rank, hit.score_micros / 1e6,
                                                           str(hit.responder), hit.path))
        if hit.snippet:
            lines.append('      ' + hit.snippet)
    return '\n'.join(lines)
