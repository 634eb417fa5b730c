"""
In-memory inverted index with TF-IDF ranked retrieval.

Scores are ``sum(tf(t, d) * ln(1 + N / df(t)))`` over the distinct query
terms and are reported as fixed-point integers (score x 10**6).

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import logging
import os
import warnings
from collections import Counter
from dataclasses import dataclass

import dask
import numpy as np
import toolz

from .extractors import ExtractionError, Unsupported, extract_text
from .sandbox import SandboxRoot, is_encodable
from .tokenize import iter_tokens, tokenize

__all__ = ['DocRecord', 'SourceDocument', 'SearchHit', 'InvertedIndex', 'build_index', 'make_snippet',
           'index_directory', 'search', 'SCORE_SCALE', 'SNIPPET_CHARS', 'PREVIEW_CHARS']

logger = logging.getLogger(__name__)

SCORE_SCALE = 10 ** 6
SNIPPET_CHARS = 160
PREVIEW_CHARS = 4096


@dataclass(frozen=True)
class DocRecord(object):
    doc_id: int
    rel_path: str
    size: int
    token_count: int
    mtime: int
    preview: str = ''


@dataclass(frozen=True)
class SourceDocument(object):
    """Input of :func:`build_index`"""
    rel_path: str
    text: str
    size: int = None
    mtime: int = 0


@dataclass(frozen=True)
class SearchHit(object):
    doc: DocRecord
    score_micros: int
    snippet: str = ''

    @property
    def score(self):
        return self.score_micros / SCORE_SCALE


def _check_rel_path(rel_path):
    if '..' in rel_path.split('/') or rel_path.startswith('/'):
        raise ValueError('document path {!r} must stay relative to the sandbox'.format(rel_path))


def _preview(text):
    return ' '.join(text.split())[:PREVIEW_CHARS]


def make_snippet(preview, terms):
    """
    Up to 160 characters of `preview` around the first occurrence of any of
    `terms`; the head of the preview if none occurs.
    """
    wanted = set(terms)
    for start, term in iter_tokens(preview):
        if term in wanted:
            begin = max(0, min(start - SNIPPET_CHARS // 4, len(preview) - SNIPPET_CHARS))
            return preview[begin:begin + SNIPPET_CHARS]
    return preview[:SNIPPET_CHARS]


class InvertedIndex(object):
    """
    Term to postings map plus the document store

    Parameters
    ----------
    postings : dict
        term -> tuple of ``(doc_id, tf)`` sorted by doc_id
    doc_store : dict
        doc_id -> :class:`DocRecord`
    root : str, optional
        Sandbox root the documents were read from ('' for synthetic corpora)
    skipped : list, optional
        Relative paths that were not indexed

    Notes
    -----
    Immutable once built; readers may share it across threads. Rebuilding
    produces a new object that replaces the old one in a single assignment.
    """

    def __init__(self, postings, doc_store, root='', skipped=None):
        self.postings = postings
        self.doc_store = doc_store
        self.root = root
        self.skipped = list(skipped or [])
        self._arrays = {}

    def __repr__(self):
        return 'InvertedIndex(N={}, terms={})'.format(self.doc_count, len(self.postings))

    def __eq__(self, other):
        return (isinstance(other, InvertedIndex) and self.root == other.root
                and self.postings == other.postings and self.doc_store == other.doc_store)

    @property
    def doc_count(self):
        return len(self.doc_store)

    def df(self, term):
        return len(self.postings.get(term, ()))

    def terms(self):
        return sorted(self.postings)

    def _posting_arrays(self, term):
        if term not in self._arrays:
            pairs = np.array(self.postings[term], dtype=np.int64).reshape(-1, 2)
            self._arrays[term] = pairs[:, 0], pairs[:, 1]
        return self._arrays[term]

    def search(self, keywords, k=10, match_all=False):
        """
        Ranks the documents matching `keywords`

        Parameters
        ----------
        keywords : list of str
            Normalized query terms; duplicates count once
        k : int, optional
            Maximum number of hits. Default 10
        match_all : bool, optional
            Keep only documents containing every term. Default False

        Returns
        -------
        list of SearchHit
            Descending score, ties by ascending doc_id
        """
        terms = list(toolz.unique(keywords))
        if not terms or k <= 0 or not self.doc_store:
            return []
        if match_all and any(term not in self.postings for term in terms):
            return []
        count = self.doc_count
        scores = np.zeros(count, dtype=np.float64)
        matched = np.zeros(count, dtype=np.int64)
        for term in terms:
            if term not in self.postings:
                continue
            doc_ids, tfs = self._posting_arrays(term)
            idf = np.log1p(count / len(doc_ids))
            scores[doc_ids] += tfs * idf
            matched[doc_ids] += 1
        needed = len(terms) if match_all else 1
        candidates = np.flatnonzero(matched >= needed)
        fixed = np.rint(scores[candidates] * SCORE_SCALE).astype(np.int64)
        order = np.lexsort((candidates, -fixed))[:k]
        return [SearchHit(self.doc_store[int(candidates[i])], int(fixed[i]),
                          make_snippet(self.doc_store[int(candidates[i])].preview, terms))
                for i in order]


def search(index, keywords, k=10, match_all=False):
    """Functional form of :meth:`InvertedIndex.search`"""
    return index.search(keywords, k=k, match_all=match_all)


def build_index(documents, root='', skipped=None):
    """
    Builds an index from in-memory documents

    Parameters
    ----------
    documents : iterable of SourceDocument or tuple
        ``(rel_path, text, size, mtime)``; doc ids follow the iteration order
    root : str, optional
        Sandbox root recorded in the index
    skipped : list, optional
        Paths that were not indexed, carried along for reporting

    Returns
    -------
    InvertedIndex
    """
    postings = {}
    doc_store = {}
    for doc_id, document in enumerate(documents):
        if not isinstance(document, SourceDocument):
            document = SourceDocument(*document)
        _check_rel_path(document.rel_path)
        counts = Counter(tokenize(document.text))
        size = len(document.text.encode('utf-8')) if document.size is None else document.size
        doc_store[doc_id] = DocRecord(doc_id, document.rel_path, int(size), sum(counts.values()),
                                      int(document.mtime), _preview(document.text))
        for term, tf in counts.items():
            postings.setdefault(term, []).append((doc_id, tf))
    return InvertedIndex({term: tuple(pairs) for term, pairs in postings.items()}, doc_store,
                         root=root, skipped=skipped)


def _load_document(abs_path, rel_path):
    try:
        text = extract_text(abs_path)
        stat = os.stat(abs_path)
    except (ExtractionError, OSError) as err:
        return rel_path, err
    return rel_path, SourceDocument(rel_path, text, stat.st_size, int(stat.st_mtime))


def index_directory(root, verbose=False, scheduler='threads'):
    """
    Indexes every supported document below a sandbox root

    Text extraction runs in parallel through :func:`dask.compute`; documents
    are numbered in sorted path order so unchanged trees index identically.

    Parameters
    ----------
    root : SandboxRoot or str
        Directory to index
    verbose : bool, optional
        Print a summary line. Default False
    scheduler : str, optional
        dask scheduler used for extraction. Default 'threads'

    Returns
    -------
    InvertedIndex

    Raises
    ------
    RootMissing
        If `root` is not a directory
    """
    sandbox = root if isinstance(root, SandboxRoot) else SandboxRoot(root)
    documents, skipped, tasks = [], [], []
    for abs_path, rel_path in sandbox.walk():
        if not is_encodable(rel_path):
            skipped.append(rel_path.encode('utf-8', 'surrogateescape').decode('utf-8', 'replace'))
            warnings.warn('skipping {!r}: file name is not valid UTF-8'.format(rel_path))
            continue
        tasks.append(dask.delayed(_load_document)(abs_path, rel_path))
    loaded = dask.compute(*tasks, scheduler=scheduler) if tasks else ()
    for rel_path, outcome in loaded:
        if isinstance(outcome, SourceDocument):
            documents.append(outcome)
            continue
        skipped.append(rel_path)
        if isinstance(outcome, Unsupported):
            logger.debug('skipping %s: %s', rel_path, outcome)
        else:
            warnings.warn('skipping {}: {}'.format(rel_path, outcome))
    index = build_index(documents, root=sandbox.root, skipped=skipped)
    if verbose:
        print('Indexed {} documents ({} terms) under {}, skipped {}'.format(
            index.doc_count, len(index.postings), sandbox.root, len(skipped)))
    return index
