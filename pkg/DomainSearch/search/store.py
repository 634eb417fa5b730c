"""
On-disk cache of an :class:`~DomainSearch.search.index.InvertedIndex`.

Layout, using the wire primitives (big-endian, str16 strings)::

    magic      4s   b'SIDX'
    version    u8
    root       str16
    doc count  u32, then per document in doc_id order:
               rel_path str16, size u64, token_count u32, mtime u64, preview str16
    term count u32, then per term in sorted order:
               term str16, posting count u32, then (doc_id u32, tf u32) pairs
    digest     32 bytes, SHA-256 of everything before it

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import hashlib
import logging
import os
import tempfile

from ..wire import Reader, WireError, Writer
from .index import DocRecord, InvertedIndex, index_directory
from .sandbox import SandboxRoot

__all__ = ['IndexCacheError', 'serialize_index', 'deserialize_index', 'save_index',
           'load_index', 'load_or_build', 'SIDX_MAGIC', 'SIDX_VERSION']

logger = logging.getLogger(__name__)

SIDX_MAGIC = b'SIDX'
SIDX_VERSION = 1
_DIGEST_SIZE = 32


class IndexCacheError(IOError):
    pass


def serialize_index(index):
    """Deterministic byte form of `index`"""
    w = Writer()
    w.raw(SIDX_MAGIC)
    w.u8(SIDX_VERSION)
    w.str16(index.root)
    w.u32(index.doc_count)
    for doc_id in range(index.doc_count):
        doc = index.doc_store[doc_id]
        w.str16(doc.rel_path)
        w.u64(doc.size)
        w.u32(doc.token_count)
        w.u64(doc.mtime)
        w.str16(doc.preview)
    w.u32(len(index.postings))
    for term in index.terms():
        w.str16(term)
        pairs = index.postings[term]
        w.u32(len(pairs))
        for doc_id, tf in pairs:
            w.u32(doc_id)
            w.u32(tf)
    body = w.getvalue()
    return body + hashlib.sha256(body).digest()


def deserialize_index(data, root=None):
    """
    Parses and verifies a serialized index

    Parameters
    ----------
    data : bytes
        Serialized index
    root : str, optional
        Expected sandbox root; a mismatch is an error

    Raises
    ------
    IndexCacheError
        On a bad magic, version, digest or root, or a malformed body
    """
    if len(data) < len(SIDX_MAGIC) + _DIGEST_SIZE or data[:len(SIDX_MAGIC)] != SIDX_MAGIC:
        raise IndexCacheError('not an index cache file')
    body, digest = data[:-_DIGEST_SIZE], data[-_DIGEST_SIZE:]
    if hashlib.sha256(body).digest() != digest:
        raise IndexCacheError('index cache digest mismatch')
    r = Reader(body, len(SIDX_MAGIC))
    try:
        version = r.u8()
        if version != SIDX_VERSION:
            raise IndexCacheError('unsupported index cache version {}'.format(version))
        cached_root = r.str16()
        if root is not None and cached_root != root:
            raise IndexCacheError('index cache was built for {}, not {}'.format(cached_root, root))
        doc_store = {}
        for doc_id in range(r.u32()):
            doc_store[doc_id] = DocRecord(doc_id, rel_path=r.str16(), size=r.u64(), token_count=r.u32(),
                                          mtime=r.u64(), preview=r.str16())
        postings = {}
        for _ in range(r.u32()):
            term = r.str16()
            postings[term] = tuple((r.u32(), r.u32()) for _ in range(r.u32()))
        r.finish()
    except WireError as err:
        raise IndexCacheError('corrupt index cache: {}'.format(err))
    return InvertedIndex(postings, doc_store, root=cached_root)


def save_index(index, path):
    """
    Writes `index` to `path` atomically: a reader sees either the previous
    file or the complete new one.
    """
    data = serialize_index(index)
    directory = os.path.dirname(os.path.abspath(path))
    handle, tmp_path = tempfile.mkstemp(prefix='.sidx-', dir=directory)
    try:
        with os.fdopen(handle, 'wb') as file_handle:
            file_handle.write(data)
            file_handle.flush()
            os.fsync(file_handle.fileno())
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def load_index(path, root=None):
    with open(path, 'rb') as file_handle:
        return deserialize_index(file_handle.read(), root=root)


def load_or_build(root, cache_path=None, rebuild=False, verbose=False):
    """
    Loads the verified cache for `root`, or indexes the directory and
    rewrites the cache.

    Parameters
    ----------
    root : SandboxRoot or str
        Sandbox to index
    cache_path : str, optional
        Cache file; no caching when None
    rebuild : bool, optional
        Ignore an existing cache. Default False
    verbose : bool, optional
        Passed to :func:`index_directory`

    Returns
    -------
    InvertedIndex
    """
    sandbox = root if isinstance(root, SandboxRoot) else SandboxRoot(root)
    if cache_path and not rebuild and os.path.exists(cache_path):
        try:
            return load_index(cache_path, root=sandbox.root)
        except (IndexCacheError, OSError) as err:
            logger.warning('rebuilding index, cache %s unusable: %s', cache_path, err)
    index = index_directory(sandbox, verbose=verbose)
    if cache_path:
        try:
            save_index(index, cache_path)
        except (OSError, WireError) as err:
            logger.warning('could not write index cache %s: %s', cache_path, err)
    return index
