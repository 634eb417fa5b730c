"""
Serving side of remote directory listing and chunked file reads.

Every path is resolved through :class:`~DomainSearch.search.SandboxRoot`;
nothing outside the sandbox is ever opened or stat-ed.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import hashlib
import logging
import os

from ..search import OutsideSandbox, is_encodable
from ..wire import (CHUNK_SIZE, ChunkStatus, DirEntry, EntryKind, FileChunk, ListDirResp,
                    ListStatus, MAX_MESSAGE_SIZE)

__all__ = ['FileAccessError', 'NotFound', 'NotADirectory', 'Timeout', 'ChecksumMismatch',
           'TooManyRetries', 'list_entries', 'listing_response', 'read_chunk', 'chunk_response',
           'file_digest', 'LISTING_BUDGET']

logger = logging.getLogger(__name__)

# room left for the header, the status fields and the echoed path
LISTING_BUDGET = MAX_MESSAGE_SIZE - 4096


class FileAccessError(IOError):
    pass


class NotFound(FileAccessError):
    pass


class NotADirectory(NotFound):
    pass


class Timeout(FileAccessError):
    pass


class ChecksumMismatch(FileAccessError):
    pass


class TooManyRetries(FileAccessError):
    pass


def list_entries(sandbox, rel_path):
    """
    Lists one sandbox directory

    Parameters
    ----------
    sandbox : SandboxRoot
        Shared root
    rel_path : str
        Directory relative to the root ('' or '/' for the root)

    Returns
    -------
    list of DirEntry
        Sorted by name; links that leave the sandbox are omitted

    Raises
    ------
    OutsideSandbox, NotFound, NotADirectory
    """
    directory = sandbox.resolve(rel_path)
    if not os.path.exists(directory):
        raise NotFound('{!r} does not exist'.format(rel_path))
    if not os.path.isdir(directory):
        raise NotADirectory('{!r} is not a directory'.format(rel_path))
    entries = []
    for item in os.scandir(directory):
        if not sandbox.contains(item.path) or not is_encodable(item.name):
            continue
        if item.is_dir():
            entries.append(DirEntry(item.name, EntryKind.DIR, 0))
        elif item.is_file():
            entries.append(DirEntry(item.name, EntryKind.FILE, item.stat().st_size))
    return sorted(entries, key=lambda entry: entry.name)


def listing_response(sandbox, rel_path):
    """LIST_DIR_RESP payload for `rel_path`, truncated to fit one datagram"""
    try:
        entries = list_entries(sandbox, rel_path)
    except OutsideSandbox:
        return ListDirResp(ListStatus.OUTSIDE_SANDBOX, rel_path)
    except NotADirectory:
        return ListDirResp(ListStatus.NOT_A_DIRECTORY, rel_path)
    except (NotFound, OSError):
        return ListDirResp(ListStatus.NOT_FOUND, rel_path)
    kept, used = [], 0
    for entry in entries:
        used += 2 + len(entry.name.encode('utf-8')) + 1 + 8
        if used > LISTING_BUDGET or len(kept) == 0xFFFF:
            logger.info('listing of %r truncated at %d entries', rel_path, len(kept))
            return ListDirResp(ListStatus.OK, rel_path, tuple(kept), truncated=True)
        kept.append(entry)
    return ListDirResp(ListStatus.OK, rel_path, tuple(kept))


def file_digest(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as file_handle:
        for block in iter(lambda: file_handle.read(1 << 16), b''):
            digest.update(block)
    return digest.digest()


def read_chunk(sandbox, rel_path, offset):
    """
    Reads the 8 KiB chunk of a sandbox file starting at `offset`

    Returns
    -------
    tuple
        ``(data, file_size, eof)``

    Raises
    ------
    OutsideSandbox, NotFound
    ValueError
        If `offset` is not a chunk boundary inside the file
    """
    path = sandbox.resolve(rel_path)
    if not os.path.isfile(path):
        raise NotFound('{!r} is not a file'.format(rel_path))
    size = os.path.getsize(path)
    if offset % CHUNK_SIZE or (offset >= size and not offset == size == 0):
        raise ValueError('offset {} is not a chunk of a {} byte file'.format(offset, size))
    with open(path, 'rb') as file_handle:
        file_handle.seek(offset)
        data = file_handle.read(CHUNK_SIZE)
    return data, size, offset + len(data) >= size


def chunk_response(sandbox, session_id, rel_path, offset):
    """FILE_CHUNK payload answering one requested offset; offset 0 carries the digest"""
    try:
        data, size, eof = read_chunk(sandbox, rel_path, offset)
        digest = file_digest(sandbox.resolve(rel_path)) if offset == 0 else b''
    except OutsideSandbox:
        return FileChunk(session_id, ChunkStatus.OUTSIDE_SANDBOX, offset)
    except ValueError:
        return FileChunk(session_id, ChunkStatus.BAD_OFFSET, offset)
    except (NotFound, OSError):
        return FileChunk(session_id, ChunkStatus.NOT_FOUND, offset)
    return FileChunk(session_id, ChunkStatus.OK, offset, size, eof, digest, data)
