"""
Remote directory listing and reliable chunked file transfer

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    server
    fetch
"""

from .server import (FileAccessError, NotFound, NotADirectory, Timeout, ChecksumMismatch,
                     TooManyRetries, list_entries, listing_response, read_chunk, chunk_response,
                     file_digest)
from .fetch import (FetchSession, ListingRequest, fetch_file, list_dir, FETCH_WINDOW, FETCH_MAX_RETRIES,
                    ROUND_TIMEOUT_MS, LIST_ATTEMPTS)

__all__ = ['FileAccessError', 'NotFound', 'NotADirectory', 'Timeout', 'ChecksumMismatch',
           'TooManyRetries', 'list_entries', 'listing_response', 'read_chunk', 'chunk_response',
           'file_digest', 'FetchSession', 'ListingRequest', 'fetch_file', 'list_dir', 'FETCH_WINDOW',
           'FETCH_MAX_RETRIES', 'ROUND_TIMEOUT_MS', 'LIST_ATTEMPTS']
