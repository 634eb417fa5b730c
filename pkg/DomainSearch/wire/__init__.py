"""
Closed message set and its canonical binary encoding

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    messages
    codec
"""

from .messages import (Tag, QueryMode, ListStatus, ChunkStatus, EntryKind, NodeAddr,
                       GroupSnapshot, PeerInfo, WireHit, DirEntry, JoinReq, JoinAck,
                       QueryPayload, ResultPayload, ListDirReq, ListDirResp, FileReq,
                       FileChunk, Ping, Pong, Message, MAX_NODE_ID, MAX_TTL, CHUNK_SIZE)
from .codec import (encode, decode, peek_header, Writer, Reader, WireError, Truncated,
                    UnknownTag, BadUtf8, LimitExceeded, Oversize, BadMagic, BadField,
                    MAX_MESSAGE_SIZE, MAX_SNIPPET)

__all__ = ['Tag', 'QueryMode', 'ListStatus', 'ChunkStatus', 'EntryKind', 'NodeAddr',
           'GroupSnapshot', 'PeerInfo', 'WireHit', 'DirEntry', 'JoinReq', 'JoinAck',
           'QueryPayload', 'ResultPayload', 'ListDirReq', 'ListDirResp', 'FileReq',
           'FileChunk', 'Ping', 'Pong', 'Message', 'MAX_NODE_ID', 'MAX_TTL', 'CHUNK_SIZE',
           'encode', 'decode', 'peek_header', 'Writer', 'Reader', 'WireError', 'Truncated',
           'UnknownTag', 'BadUtf8', 'LimitExceeded', 'Oversize', 'BadMagic', 'BadField',
           'MAX_MESSAGE_SIZE', 'MAX_SNIPPET']
