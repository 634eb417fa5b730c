"""
Local search engine of a node: sandbox, text extraction, inverted index and its on-disk cache

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    tokenize
    extractors
    sandbox
    index
    store
"""

from .tokenize import tokenize, iter_tokens
from .extractors import (ExtractionError, Unsupported, TextExtractor, HTMLExtractor,
                         register_extractor, extractor_for, supported_extensions, extract_text)
from .sandbox import SandboxRoot, SandboxError, OutsideSandbox, RootMissing, is_encodable
from .index import (DocRecord, SourceDocument, SearchHit, InvertedIndex, build_index,
                    index_directory, search, make_snippet, SCORE_SCALE, SNIPPET_CHARS)
from .store import (IndexCacheError, serialize_index, deserialize_index, save_index, load_index,
                    load_or_build)

__all__ = ['tokenize', 'iter_tokens', 'ExtractionError', 'Unsupported', 'TextExtractor',
           'HTMLExtractor', 'register_extractor', 'extractor_for', 'supported_extensions',
           'extract_text', 'SandboxRoot', 'SandboxError', 'OutsideSandbox', 'RootMissing', 'is_encodable',
           'DocRecord', 'SourceDocument', 'SearchHit', 'InvertedIndex', 'build_index',
           'index_directory', 'search', 'make_snippet', 'SCORE_SCALE', 'SNIPPET_CHARS',
           'IndexCacheError', 'serialize_index', 'deserialize_index', 'save_index', 'load_index',
           'load_or_build']
