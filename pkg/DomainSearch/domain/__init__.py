"""
The hierarchical domain address space rooted at ``all``

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    path
"""
from .path import (ROOT, DomainLabel, DomainPath, DomainPathError, EmptyLabel, MissingRoot,
                   IllegalChar, PathLimitExceeded, parse_domain_path, common_prefix_len,
                   is_ancestor_or_self, domain_distance, domain_height)

__all__ = ['ROOT', 'DomainLabel', 'DomainPath', 'DomainPathError', 'EmptyLabel', 'MissingRoot',
           'IllegalChar', 'PathLimitExceeded', 'parse_domain_path', 'common_prefix_len',
           'is_ancestor_or_self', 'domain_distance', 'domain_height']
