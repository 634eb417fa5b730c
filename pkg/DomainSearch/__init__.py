"""
The DomainSearch package

Submodules
----------

.. autosummary::
    :toctree: _autosummary

    domain
    wire
    overlay
    router
    search
    files
    query
    sim
    node
"""
from .__version__ import version as __version__
from DomainSearch import domain, wire, overlay, router, search, files, query, node, sim

__all__ = ['__version__', 'domain', 'wire', 'overlay', 'router', 'search', 'files', 'query', 'node', 'sim']
