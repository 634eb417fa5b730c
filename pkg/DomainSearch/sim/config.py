"""
Simulator scenario description

A scenario is a YAML mapping such as::

    seed: 42
    latency: {min: 1, max: 5}
    loss_rate: 0.0
    n_tuple: 2
    cache.capacity: 32
    nodes:
      - {id: 1, domain: all.cs.os, documents: [{path: a.txt, text: paging and swapping}]}
      - {id: 2, domain: all.cs.db}
    queries:
      - {origin: 2, input: "paging@all.cs"}
    kills: [1]

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..domain import DomainPath, parse_domain_path
from ..node.settings import NodeSettings, describe_validation_error, read_config_file
from ..overlay import CachePolicy, DEFAULT_CACHE_CAPACITY, DEFAULT_N_TUPLE
from ..wire import MAX_NODE_ID, MAX_TTL

__all__ = ['SimConfig', 'NodeSpec', 'DocumentSpec', 'QuerySpec', 'LatencyRange', 'CacheSpec',
           'ConfigInvalid', 'load_sim_config', 'sim_config']


class ConfigInvalid(ValueError):
    pass


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid', arbitrary_types_allowed=True)


class LatencyRange(_Spec):
    min: int = Field(1, ge=0)
    max: int = Field(1, ge=0)

    @model_validator(mode='after')
    def _ordered(self):
        if self.min > self.max:
            raise ValueError('latency min {} exceeds max {}'.format(self.min, self.max))
        return self


class CacheSpec(_Spec):
    policy: CachePolicy = CachePolicy.LRU
    capacity: int = Field(DEFAULT_CACHE_CAPACITY, ge=0)


class DocumentSpec(_Spec):
    path: str
    text: str = ''


class NodeSpec(_Spec):
    id: int = Field(ge=0, le=MAX_NODE_ID)
    domain: DomainPath
    documents: List[DocumentSpec] = []
    sandbox: Optional[str] = None

    @field_validator('domain', mode='before')
    @classmethod
    def _parse_domain(cls, value):
        return value if isinstance(value, DomainPath) else parse_domain_path(str(value))


class QuerySpec(_Spec):
    origin: int
    input: str
    match_all: bool = False


class SimConfig(_Spec):
    """
    Everything a simulation run depends on; equal configs give equal traces
    """
    seed: int = Field(0, ge=0, lt=2 ** 64)
    latency: LatencyRange = LatencyRange()
    loss_rate: float = Field(0.0, ge=0.0, lt=1.0)
    nodes: List[NodeSpec] = Field(min_length=1)
    bootstrap: Optional[int] = None
    n_tuple: int = Field(DEFAULT_N_TUPLE, ge=1, le=255)
    cache: CacheSpec = CacheSpec()
    ttl: int = Field(16, ge=0, le=MAX_TTL)
    deadline_ticks: int = Field(2000, ge=1)
    lossless_build: bool = True
    queries: List[QuerySpec] = []
    kills: List[int] = []
    max_ticks: int = Field(10 ** 7, ge=1)

    @model_validator(mode='after')
    def _known_ids(self):
        ids = [spec.id for spec in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError('node ids must be unique')
        known = set(ids)
        referenced = [('bootstrap', self.bootstrap)] if self.bootstrap is not None else []
        referenced += [('queries', query.origin) for query in self.queries]
        referenced += [('kills', node_id) for node_id in self.kills]
        for where, node_id in referenced:
            if node_id not in known:
                raise ValueError('{} names unknown node {}'.format(where, node_id))
        return self

    @property
    def bootstrap_id(self):
        return self.bootstrap if self.bootstrap is not None else self.nodes[0].id

    def settings(self):
        """:class:`NodeSettings` every simulated node runs with"""
        return NodeSettings(n_tuple=self.n_tuple, cache_policy=self.cache.policy,
                            cache_capacity=self.cache.capacity, ttl=self.ttl,
                            deadline_ms=self.deadline_ticks)


def sim_config(**fields):
    """Builds a :class:`SimConfig`, raising :class:`ConfigInvalid` on bad input"""
    try:
        return SimConfig(**fields)
    except ValidationError as err:
        raise ConfigInvalid(describe_validation_error(err))


def load_sim_config(path):
    """
    Reads a YAML scenario file

    Raises
    ------
    ConfigInvalid
        Naming the offending field, or the reason the file is unreadable
    """
    try:
        data = read_config_file(path)
    except (OSError, ValueError) as err:
        raise ConfigInvalid(str(err))
    return sim_config(**data)
