"""
Protocol tunables shared by the daemon and the simulator, and the YAML
loading both configuration files go through

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import yaml
from pydantic import BaseModel, ConfigDict, Field
from sidpy.base.dict_utils import nest_dict

from ..overlay import CachePolicy, DEFAULT_CACHE_CAPACITY, DEFAULT_N_TUPLE
from ..router import DEDUP_WINDOW
from ..wire import MAX_TTL

__all__ = ['NodeSettings', 'read_config_file', 'describe_validation_error']


class NodeSettings(BaseModel):
    """
    Every timing and sizing knob of the node protocol. Times are in
    milliseconds for the daemon and ticks for the simulator (1 tick = 1 ms).
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_tuple: int = Field(DEFAULT_N_TUPLE, ge=1, le=255)
    cache_policy: CachePolicy = CachePolicy.LRU
    cache_capacity: int = Field(DEFAULT_CACHE_CAPACITY, ge=0)
    ttl: int = Field(16, ge=0, le=MAX_TTL)
    deadline_ms: int = Field(2000, ge=1)
    k: int = Field(10, ge=1, le=255)
    ping_timeout_ms: int = Field(500, ge=1)
    ping_attempts: int = Field(3, ge=1)
    join_timeout_ms: int = Field(500, ge=1)
    join_attempts: int = Field(3, ge=1)
    fetch_window: int = Field(8, ge=1, le=64)
    fetch_retries: int = Field(5, ge=0)
    fetch_timeout_ms: int = Field(500, ge=1)
    list_timeout_ms: int = Field(500, ge=1)
    list_attempts: int = Field(3, ge=1)
    dedup_window: int = Field(DEDUP_WINDOW, ge=1)
    retry_empty: bool = True


def read_config_file(path):
    """
    Reads a YAML key/value configuration file

    Dotted keys (``cache.policy: mind``) are nested into sub-mappings.

    Parameters
    ----------
    path : str
        File path

    Returns
    -------
    dict

    Raises
    ------
    OSError
        If the file cannot be read
    ValueError
        If it is not YAML or not a mapping at the top level
    """
    with open(path, 'r', encoding='utf-8') as file_handle:
        try:
            data = yaml.safe_load(file_handle)
        except yaml.YAMLError as err:
            raise ValueError('{} is not valid YAML: {}'.format(path, err))
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValueError('{} must hold a key/value mapping'.format(path))
    if any('.' in str(key) for key in data):
        data = nest_dict(data, separator='.')
    return data


def describe_validation_error(error):
    """One ``dotted.field: message`` line per pydantic error"""
    lines = []
    for detail in error.errors():
        field_name = '.'.join(str(part) for part in detail['loc']) or '<root>'
        lines.append('{}: {}'.format(field_name, detail['msg']))
    return '; '.join(lines)
