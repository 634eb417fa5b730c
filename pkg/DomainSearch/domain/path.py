"""
:class:`~DomainSearch.domain.path.DomainPath` - the hierarchical domain
address space rooted at ``all`` and the prefix / distance arithmetic that
routing depends on.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

from dataclasses import dataclass

__all__ = ['ROOT', 'ROOT_LABEL', 'MAX_DEPTH', 'MAX_LABEL_LENGTH', 'DomainLabel', 'DomainPath',
           'DomainPathError', 'EmptyLabel', 'MissingRoot', 'IllegalChar',
           'PathLimitExceeded', 'parse_domain_path', 'common_prefix_len',
           'is_ancestor_or_self', 'domain_distance', 'domain_height']

ROOT_LABEL = 'all'
MAX_DEPTH = 16
MAX_LABEL_LENGTH = 64


class DomainPathError(ValueError):
    """Base class of every domain path parsing error"""


class EmptyLabel(DomainPathError):
    pass


class MissingRoot(DomainPathError):
    pass


class IllegalChar(DomainPathError):
    pass


class PathLimitExceeded(DomainPathError):
    pass


class DomainLabel(str):
    """
    One segment of a domain path, trimmed and lower-cased.

    Labels may contain internal spaces ("undergraduated course") but never
    '.' or '@'.
    """

    def __new__(cls, text):
        if isinstance(text, DomainLabel):
            return text
        if not isinstance(text, str):
            raise TypeError('a domain label must be a str, got {}'.format(type(text).__name__))
        if '@' in text:
            raise IllegalChar("'@' is not allowed in domain label {!r}".format(text))
        if '.' in text:
            raise IllegalChar("'.' is not allowed in domain label {!r}".format(text))
        normalized = text.strip().lower()
        if not normalized:
            raise EmptyLabel('domain labels may not be empty')
        if len(normalized) > MAX_LABEL_LENGTH:
            raise PathLimitExceeded('domain label longer than {} characters: {!r}'
                                    .format(MAX_LABEL_LENGTH, normalized))
        return super(DomainLabel, cls).__new__(cls, normalized)


@dataclass(frozen=True)
class DomainPath(object):
    """
    Dot-separated hierarchical domain identifier, e.g.
    ``all.education.undergraduated course.operating systems``.

    Parameters
    ----------
    labels : tuple of str
        Path labels, root first. The first label must be ``all``.
    """
    labels: tuple

    def __post_init__(self):
        labels = tuple(DomainLabel(label) for label in self.labels)
        if not labels:
            raise EmptyLabel('a domain path needs at least the root label')
        if labels[0] != ROOT_LABEL:
            raise MissingRoot("domain paths must start at '{}', got {!r}".format(ROOT_LABEL, labels[0]))
        if len(labels) - 1 > MAX_DEPTH:
            raise PathLimitExceeded('domain path deeper than {} levels'.format(MAX_DEPTH))
        object.__setattr__(self, 'labels', labels)

    def __str__(self):
        return '.'.join(self.labels)

    def __repr__(self):
        return 'DomainPath({!r})'.format(str(self))

    def __len__(self):
        return len(self.labels)

    def __lt__(self, other):
        return self.labels < other.labels

    @property
    def depth(self):
        return len(self.labels) - 1

    @property
    def is_root(self):
        return len(self.labels) == 1

    @property
    def parent(self):
        if self.is_root:
            return None
        return DomainPath(self.labels[:-1])

    def prefix(self, count):
        """
        Returns the ancestor made of the first `count` labels

        Parameters
        ----------
        count : int
            Number of labels to keep, between 1 and ``len(self)``
        """
        if not 1 <= count <= len(self.labels):
            raise ValueError('prefix length {} outside 1..{}'.format(count, len(self.labels)))
        if count == len(self.labels):
            return self
        return DomainPath(self.labels[:count])

    def child(self, label):
        return DomainPath(self.labels + (DomainLabel(label),))

    def ancestors(self):
        """Root first, self last"""
        return [self.prefix(count) for count in range(1, len(self.labels) + 1)]


ROOT = DomainPath((ROOT_LABEL,))


def parse_domain_path(text):
    """
    Parses the canonical (or user typed) text form of a domain path

    Parameters
    ----------
    text : str or bytes
        Dot separated labels. Bytes are decoded as UTF-8.

    Returns
    -------
    DomainPath
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode('utf-8')
    if not isinstance(text, str):
        raise TypeError('domain path text must be a str')
    if not text.strip():
        raise EmptyLabel('empty domain path')
    raw_labels = text.split('.')
    for label in raw_labels:
        if '@' in label:
            raise IllegalChar("'@' is not allowed in domain label {!r}".format(label))
        if not label.strip():
            raise EmptyLabel('empty label in domain path {!r}'.format(text))
    return DomainPath(tuple(raw_labels))


def common_prefix_len(a, b):
    count = 0
    for left, right in zip(a.labels, b.labels):
        if left != right:
            break
        count += 1
    return count


def is_ancestor_or_self(a, b):
    """True if `a` is `b` or one of its ancestors"""
    return len(a.labels) <= len(b.labels) and b.labels[:len(a.labels)] == a.labels


def domain_distance(a, b):
    """Hop distance between two vertices of the domain tree"""
    shared = common_prefix_len(a, b)
    return (len(a.labels) - shared) + (len(b.labels) - shared)


def domain_height(paths):
    """Largest depth among `paths` (0 for an empty collection)"""
    return max((path.depth for path in paths), default=0)
