"""
Tokenizer shared by indexing, searching and query parsing

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import re

__all__ = ['tokenize', 'iter_tokens', 'MIN_TOKEN_LENGTH', 'MAX_TOKEN_LENGTH']

MIN_TOKEN_LENGTH = 2
MAX_TOKEN_LENGTH = 40

# anything that is not a letter or a digit separates tokens
_TOKEN = re.compile(r'[^\W_]+')


def iter_tokens(text):
    """
    Yields ``(start, term)`` for every kept token of `text`

    Parameters
    ----------
    text : str
        Free text

    Yields
    ------
    tuple of (int, str)
        Character offset of the token in `text` and the lower-cased term
    """
    for match in _TOKEN.finditer(text):
        term = match.group().lower()
        if MIN_TOKEN_LENGTH <= len(term) <= MAX_TOKEN_LENGTH:
            yield match.start(), term


def tokenize(text):
    """
    Splits `text` on every non-alphanumeric character, lower-cases the pieces
    and drops those shorter than 2 or longer than 40 characters.

    Examples
    --------
    >>> tokenize('Windows 10')
    ['windows', '10']
    >>> tokenize('C++, c++')
    []
    """
    return [term for _, term in iter_tokens(text)]
