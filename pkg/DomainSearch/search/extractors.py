"""
Pluggable text extraction from shared documents.

Extractors are :class:`sidpy.Reader` subclasses: constructed with a file
path, answering :meth:`can_read` and returning the document text from
:meth:`read`. Only plain text and HTML are shipped; further formats are added
with :func:`register_extractor`.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import os

from bs4 import BeautifulSoup
from sidpy import Reader

__all__ = ['ExtractionError', 'Unsupported', 'TextExtractor', 'HTMLExtractor',
           'register_extractor', 'extractor_for', 'supported_extensions', 'extract_text']


class ExtractionError(IOError):
    pass


class Unsupported(ExtractionError):
    pass


def _extension(file_path):
    return os.path.splitext(file_path)[1].lstrip('.').lower()


class TextExtractor(Reader):
    """
    Plain text and markdown, decoded as UTF-8 with undecodable bytes replaced
    """
    extensions = ('txt', 'md')

    def __init__(self, file_path, verbose=False):
        super(TextExtractor, self).__init__(file_path)
        self._input_file_path = file_path
        self.verbose = verbose

    def can_read(self):
        return bool(super(TextExtractor, self).can_read(extension=list(self.extensions)))

    def _read_bytes(self):
        with open(self._input_file_path, 'rb') as file_handle:
            return file_handle.read()

    def read(self):
        return self._read_bytes().decode('utf-8', errors='replace')


class HTMLExtractor(TextExtractor):
    """
    HTML pages with markup, scripts and styles stripped and entities resolved
    """
    extensions = ('html', 'htm')

    def read(self):
        soup = BeautifulSoup(self._read_bytes(), 'html.parser')
        for tag in soup(['script', 'style']):
            tag.decompose()
        return ' '.join(soup.get_text(separator=' ').split())


_EXTRACTORS = {}


def register_extractor(extractor, extensions=None):
    """
    Makes `extractor` responsible for files with the given extensions

    Parameters
    ----------
    extractor : type
        :class:`sidpy.Reader` subclass whose ``read()`` returns text
    extensions : iterable of str, optional
        Extensions without the dot. Defaults to ``extractor.extensions``
    """
    if not issubclass(extractor, Reader):
        raise TypeError('extractors must subclass sidpy.Reader')
    for extension in extensions or extractor.extensions:
        _EXTRACTORS[extension.lstrip('.').lower()] = extractor


register_extractor(TextExtractor)
register_extractor(HTMLExtractor)


def supported_extensions():
    return sorted(_EXTRACTORS)


def extractor_for(file_path):
    """Returns the extractor class for `file_path`, or None"""
    return _EXTRACTORS.get(_extension(file_path))


def extract_text(file_path, verbose=False):
    """
    Extracts the text of one document, dispatching on its extension

    Parameters
    ----------
    file_path : str
        Path of the document (already checked against the sandbox)
    verbose : bool, optional
        Passed to the extractor

    Returns
    -------
    str

    Raises
    ------
    Unsupported
        If no extractor handles the extension
    ExtractionError
        If the file cannot be read
    """
    extractor = extractor_for(file_path)
    if extractor is None:
        raise Unsupported('no text extractor for {}'.format(os.path.basename(file_path)))
    try:
        return extractor(file_path, verbose=verbose).read()
    except ExtractionError:
        raise
    except (OSError, ValueError) as err:
        raise ExtractionError('could not extract text from {}: {}'.format(file_path, err))
