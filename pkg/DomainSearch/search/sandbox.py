"""
The single directory subtree a node indexes and serves.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import os
import posixpath

__all__ = ['SandboxRoot', 'SandboxError', 'OutsideSandbox', 'RootMissing', 'is_encodable']


class SandboxError(OSError):
    pass


class OutsideSandbox(SandboxError):
    pass


class RootMissing(SandboxError):
    pass


def is_encodable(name):
    """False for names the file system handed back undecodable (surrogate escaped)"""
    try:
        name.encode('utf-8')
    except UnicodeEncodeError:
        return False
    return True


class SandboxRoot(object):
    """
    Sandbox directory; every path handed out resolves (symbolic links
    included) inside it.

    Parameters
    ----------
    root : str
        Directory to share
    """

    def __init__(self, root):
        if not isinstance(root, str) or not root:
            raise TypeError('sandbox root must be a non-empty str')
        real = os.path.realpath(os.path.abspath(root))
        if not os.path.isdir(real):
            raise RootMissing('sandbox root {} does not exist or is not a directory'.format(root))
        self.root = real

    def __repr__(self):
        return 'SandboxRoot({!r})'.format(self.root)

    def __eq__(self, other):
        return isinstance(other, SandboxRoot) and other.root == self.root

    def __hash__(self):
        return hash(self.root)

    def contains(self, path):
        """True if `path`, after resolving symbolic links, lies inside the root"""
        real = os.path.realpath(path)
        return real == self.root or real.startswith(self.root + os.sep)

    def resolve(self, rel_path):
        """
        Maps a sandbox-relative path to an absolute, link-free path

        Parameters
        ----------
        rel_path : str
            '/'-separated path relative to the root; a leading '/' refers to
            the root itself, '' and '/' both denote the root

        Returns
        -------
        str

        Raises
        ------
        OutsideSandbox
            If the path has '..' segments, a drive or NUL, or resolves outside
        """
        if '\x00' in rel_path or '\\' in rel_path:
            raise OutsideSandbox('illegal character in {!r}'.format(rel_path))
        parts = [part for part in rel_path.split('/') if part not in ('', '.')]
        if '..' in parts:
            raise OutsideSandbox('{!r} leaves the sandbox'.format(rel_path))
        candidate = os.path.join(self.root, *parts)
        if os.path.splitdrive(candidate)[0] != os.path.splitdrive(self.root)[0]:
            raise OutsideSandbox('{!r} leaves the sandbox'.format(rel_path))
        real = os.path.realpath(candidate)
        if not self.contains(real):
            raise OutsideSandbox('{!r} resolves outside the sandbox'.format(rel_path))
        return real

    def relative(self, path):
        """'/'-separated path of `path` relative to the root"""
        rel = os.path.relpath(os.path.abspath(path), self.root)
        return '' if rel == os.curdir else rel.replace(os.sep, posixpath.sep)

    def walk(self):
        """
        Yields ``(abs_path, rel_path)`` of every regular file under the root in
        sorted order. Directory links are not followed and file links that
        escape the root are skipped.
        """
        for dir_path, dir_names, file_names in os.walk(self.root, followlinks=False):
            dir_names.sort()
            for name in sorted(file_names):
                abs_path = os.path.join(dir_path, name)
                if not self.contains(abs_path) or not os.path.isfile(abs_path):
                    continue
                yield abs_path, self.relative(abs_path)
