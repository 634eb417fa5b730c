"""
Transports a :class:`~DomainSearch.node.protocol.Node` runs on: the abstract
interface, and the UDP implementation used by the daemon. The simulator
provides the other implementation.

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import heapq
import itertools
import logging
import socket
import time
from abc import ABC, abstractmethod

from ..wire import Tag, WireError, decode, encode, MAX_MESSAGE_SIZE

__all__ = ['Transport', 'TimerHandle', 'UdpTransport', 'BindFailed', 'parse_endpoint', 'describe']

logger = logging.getLogger(__name__)


class BindFailed(OSError):
    pass


def parse_endpoint(endpoint):
    """Splits ``'host:port'`` into ``(host, port)``"""
    host, sep, port = endpoint.rpartition(':')
    if not sep or not host or not port.isdigit() or int(port) > 65535:
        raise ValueError('endpoint {!r} is not of the form host:port'.format(endpoint))
    return host, int(port)


def describe(message):
    """Short space-free detail of a message for trace lines"""
    payload = message.payload
    tag = message.tag
    if tag is Tag.QUERY:
        return payload.mode.name.lower()
    if tag is Tag.PING:
        return 'announce' if payload.announce else 'probe'
    if tag is Tag.RESULT:
        return 'dead_end' if payload.dead_end else 'hits={}'.format(len(payload.hits))
    if tag is Tag.FILE_REQ:
        return 'offsets=' + ','.join(str(offset) for offset in payload.offsets)
    if tag is Tag.FILE_CHUNK:
        return 'offset={}'.format(payload.offset)
    if tag is Tag.JOIN_REQ:
        return 'route'
    return ''


class TimerHandle(object):
    """A pending ``call_later`` callback"""

    def __init__(self, due, callback, args):
        self.due = due
        self.callback = callback
        self.args = args
        self.cancelled = False

    def cancel(self):
        self.cancelled = True

    def fire(self):
        if not self.cancelled:
            self.cancelled = True
            self.callback(*self.args)


class Transport(ABC):
    """
    What a node needs from its environment: datagram sends, a clock and
    timers. Incoming datagrams are decoded by the transport and handed to the
    attached node's ``on_message`` (or ``on_decode_error``).
    """
    endpoint = None

    def __init__(self):
        self.node = None

    def attach(self, node):
        self.node = node

    @abstractmethod
    def send(self, endpoint, message):
        """Encodes `message` and sends it to `endpoint`"""

    @abstractmethod
    def now(self):
        """Current time in milliseconds (ticks in the simulator)"""

    @abstractmethod
    def call_later(self, delay_ms, callback, *args):
        """Schedules ``callback(*args)``; returns a handle with ``cancel()``"""

    def observe(self, kind, src, dst, tag, msg_id, detail=''):
        """Records one protocol event"""
        logger.info('event=%s src=%s dst=%s tag=%s msg_id=%s detail=%s',
                    kind, src, dst, Tag(tag).name, msg_id, detail)


class UdpTransport(Transport):
    """
    One UDP socket plus a timer heap, polled by the daemon's loop thread

    Parameters
    ----------
    endpoint : str
        ``host:port`` to bind; port 0 picks a free port
    """

    def __init__(self, endpoint):
        super(UdpTransport, self).__init__()
        host, port = parse_endpoint(endpoint)
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            self.sock.bind((host, port))
        except OSError as err:
            self.sock.close()
            raise BindFailed('cannot bind {}: {}'.format(endpoint, err))
        self.endpoint = '{}:{}'.format(host, self.sock.getsockname()[1])
        self._timers = []
        self._sequence = itertools.count()

    def __repr__(self):
        return 'UdpTransport({})'.format(self.endpoint)

    def now(self):
        return int(time.monotonic() * 1000)

    def send(self, endpoint, message):
        data = encode(message)
        self.observe('SEND', self.node.addr.node, endpoint, message.tag, message.msg_id, describe(message))
        try:
            self.sock.sendto(data, parse_endpoint(endpoint))
        except (OSError, ValueError) as err:
            logger.warning('send to %s failed: %s', endpoint, err)

    def call_later(self, delay_ms, callback, *args):
        handle = TimerHandle(self.now() + delay_ms, callback, args)
        heapq.heappush(self._timers, (handle.due, next(self._sequence), handle))
        return handle

    def next_timer_in(self):
        """Milliseconds until the earliest live timer, or None"""
        while self._timers and self._timers[0][2].cancelled:
            heapq.heappop(self._timers)
        if not self._timers:
            return None
        return max(0, self._timers[0][0] - self.now())

    def run_timers(self):
        now = self.now()
        while self._timers and self._timers[0][0] <= now:
            heapq.heappop(self._timers)[2].fire()

    def poll(self, max_wait_ms=100):
        """
        Waits for one datagram (at most `max_wait_ms` or until the next timer
        is due), delivers it to the attached node, then fires due timers
        """
        wait = self.next_timer_in()
        wait = max_wait_ms if wait is None else min(wait, max_wait_ms)
        self.sock.settimeout(max(wait, 1) / 1000.0)
        try:
            data, _ = self.sock.recvfrom(MAX_MESSAGE_SIZE + 1)
        except socket.timeout:
            data = None
        except OSError as err:
            logger.debug('receive failed: %s', err)
            data = None
        if data is not None:
            self.deliver(data)
        self.run_timers()

    def deliver(self, data):
        try:
            message = decode(data)
        except WireError as err:
            self.node.on_decode_error(err)
            return
        self.observe('DELIVER', message.src.node, self.node.addr.node, message.tag, message.msg_id,
                     describe(message))
        self.node.on_message(message)

    def close(self):
        self.sock.close()
