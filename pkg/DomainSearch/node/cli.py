"""
``sp2p`` command line

::

    sp2p start --config node.yaml            (alias: join)
    sp2p query "Windows 10@all.education" --via 127.0.0.1:4600 [--and] [--json]
    sp2p ls 127.0.0.1:4600 /docs
    sp2p fetch 127.0.0.1:4600 docs/paging.txt -o paging.txt
    sp2p reindex --config node.yaml
    sp2p sim --config scenario.yaml --trace run.trace

Created on Oct 18, 2026
"""

from __future__ import division, print_function, absolute_import, unicode_literals

import argparse
import json
import logging
import os
import signal
import sys
import threading

from ..domain import DomainPathError
from ..files import ChecksumMismatch, NotFound, Timeout, TooManyRetries
from ..query import NoResults, NotJoined, QueryError, format_hits, parse_query, run_query
from ..search import OutsideSandbox, SandboxError, load_or_build
from ..sim import (ConfigInvalid, NotQuiescent, at_most_once_serve, assert_trace, build_network,
                   load_sim_config, no_loop, servers, write_trace)
from ..overlay import JoinError
from .daemon import ENV_ENDPOINT, Client, ConfigError, JoinFailed, load_node_config, start
from .settings import NodeSettings
from .transport import BindFailed

__all__ = ['main', 'cli_dispatch', 'build_parser', 'EXIT_CODES']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NETWORK = 4
EXIT_NO_RESULTS = 5
EXIT_NOT_FOUND = 6
EXIT_INTEGRITY = 7

# first match wins
EXIT_CODES = (
    (QueryError, EXIT_USAGE),
    (DomainPathError, EXIT_USAGE),
    (ConfigError, EXIT_CONFIG),
    (ConfigInvalid, EXIT_CONFIG),
    (NoResults, EXIT_NO_RESULTS),
    (OutsideSandbox, EXIT_NOT_FOUND),
    (NotFound, EXIT_NOT_FOUND),
    (SandboxError, EXIT_NOT_FOUND),
    (ChecksumMismatch, EXIT_INTEGRITY),
    (TooManyRetries, EXIT_INTEGRITY),
    (BindFailed, EXIT_NETWORK),
    (JoinFailed, EXIT_NETWORK),
    (JoinError, EXIT_NETWORK),
    (NotJoined, EXIT_NETWORK),
    (Timeout, EXIT_NETWORK),
    (TimeoutError, EXIT_NETWORK),
)


def _exit_code(error):
    for error_class, code in EXIT_CODES:
        if isinstance(error, error_class):
            return code
    return EXIT_UNEXPECTED


def _via(args):
    via = args.via or os.environ.get(ENV_ENDPOINT)
    if not via:
        raise QueryError('no node to ask: pass --via host:port or set {}'.format(ENV_ENDPOINT))
    return via


def _client_settings(args):
    return NodeSettings(deadline_ms=getattr(args, 'timeout_ms', 2000))


# ### subcommands ###

def cmd_start(args):
    config = load_node_config(args.config)
    daemon = start(config, verbose=args.verbose > 0)
    print('node {} serving {} at {}'.format(config.node_id, config.domain, daemon.endpoint))
    stopped = threading.Event()
    if hasattr(signal, 'SIGHUP'):
        signal.signal(signal.SIGHUP, lambda *_: daemon.reindex())
    signal.signal(signal.SIGTERM, lambda *_: stopped.set())
    try:
        while not stopped.wait(0.5):
            pass
    except KeyboardInterrupt:
        pass
    finally:
        daemon.stop()
    return EXIT_OK


def cmd_query(args):
    query = parse_query(args.query, match_all=args.match_all, k=args.k)
    with Client(args.bind, settings=_client_settings(args)) as client:
        try:
            hits = run_query(client.node, query, client.drive, via=_via(args))
        except NoResults as err:
            if args.json:
                print(json.dumps({'query': args.query, 'hits': [], 'dead_end': err.dead_end}, indent=2))
            else:
                print(str(err), file=sys.stderr)
            return EXIT_NO_RESULTS
    if args.json:
        print(json.dumps({'query': args.query, 'hits': [hit.as_dict() for hit in hits], 'dead_end': False},
                         indent=2))
    else:
        print(format_hits(hits))
    return EXIT_OK


def cmd_ls(args):
    with Client(args.bind) as client:
        entries = client.list_dir(args.peer, args.path.strip('/'))
    if args.json:
        print(json.dumps([{'name': entry.name, 'kind': entry.kind.name.lower(), 'size': entry.size}
                          for entry in entries], indent=2))
        return EXIT_OK
    for entry in entries:
        if entry.kind.name == 'DIR':
            print('d {:>12}  {}/'.format('-', entry.name))
        else:
            print('f {:>12}  {}'.format(entry.size, entry.name))
    return EXIT_OK


def cmd_fetch(args):
    with Client(args.bind) as client:
        data = client.fetch(args.peer, args.path)
    output = args.output or os.path.basename(args.path.rstrip('/')) or 'fetched'
    with open(output, 'wb') as file_handle:
        file_handle.write(data)
    print('saved {} bytes to {}'.format(len(data), output))
    return EXIT_OK


def cmd_reindex(args):
    config = load_node_config(args.config)
    index = load_or_build(config.sandbox, config.index_cache, rebuild=True, verbose=args.verbose > 0)
    print('indexed {} documents under {}'.format(index.doc_count, index.root))
    return EXIT_OK


def cmd_sim(args):
    config = load_sim_config(args.config)
    network = build_network(config)
    for node_id in config.kills:
        network.kill_node(node_id)
    network.run_until_quiescent()
    for spec in config.queries:
        handle = network.inject_query(spec.origin, spec.input, match_all=spec.match_all)
        network.run_until_quiescent()
        state = handle.state
        print('{} -> {} responders, {} hits{}'.format(spec.input, len(state.responders), len(state.hits),
                                                      ' (dead end)' if state.dead_end else ''))
        for hit in state.ranked():
            print('  {:>10.6f}  {}  {}'.format(hit.score_micros / 1e6, hit.responder.node, hit.path))
        logger.debug('query %s served by %s', state.msg_id, servers(network.trace, state.msg_id))
    assert_trace(network.trace, no_loop, at_most_once_serve)
    if args.trace:
        write_trace(network.trace, args.trace)
        print('wrote {} trace events to {}'.format(len(network.trace), args.trace))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='sp2p', description='Domain-scoped peer-to-peer document search')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v info, -vv debug logging')
    sub = parser.add_subparsers(dest='cmd', required=True)

    for name in ('start', 'join'):
        s = sub.add_parser(name, help='run a node daemon')
        s.add_argument('--config', required=True, help='node YAML configuration')
        s.set_defaults(func=cmd_start)

    q = sub.add_parser('query', help='search a domain')
    q.add_argument('query', help='"keywords@domain"')
    q.add_argument('--via', help='node endpoint to ask (default ${})'.format(ENV_ENDPOINT))
    q.add_argument('--and', dest='match_all', action='store_true', help='require every keyword')
    q.add_argument('--timeout-ms', type=int, default=2000, help='aggregation deadline')
    q.add_argument('-k', type=int, default=10, help='hits per responder')
    q.add_argument('--json', action='store_true', help='machine-readable output')
    q.add_argument('--bind', default='127.0.0.1:0', help='local endpoint for replies')
    q.set_defaults(func=cmd_query)

    ls = sub.add_parser('ls', help='list a directory shared by a node')
    ls.add_argument('peer', help='node endpoint')
    ls.add_argument('path', nargs='?', default='/', help='directory inside its sandbox')
    ls.add_argument('--json', action='store_true')
    ls.add_argument('--bind', default='127.0.0.1:0')
    ls.set_defaults(func=cmd_ls)

    f = sub.add_parser('fetch', help='download a shared file')
    f.add_argument('peer', help='node endpoint')
    f.add_argument('path', help='file inside its sandbox')
    f.add_argument('-o', '--output', help='local file (default: the basename)')
    f.add_argument('--bind', default='127.0.0.1:0')
    f.set_defaults(func=cmd_fetch)

    r = sub.add_parser('reindex', help='rebuild the index cache of a node')
    r.add_argument('--config', required=True)
    r.set_defaults(func=cmd_reindex)

    m = sub.add_parser('sim', help='run a simulated scenario')
    m.add_argument('--config', required=True, help='scenario YAML')
    m.add_argument('--trace', help='write the event trace here')
    m.set_defaults(func=cmd_sim)
    return parser


def cli_dispatch(argv):
    """
    Parses `argv` and runs the subcommand

    Returns
    -------
    int
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO,
                            format='%(asctime)s %(levelname)s %(name)s %(message)s')
    try:
        return args.func(args)
    except NotQuiescent as err:
        print('sp2p: simulation did not settle: {}'.format(err), file=sys.stderr)
        return EXIT_UNEXPECTED
    except Exception as err:
        code = _exit_code(err)
        if code == EXIT_UNEXPECTED:
            logger.exception('unexpected failure')
        print('sp2p: {}'.format(err), file=sys.stderr)
        if code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        return code


def main():
    sys.exit(cli_dispatch(sys.argv[1:]))
