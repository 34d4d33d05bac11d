"""
`rampcast` console entry point.

Boots Django with config.settings and hands each subcommand to the
matching management command of the ramps app:

    rampcast synth --site amrumbank --n 4464 --seed 7 --out s.csv
    rampcast run --config experiments/amrumbank.cfg

Exit status is 0 on success, 1 on a domain or file error and 2 on a usage
error.
"""

import os
import sys
from typing import List, Optional

SUBCOMMANDS = ('synth', 'transform', 'decompose', 'train', 'predict', 'evaluate', 'entropy', 'run')
PROG = 'rampcast'


def _setup_django() -> None:
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    import django

    django.setup()


def usage() -> str:
    from django.core.management import load_command_class

    lines = [f'usage: {PROG} <subcommand> [options]', '', 'subcommands:']
    for name in SUBCOMMANDS:
        lines.append(f'  {name:<10} {load_command_class("ramps", name).help}')
    lines += ['', f"Run '{PROG} <subcommand> --help' for the options of a subcommand."]
    return '\n'.join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Dispatch one rampcast invocation.

    Args:
        argv: arguments after the program name (default: sys.argv[1:])

    Returns:
        int: process exit status
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    _setup_django()
    from django.core.management import load_command_class

    if not argv:
        print(usage(), file=sys.stderr)
        return 2
    if argv[0] in ('-h', '--help', 'help'):
        print(usage())
        return 0
    name, rest = argv[0], argv[1:]
    if name not in SUBCOMMANDS:
        print(f"{PROG}: unknown subcommand {name!r}", file=sys.stderr)
        print(usage(), file=sys.stderr)
        return 2

    command = load_command_class('ramps', name)
    try:
        command.run_from_argv([PROG, name, *rest])
    except SystemExit as exit_:
        code = exit_.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
