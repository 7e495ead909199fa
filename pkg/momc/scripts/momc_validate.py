#!/usr/bin/env python3
import argparse
import sys
from momc import *


def validate_file(path: str) -> List[str]:
    """:return: One message per problem found in the document at `path`; empty when it is valid."""
    try:
        doc = ModelDocument.from_file(path)
    except OSError as e:
        return ['cannot read {}: {}'.format(path, e.strerror)]
    except ModelValidationError as e:
        return ['{}: {}'.format(path, v) for v in e.violations]
    except DocumentError as e:
        return ['{}: {}'.format(path, e)]
    try:
        normalize_objectives(doc.model, doc.objectives)
    except ValueError as e:
        return ['{}: {}'.format(path, e)]
    return []


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description='Check a .momdp.json model document.',
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument('paths', nargs='+', help='model documents to check')
    args = parser.parse_args(argv)

    failed = False
    for path in args.paths:
        problems = validate_file(path)
        for problem in problems:
            print(problem)
        if problems:
            failed = True
        else:
            print('{}: ok'.format(path))
    return 1 if failed else 0


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
