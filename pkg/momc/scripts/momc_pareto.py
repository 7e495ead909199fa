#!/usr/bin/env python3
import argparse
import logging
import sys
from momc import *

EXIT_CONVERGED = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2

EMITTERS = {
    'tikz': lambda bundle, style: emit_tikz(bundle, style),
    'json': lambda bundle, style: emit_json(bundle),
    'csv': lambda bundle, style: emit_csv(bundle),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Approximate the Pareto curve of a multi-objective MDP.',
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument('--model', required=True, help='path to a .momdp.json model document')
    parser.add_argument('--epsilon', default=1e-3, type=float, help='stop once the approximation gap is this small')
    parser.add_argument('--max-queries', default=64, type=int, help='maximum number of scalarized queries')
    parser.add_argument('--vi-delta', default=1e-8, type=float, help='value iteration convergence threshold')
    parser.add_argument('--vi-max-iters', default=1000000, type=int, help='value iteration sweep limit')
    parser.add_argument('--workers', default=1, type=int, help='threads for the initial single-objective queries')
    parser.add_argument('--format', default='json', choices=sorted(EMITTERS), help='output format')
    parser.add_argument('--out', default=None, help='output file; standard output when omitted')
    parser.add_argument('--tikz-style', default=None, help='JSON file overriding TikZ style settings')
    parser.add_argument('--verbose', action='store_true', help='log every query and refinement turn')
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the whole pipeline: load the model document, normalize its objectives, approximate the Pareto curve and
    write it in the requested format.

    :return: 0 when the approximation converged, 2 when a partial result was written, 1 on errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONVERGED if e.code == 0 else EXIT_ERROR

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        doc = ModelDocument.from_file(args.model)
        style = TikzStyle.from_file(args.tikz_style) if args.tikz_style is not None else None
        cfg = EngineConfig(epsilon=args.epsilon, max_queries=args.max_queries, vi_delta=args.vi_delta,
                           vi_max_iters=args.vi_max_iters, workers=args.workers)
        norm = normalize_objectives(doc.model, doc.objectives)
        approx = approximate_pareto(norm, cfg)
        text = EMITTERS[args.format](ExportBundle(approx), style)
    except OSError as e:
        print('error: cannot read {}: {}'.format(e.filename, e.strerror), file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, DivergenceError) as e:
        print('error: {}: {}'.format(args.model, e), file=sys.stderr)
        return EXIT_ERROR

    try:
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, 'w', encoding='utf-8', newline='') as fp:
                fp.write(text)
    except OSError as e:
        print('error: cannot write {}: {}'.format(e.filename, e.strerror), file=sys.stderr)
        return EXIT_ERROR

    if approx.status.is_partial:
        print('partial result: {} (gap {!r}, {} queries)'.format(approx.status.value, approx.gap,
                                                                  len(approx.query_log)), file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_CONVERGED


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
