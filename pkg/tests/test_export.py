import unittest
import json
import os
import re
import tempfile
import numpy as np
from momc import *
from momc.utilities import lex_sorted_unique
from tests.oracles import *

COORDINATE = re.compile(r'\(([-0-9.e]+), ([-0-9.e]+)(?:, ([-0-9.e]+))?\)')


def bundle_of(points, k=3) -> ExportBundle:
    approx = ParetoApproximation(k, [1.0] * k, ['o{}'.format(i) for i in range(k)], 1e-3)
    for p in points:
        approx.add_point(p)
    return ExportBundle(approx)


def fills(tikz: str) -> List[List[PointK]]:
    return [[tuple(float(c) for c in m if c) for m in COORDINATE.findall(line)]
            for line in tikz.splitlines() if line.startswith('\\path[fill')]


def same_points(a, b) -> bool:
    return len(a) == len(b) and all(any(np.allclose(p, q, atol=1e-6) for q in b) for p in a)


class TikzTestCase(unittest.TestCase):
    def setUp(self):
        self.tikz = emit_tikz(bundle_of(FIGURE_POINTS))

    def test_header(self):
        lines = self.tikz.splitlines()
        self.assertEqual(lines[0], '\\begin{tikzpicture}[scale=0.3,x = {(-4.499513cm,-1.834018cm)}, '
                                   'y = {(0cm,6.577848cm)},z = {(2.304853cm,-0.661467cm)},font=\\scriptsize]')
        self.assertEqual(lines[1], '\\tikzstyle{every node}+=[font=\\tiny]')
        self.assertEqual(lines[-1], '\\end{tikzpicture}')
        self.assertTrue(self.tikz.endswith('\n'))

    def test_axes(self):
        lines = self.tikz.splitlines()
        self.assertTrue(lines[2].startswith("\\draw[-latex'] (0,0,0) -- (0,0,"))
        self.assertTrue(lines[4].startswith("\\draw[-latex'] (0,0,0) -- ("))
        self.assertIn('node[above, inner sep=1pt] {0.5};', self.tikz)
        self.assertIn('node[pos=1, above] {$z$};', self.tikz)

    def test_fills(self):
        paths = fills(self.tikz)
        self.assertGreater(len(paths), 0)
        self.assertTrue(all(len(p) == 3 for p in paths))
        self.assertTrue(all('opacity=0.3, color=gray!40' in line
                            for line in self.tikz.splitlines() if line.startswith('\\path[fill')))
        coordinates = {p for path in paths for p in path}
        self.assertTrue(same_points(lex_sorted_unique(coordinates, 1e-6), FIGURE_POINTS))
        self.assertTrue(any(same_points(path, FIGURE_FIRST_TRIANGLE) for path in paths))

    def test_edges_follow_fills(self):
        lines = self.tikz.splitlines()
        kinds = [line.split('[')[0] for line in lines if line.startswith('\\path[fill') or
                 line.startswith('\\draw[color=gray]')]
        self.assertEqual(kinds, sorted(kinds, key=lambda kind: kind != '\\path'))
        self.assertIn('\\draw[color=gray]', self.tikz)

    def test_deterministic(self):
        shuffled = list(reversed(FIGURE_POINTS))
        self.assertEqual(emit_tikz(bundle_of(shuffled)), self.tikz)

    def test_two_objectives(self):
        tikz = emit_tikz(bundle_of([(1.0, 0.0), (0.0, 1.0), (0.8, 0.8)], k=2))
        self.assertEqual(len(fills(tikz)), 1)
        self.assertEqual(len(fills(tikz)[0]), 3)
        self.assertTrue(tikz.splitlines()[0].startswith('\\begin{tikzpicture}[scale=0.3,font'))

    def test_coordinates_read_back_exactly(self):
        points = [(1.0, 0.0), (0.0, 1.0), (0.1 + 0.2, 0.8)]
        tikz = emit_tikz(bundle_of(points, k=2))
        self.assertIn('(0.30000000000000004, 0.8)', tikz)
        self.assertEqual(sorted(fills(tikz)[0]), sorted(points))

    def test_degenerate_set(self):
        tikz = emit_tikz(bundle_of([(1.0, 0.0), (0.0, 1.0)], k=2))
        self.assertIn('% degenerate under-approximation: affine dimension 1', tikz)
        self.assertIn('\\draw[color=gray] (0.0, 1.0) -- (1.0, 0.0);', tikz)
        self.assertEqual(fills(tikz), [])

    def test_single_objective_is_rejected(self):
        with self.assertRaises(ValueError) as cm:
            emit_tikz(bundle_of([(1.0,)], k=1))
        self.assertIn('csv', str(cm.exception))

    def test_custom_style(self):
        style = TikzStyle(opacity=0.5, color='blue', axis_labels=('a', 'b', 'c'))
        tikz = emit_tikz(bundle_of(FIGURE_POINTS), style)
        self.assertIn('opacity=0.5, color=blue', tikz)
        self.assertIn('{c};', tikz)


class TikzStyleTestCase(unittest.TestCase):
    def write(self, data) -> str:
        path = os.path.join(self.tmpdir.name, 'style.json')
        with open(path, 'w') as fp:
            json.dump(data, fp)
        return path

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_from_file(self):
        style = TikzStyle.from_file(self.write({'opacity': 0.5, 'tick_step': 1.0}))
        self.assertEqual((style.opacity, style.tick_step, style.color), (0.5, 1.0, 'gray!40'))

    def test_unknown_key(self):
        with self.assertRaises(ValueError):
            TikzStyle.from_file(self.write({'opacity': 0.5, 'colour': 'red'}))

    def test_invalid_value(self):
        with self.assertRaises(ValueError):
            TikzStyle.from_file(self.write({'opacity': 2.0}))


class JsonExportTestCase(unittest.TestCase):
    def test_tradeoff(self):
        text = emit_json(ExportBundle(approximate_pareto(m1_norm())))
        doc = json.loads(text)
        self.assertEqual(doc['format_version'], 1)
        self.assertEqual(doc['status'], 'converged')
        self.assertLessEqual(doc['gap'], 1e-3)
        self.assertEqual(doc['objectives'], [{'name': 'reward-max(r1)', 'sign': 1}, {'name': 'reward-max(r2)', 'sign': 1}])
        self.assertEqual(len(doc['query_log']), 3)

    def test_reemit_is_identical(self):
        text = emit_json(ExportBundle(approximate_pareto(m1_norm())))
        self.assertEqual(emit_json(parse_json_export(text)), text)

    def test_independent_runs_are_byte_identical(self):
        docs = random_corpus(81, count=CORPUS_SIZE // 10, num_states=5, kinds=['prob-reach-min', 'reward-max'])
        docs += random_corpus(82, count=CORPUS_SIZE // 10, num_states=4, num_objectives=3)
        for doc in docs:
            cfg = EngineConfig(epsilon=1e-2)
            first = ExportBundle(approximate_pareto(normalized(doc), cfg))
            second = ExportBundle(approximate_pareto(normalized(doc), cfg))
            self.assertEqual(emit_json(first), emit_json(second))
            self.assertEqual(emit_csv(first), emit_csv(second))

    def test_budget_status(self):
        text = emit_json(ExportBundle(approximate_pareto(m1_norm(), EngineConfig(max_queries=2))))
        self.assertEqual(json.loads(text)['status'], 'query-budget-exhausted')

    def test_unfinished_gap_is_null(self):
        text = emit_json(ExportBundle(approximate_pareto(m1_norm(), EngineConfig(vi_max_iters=1))))
        self.assertIsNone(json.loads(text)['gap'])
        self.assertEqual(parse_json_export(text).approximation.gap, float('inf'))

    def test_bundle_names_override(self):
        text = emit_json(ExportBundle(approximate_pareto(m1_norm()), axis_names=['time', 'cost']))
        self.assertEqual([o['name'] for o in json.loads(text)['objectives']], ['time', 'cost'])

    def test_rejects_other_documents(self):
        with self.assertRaises(ValueError):
            parse_json_export('{"format_version": 1}')


class CsvExportTestCase(unittest.TestCase):
    def test_tradeoff(self):
        text = emit_csv(ExportBundle(approximate_pareto(m1_norm())))
        rows = text.split('\r\n')
        self.assertEqual(rows[0], 'reward-max(r1),reward-max(r2)')
        self.assertEqual(sorted(rows[1:3]), ['0.0,1.0', '1.0,0.0'])
        self.assertEqual(rows[3:], [''])

    def test_single_objective(self):
        approx = ParetoApproximation(1, [-1.0], ['reward-min(cost)'], 1e-3)
        approx.add_point((-2.5,))
        self.assertEqual(emit_csv(ExportBundle(approx)), 'reward-min(cost)\r\n2.5\r\n')

    def test_quoting(self):
        bundle = bundle_of([(1.0, 0.0)], k=2)
        text = emit_csv(ExportBundle(bundle.approximation, axis_names=['a,b', 'c']))
        self.assertTrue(text.startswith('"a,b",c\r\n'))
