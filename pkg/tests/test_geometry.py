import unittest
import math
import random
import numpy as np
from momc import *
from momc.geometry import nearest_on_hull, distance_to_closure
from tests.oracles import *

CUBE = [(x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]


def facet_with_normal(hull, normal):
    return [f for f in hull.facets if np.allclose(f.normal, normal, atol=1e-12)][0]


def polygon_area_vector(points) -> np.ndarray:
    pts = np.array(points)
    return sum(np.cross(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))) / 2


class ConvexHull2DTestCase(unittest.TestCase):
    def test_interior_point_is_dropped(self):
        hull = convex_hull([(0, 0), (1, 0), (0, 1), (0.2, 0.2)], 2)
        self.assertFalse(hull.is_degenerate)
        self.assertEqual(hull.vertices, [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)])
        self.assertEqual(len(hull.facets), 3)
        self.assertNotIn((0.2, 0.2), hull.points)

    def test_collinear_boundary_point(self):
        hull = convex_hull([(0, 0), (2, 0), (1, 0), (0, 2)], 2)
        self.assertEqual(hull.vertices, [(0.0, 0.0), (0.0, 2.0), (2.0, 0.0)])
        self.assertIn((1.0, 0.0), hull.points)
        bottom = facet_with_normal(hull, (0.0, -1.0))
        self.assertEqual([hull.points[i] for i in bottom.indices], [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
        self.assertEqual(len(hull.facet_edges(bottom)), 2)

    def test_normals_are_outward_and_l1_normalized(self):
        hull = convex_hull([(0, 0), (1, 0), (0, 1)], 2)
        for facet in hull.facets:
            self.assertAlmostEqual(sum(abs(c) for c in facet.normal), 1.0)
            for p in hull.points:
                self.assertLessEqual(np.dot(facet.normal, p), facet.offset + 1e-12)
        self.assertIn((0.5, 0.5), [tuple(round(c, 12) for c in f.normal) for f in hull.facets])

    def test_degenerate_sets(self):
        single = convex_hull([(1, 0)], 2)
        self.assertTrue(single.is_degenerate)
        self.assertEqual(single.affine_dim, 0)
        segment = convex_hull([(1, 0), (0, 1)], 2)
        self.assertEqual(segment.affine_dim, 1)
        line = convex_hull([(0, 0), (1, 1), (2, 2), (0.5, 0.5)], 2)
        self.assertTrue(line.is_degenerate)
        self.assertEqual(line.affine_dim, 1)
        self.assertEqual(line.outline(), [(0.0, 0.0), (2.0, 2.0)])

    def test_duplicates_are_merged(self):
        self.assertTrue(convex_hull([(1, 0), (1, 0), (1, 1e-13)], 2).is_degenerate)

    def test_wrong_dimension(self):
        with self.assertRaises(ValueError):
            convex_hull([(0, 0, 0)], 2)
        with self.assertRaises(ValueError):
            convex_hull([(0,)], 1)


class ConvexHull3DTestCase(unittest.TestCase):
    def test_cube(self):
        hull = convex_hull(CUBE + [(0.5, 0.5, 0.5)], 3)
        self.assertEqual(len(hull.vertices), 8)
        self.assertEqual(len(hull.facets), 6)
        self.assertTrue(all(len(f.indices) == 4 for f in hull.facets))
        self.assertEqual(len(hull.triangles()), 12)
        self.assertAlmostEqual(hull.volume, 1.0)
        self.assertTrue(np.allclose(sorted(tuple(round(c, 9) for c in f.normal) for f in hull.pareto_facets()),
                                    [(0, 0, 1), (0, 1, 0), (1, 0, 0)]))

    def test_facets_are_counter_clockwise(self):
        hull = convex_hull(FIGURE_POINTS + [(0.0, 0.0, 0.0)], 3)
        for facet in hull.facets:
            polygon = [hull.points[i] for i in facet.indices]
            self.assertGreater(np.dot(polygon_area_vector(polygon), facet.normal), 0.0)
            self.assertEqual(min(facet.indices), facet.indices[0])

    def test_fan_triangulation(self):
        # a square facet starting at its smallest corner fans from the next corner
        hull = convex_hull(CUBE, 3)
        top = facet_with_normal(hull, (0.0, 0.0, 1.0))
        triangles = hull.facet_simplices(top)
        self.assertEqual(len(triangles), 2)
        self.assertTrue(all(t[0] == top.indices[1] for t in triangles))
        self.assertEqual(set(triangles[-1]), {top.indices[1], top.indices[-1], top.indices[0]})

    def test_order_independent(self):
        shuffled = list(FIGURE_POINTS)
        random.Random(3).shuffle(shuffled)
        a, b = convex_hull(FIGURE_POINTS, 3), convex_hull(shuffled, 3)
        self.assertEqual(a.points, b.points)
        self.assertEqual([(f.indices, f.normal) for f in a.facets], [(f.indices, f.normal) for f in b.facets])

    def test_hull_of_hull_is_unchanged(self):
        rng = np.random.default_rng(7)
        clouds = [FIGURE_POINTS, CUBE + [(0.5, 0.5, 0.5)]]
        clouds += [[tuple(float(c) for c in p) for p in rng.random((n, 3))] for n in (4, 10, 40)]
        clouds += [[tuple(float(c) for c in p) for p in rng.random((n, 2))] for n in (3, 10, 40)]
        for points in clouds:
            hull = convex_hull(points, len(points[0]))
            again = convex_hull(hull.points, hull.dim)
            self.assertEqual(again.points, hull.points)
            self.assertEqual(again.vertices, hull.vertices)
            self.assertEqual([f.indices for f in again.facets], [f.indices for f in hull.facets])
            self.assertTrue(np.allclose([f.normal for f in again.facets], [f.normal for f in hull.facets]))
            extreme = convex_hull(hull.vertices, hull.dim)
            self.assertEqual(extreme.vertices, hull.vertices)
            self.assertTrue(np.allclose(sorted(tuple(round(c, 9) for c in f.normal) for f in extreme.facets),
                                        sorted(tuple(round(c, 9) for c in f.normal) for f in hull.facets)))

    def test_planar_points_are_degenerate(self):
        hull = convex_hull([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)], 3)
        self.assertTrue(hull.is_degenerate)
        self.assertEqual(hull.affine_dim, 2)
        self.assertEqual(len(hull.outline()), 4)
        self.assertEqual(hull.outline()[0], (0.0, 0.0, 1.0))

    def test_boundary_points_of_figure(self):
        hull = convex_hull(FIGURE_POINTS, 3)
        self.assertEqual(len(hull.points), 19)
        self.assertNotIn((0.8775510204081638, 0.3673469387755106, 0.0), hull.vertices)
        self.assertIn((0.8775510204081638, 0.3673469387755106, 0.0), hull.points)


class VolumeTestCase(unittest.TestCase):
    def test_triangle(self):
        self.assertAlmostEqual(hull_volume([(0, 0), (1, 0), (0, 1)], 2), 0.5)

    def test_degenerate(self):
        self.assertEqual(hull_volume([(0, 0), (1, 1)], 2), 0.0)


class HalfspaceTestCase(unittest.TestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            Halfspace((0.5, 0.6), 1.0)
        with self.assertRaises(ValueError):
            Halfspace((-0.5, 1.5), 1.0)
        with self.assertRaises(ValueError):
            Halfspace((0.5, 0.5), float('inf'))

    def test_violation(self):
        h = Halfspace((0.5, 0.5), 0.5)
        self.assertAlmostEqual(h.violation((0.8, 0.8)), 0.3)
        self.assertTrue(h.contains((0.4, 0.4)))


class HalfspaceVerticesTestCase(unittest.TestCase):
    def test_cut_square(self):
        vertices = halfspace_vertices([Halfspace((0.5, 0.5), 0.5)], (0, 0), (1, 1), 2)
        self.assertTrue(np.allclose(vertices, [(0, 0), (0, 1), (1, 0)]))

    def test_box_only_constraints(self):
        vertices = halfspace_vertices([Halfspace((1.0, 0.0), 1.0), Halfspace((0.0, 1.0), 1.0)], (0, 0), (1, 1), 2)
        self.assertTrue(np.allclose(vertices, [(0, 0), (0, 1), (1, 0), (1, 1)]))

    def test_simplex(self):
        third = 1.0 / 3.0
        vertices = halfspace_vertices([Halfspace((third, third, 1.0 - 2 * third), third)], (0, 0, 0), (2, 2, 2), 3)
        self.assertEqual(len(vertices), 4)
        self.assertTrue(np.allclose(sorted(vertices), [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]))

    def test_infeasible(self):
        self.assertEqual(halfspace_vertices([Halfspace((1.0, 0.0), -1.0)], (0, 0), (1, 1), 2), [])

    def test_empty_box(self):
        with self.assertRaises(ValueError):
            halfspace_vertices([Halfspace((1.0, 0.0), 1.0)], (0, 2), (1, 1), 2)

    def test_duality(self):
        rng = np.random.default_rng(21)
        for case in range(DUALITY_CASES):
            dim = 2 + case % 2
            halfspaces = [Halfspace(tuple(float(c) for c in rng.dirichlet(np.ones(dim))), float(rng.uniform(0.1, 0.9)))
                          for _ in range(int(rng.integers(1, 9)))]
            lower, upper = np.zeros(dim), np.ones(dim)
            vertices = halfspace_vertices(halfspaces, lower, upper, dim)
            for v in vertices:
                self.assertTrue(all(h.violation(v) <= 1e-6 for h in halfspaces))
                self.assertTrue(np.all(np.asarray(v) >= lower - 1e-6) and np.all(np.asarray(v) <= upper + 1e-6))

            hull = convex_hull(vertices, dim)
            self.assertFalse(hull.is_degenerate)
            self.assertTrue(set(hull.vertices) <= set(vertices))

            for _ in range(20):
                x = rng.uniform(0.0, 1.0, dim)
                slack = [-h.violation(x) for h in halfspaces] + list(x) + list(1.0 - x)
                if min(abs(s) for s in slack) < 1e-6:
                    continue
                self.assertEqual(hull.contains(x), all(s > 0 for s in slack))


class DownwardClosureTestCase(unittest.TestCase):
    def test_segment(self):
        closure = downward_closure([(1, 0), (0, 1)], (-1, -1))
        self.assertEqual(closure.vertices, [(-1.0, -1.0), (-1.0, 1.0), (0.0, 1.0), (1.0, -1.0), (1.0, 0.0)])

    def test_single_point_is_full_dimensional(self):
        closure = downward_closure([(1, 1, 1)], (0, 0, 0))
        self.assertFalse(closure.is_degenerate)
        self.assertAlmostEqual(closure.volume, 1.0)


class ParetoGapTestCase(unittest.TestCase):
    def test_segment_against_corner(self):
        result = pareto_gap([(1.0, 0.0), (0.0, 1.0)], [(0, 0), (1, 0), (0, 1), (1, 1)])
        self.assertAlmostEqual(result.gap, 1 / math.sqrt(2))
        self.assertEqual(result.witness, (1.0, 1.0))
        self.assertTrue(np.allclose(result.suggested_weight, (0.5, 0.5)))

    def test_degenerate_under_set(self):
        gap, witness, weight = pareto_gap(convex_hull([(1.0, 0.0)], 2), [(1.0, 1.0)])
        self.assertAlmostEqual(gap, 1.0)
        self.assertEqual(witness, (1.0, 1.0))
        self.assertTrue(np.allclose(weight, (0.0, 1.0)))

    def test_closed_gap(self):
        result = pareto_gap([(1.0, 0.0), (0.0, 1.0)], [(0, 0), (1, 0), (0, 1), (0.5, 0.5)])
        self.assertLessEqual(result.gap, 1e-9)

    def test_single_objective(self):
        result = pareto_gap([(2.0,)], [(3.0,)])
        self.assertEqual((result.gap, result.suggested_weight), (1.0, (1.0,)))
        self.assertEqual(pareto_gap([(2.0,)], [(2.0,)]).gap, 0.0)

    def test_three_objectives(self):
        result = pareto_gap([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(1, 1, 1), (1, 0, 0)])
        self.assertAlmostEqual(result.gap, 2 / math.sqrt(3))
        self.assertEqual(result.witness, (1.0, 1.0, 1.0))
        self.assertTrue(np.allclose(result.suggested_weight, (1 / 3, 1 / 3, 1 / 3)))

    def test_gap_is_zero_iff_vertices_are_covered(self):
        rng = np.random.default_rng(22)
        for _ in range(40):
            under = [tuple(rng.uniform(0, 1, 2)) for _ in range(3)]
            over = [tuple(rng.uniform(0, 1, 2)) for _ in range(3)]
            result = pareto_gap(under, over)
            covered = all(distance_to_closure(under, v)[0] <= 1e-9 for v in over)
            self.assertEqual(result.gap <= 1e-9, covered)

    def test_nearest_on_hull_inside(self):
        hull = convex_hull(CUBE, 3)
        self.assertEqual(nearest_on_hull(hull, (0.5, 0.5, 0.5))[0], 0.0)
        distance, nearest, _ = nearest_on_hull(hull, (2.0, 0.5, 0.5))
        self.assertAlmostEqual(distance, 1.0)
        self.assertTrue(np.allclose(nearest, (1.0, 0.5, 0.5)))
