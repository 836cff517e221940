# Graphs, edge coloring (Koenig fast path, Misra-Gries general case), and
# the block-diagonal splitting, including the lattice generators.

import numpy as np
import pytest

from hamsearch.decompose import (
    EdgeColoring,
    InteractionGraph,
    bipartition,
    block_labels,
    color_edges,
    decompose,
    graph_from_matrix,
    honeycomb_lattice,
    laplacian_chain,
    load_graph,
    save_graph,
)
from hamsearch.trotter import exact_term_exponential


def _path_graph(n):
    return InteractionGraph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def _cycle_graph(n):
    edges = [(i, i + 1, 1.0) for i in range(n - 1)] + [(0, n - 1, 1.0)]
    return InteractionGraph(n, tuple(edges))


def _random_bounded_graph(rng, n, degree_cap):
    edges = set()
    degree = [0] * n
    for _ in range(4 * n * degree_cap):
        u, v = (int(x) for x in rng.integers(0, n, 2))
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if (u, v) in edges or degree[u] >= degree_cap or degree[v] >= degree_cap:
            continue
        edges.add((u, v))
        degree[u] += 1
        degree[v] += 1
    return InteractionGraph(n, tuple((u, v, 1.0) for u, v in sorted(edges)))


def _assert_proper(graph, coloring):
    seen = set()
    for k, (u, v, _) in enumerate(graph.edges):
        for vertex in (u, v):
            assert (vertex, coloring.colors[k]) not in seen
            seen.add((vertex, coloring.colors[k]))


class TestInteractionGraph:
    def test_normalizes_and_sorts_edges(self):
        g = InteractionGraph(3, ((2, 0, 1.0), (1, 0, 2.0)))
        assert g.edges == ((0, 1, 2.0), (0, 2, 1.0))
        assert g.max_degree == 2

    def test_rejects_self_loops(self):
        with pytest.raises(ValueError):
            InteractionGraph(2, ((1, 1, 1.0),))

    def test_rejects_parallel_edges(self):
        with pytest.raises(ValueError):
            InteractionGraph(3, ((0, 1, 1.0), (1, 0, 2.0)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            InteractionGraph(2, ((0, 5, 1.0),))


class TestColorEdges:
    def test_path_alternates_two_colors(self):
        coloring = color_edges(_path_graph(5))
        assert coloring.color_count == 2
        assert coloring.colors == (0, 1, 0, 1)

    def test_even_cycle_needs_two_colors(self):
        coloring = color_edges(_cycle_graph(8))
        assert coloring.color_count == 2
        _assert_proper(_cycle_graph(8), coloring)

    def test_odd_cycle_needs_three_colors(self):
        g = _cycle_graph(7)
        coloring = color_edges(g)
        assert coloring.color_count == 3
        _assert_proper(g, coloring)

    @pytest.mark.parametrize("periodic", [False, True])
    def test_honeycomb_three_colors(self, periodic):
        _, g = honeycomb_lattice(3, 4, periodic=periodic)
        assert g.vertex_count == 24
        assert bipartition(g) is not None
        coloring = color_edges(g)
        _assert_proper(g, coloring)
        assert coloring.color_count <= g.max_degree + 1  # <= 4
        assert coloring.color_count == 3  # bipartite fast path hits max degree

    def test_random_bounded_degree_graphs(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            n = int(rng.integers(4, 40))
            cap = int(rng.integers(2, 7))
            g = _random_bounded_graph(rng, n, cap)
            if not g.edges:
                continue
            coloring = color_edges(g)
            _assert_proper(g, coloring)
            assert coloring.color_count <= g.max_degree + 1

    def test_deterministic(self):
        rng = np.random.default_rng(32)
        g = _random_bounded_graph(rng, 30, 5)
        assert color_edges(g).colors == color_edges(g).colors

    def test_empty_edge_set(self):
        g = InteractionGraph(3, ())
        assert color_edges(g).color_count == 0


class TestDecompose:
    def test_ring_splits_into_even_and_odd_projector_terms(self):
        h, g = laplacian_chain(8, periodic=True)
        terms = decompose(h, g)
        assert len(terms) == 2
        for term in terms.terms:
            assert np.max(np.abs(term @ term - 2.0 * term)) < 1e-12
        assert np.max(np.abs(terms.total() - h)) < 1e-12

    def test_open_chain_leaves_boundary_diagonal_term(self):
        h, g = laplacian_chain(6, periodic=False)
        terms = decompose(h, g)
        assert terms.labels[-1] == "diagonal"
        diag = np.real(np.diag(terms.terms[-1]))
        assert diag[0] == 1.0 and diag[-1] == 1.0
        assert np.all(diag[1:-1] == 0.0)
        assert np.max(np.abs(terms.total() - h)) < 1e-12

    def test_diagonal_matrix_gives_single_term(self):
        h = np.diag([1.0, -2.0, 0.5]).astype(complex)
        g = InteractionGraph(3, ())
        terms = decompose(h, g)
        assert len(terms) == 1
        assert terms.labels == ("diagonal",)
        assert np.max(np.abs(terms.terms[0] - h)) == 0.0

    @pytest.mark.parametrize("periodic", [False, True])
    def test_honeycomb_three_projector_terms(self, periodic):
        h, g = honeycomb_lattice(3, 4, periodic=periodic)
        terms = decompose(h, g)
        assert len(terms) == 3  # degree diagonal fully absorbed by the blocks
        for term in terms.terms:
            assert np.max(np.abs(term @ term - 2.0 * term)) < 1e-12
        assert np.max(np.abs(terms.total() - h)) < 1e-12

    def test_rejects_support_mismatch(self):
        h, _ = laplacian_chain(4, periodic=False)
        smaller = InteractionGraph(4, ((0, 1, 1.0), (1, 2, 1.0)))
        with pytest.raises(ValueError, match="support"):
            decompose(h, smaller)

    def test_complex_weights_give_scaled_projector_blocks(self):
        # Each edge block is 2|h| times a projector even for complex h.
        rng = np.random.default_rng(34)
        n = 6
        ring = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]
        h = np.zeros((n, n), dtype=complex)
        for u, v in ring:
            h[u, v] = rng.normal() + 1j * rng.normal()
            h[v, u] = np.conj(h[u, v])
            h[u, u] += abs(h[u, v])
            h[v, v] += abs(h[u, v])
        g = graph_from_matrix(h)
        terms = decompose(h, g)
        assert np.max(np.abs(terms.total() - h)) == 0.0
        for k, term in enumerate(terms.terms):
            for u, v in terms.term_blocks(k):
                block = term[np.ix_([u, v], [u, v])]
                mag = abs(h[u, v])
                assert np.max(np.abs(block @ block - 2.0 * mag * block)) < 1e-14

    def test_class_two_graphs_need_the_extra_color(self):
        # Odd complete graphs and the Petersen graph have chromatic index
        # max_degree + 1; the bound still holds.
        k5 = InteractionGraph(5, tuple((i, j, 1.0) for i in range(5) for j in range(i + 1, 5)))
        coloring = color_edges(k5)
        _assert_proper(k5, coloring)
        assert coloring.color_count == 5  # max_degree + 1
        petersen = InteractionGraph(
            10,
            tuple(
                (u, v, 1.0)
                for u, v in [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6),
                             (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (6, 9), (6, 8), (5, 8)]
            ),
        )
        coloring = color_edges(petersen)
        _assert_proper(petersen, coloring)
        assert coloring.color_count == 4

    def test_random_hermitian_reconstruction(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            n = int(rng.integers(3, 12))
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            h = m + m.conj().T
            h[np.abs(h) < 1.0] = 0.0  # sparsify
            np.fill_diagonal(h, rng.normal(size=n))
            h = 0.5 * (h + h.conj().T)
            g = graph_from_matrix(h)
            terms = decompose(h, g)
            assert np.max(np.abs(terms.total() - h)) < 1e-12

    def test_block_exponential_of_color_terms_has_no_fill_in(self):
        h, g = honeycomb_lattice(2, 3)
        terms = decompose(h, g)
        for k in range(len(terms)):
            blocks = terms.term_blocks(k)
            u = exact_term_exponential(terms.terms[k], 1.3, blocks=blocks)
            mask = np.ones(u.shape, dtype=bool)
            np.fill_diagonal(mask, False)
            for i, j in blocks:
                mask[i, j] = mask[j, i] = False
            assert np.max(np.abs(u[mask])) < 1e-14


class TestLaplacianChain:
    def test_rejects_periodic_two_sites(self):
        with pytest.raises(ValueError, match="multigraph"):
            laplacian_chain(2, periodic=True)

    def test_rejects_single_site(self):
        with pytest.raises(ValueError):
            laplacian_chain(1)

    @pytest.mark.parametrize("length", [4, 8, 16, 64])
    def test_ring_spectrum_law(self, length):
        h, _ = laplacian_chain(length, periodic=True)
        observed = np.sort(np.linalg.eigvalsh(h))
        expected = np.sort(4.0 * np.sin(np.pi * np.arange(length) / length) ** 2)
        assert np.max(np.abs(observed - expected)) < 1e-10

    def test_split_terms_have_binary_spectrum(self):
        h, g = laplacian_chain(4, periodic=True)
        terms = decompose(h, g)
        for term in terms.terms:
            values = np.linalg.eigvalsh(term)
            assert np.all(np.min(np.abs(values[:, None] - np.array([0.0, 2.0])), axis=1) < 1e-12)


class TestHoneycomb:
    def test_torus_is_three_regular(self):
        _, g = honeycomb_lattice(3, 4, periodic=True)
        degree = np.zeros(g.vertex_count, dtype=int)
        for u, v, _ in g.edges:
            degree[u] += 1
            degree[v] += 1
        assert np.all(degree == 3)

    def test_open_patch_has_degree_three_interior(self):
        _, g = honeycomb_lattice(3, 4, periodic=False)
        degree = np.zeros(g.vertex_count, dtype=int)
        for u, v, _ in g.edges:
            degree[u] += 1
            degree[v] += 1
        assert degree.max() == 3
        assert np.count_nonzero(degree == 3) > 0

    def test_rejects_too_small_torus(self):
        with pytest.raises(ValueError):
            honeycomb_lattice(1, 4, periodic=True)


class TestBlockLabels:
    def test_chain_parity_rule(self):
        # Edge (i, i+1) lands in color i mod 2, so "odd" blocks start at odd
        # left-vertex indices: the last bit of the label addresses the term.
        g = _path_graph(8)
        coloring = color_edges(g)
        table = block_labels(g, coloring)
        for color, pairs in table.items():
            for u, _ in pairs:
                assert u % 2 == color

    def test_single_edge(self):
        g = InteractionGraph(2, ((0, 1, 1.0),))
        table = block_labels(g, color_edges(g))
        assert table == {0: [(0, 1)]}

    def test_honeycomb_vertex_appears_once_per_color(self):
        _, g = honeycomb_lattice(3, 4, periodic=True)
        coloring = color_edges(g)
        table = block_labels(g, coloring)
        per_vertex = {}
        for color, pairs in table.items():
            seen = set()
            for u, v in pairs:
                assert u not in seen and v not in seen
                seen.update((u, v))
                per_vertex[u] = per_vertex.get(u, 0) + 1
                per_vertex[v] = per_vertex.get(v, 0) + 1
        assert max(per_vertex.values()) <= 3


class TestGraphJson:
    def test_round_trip(self, tmp_path):
        _, g = honeycomb_lattice(2, 2)
        path = tmp_path / "graph.json"
        save_graph(path, g)
        assert load_graph(path) == g

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"edges": [[0, 1, 1.0]]}')
        with pytest.raises(ValueError):
            load_graph(path)


class TestEdgeColoringType:
    def test_rejects_negative_colors(self):
        with pytest.raises(ValueError):
            EdgeColoring(colors=(-1,), color_count=1)
