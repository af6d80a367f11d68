#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "finrad/combinatorics.hpp"
#include "finrad/geometry.hpp"
#include "finrad/linalg.hpp"
#include "finrad/radon.hpp"
#include "finrad/rational.hpp"

namespace finrad {

/// Raised when an operation requiring an admissible complex is given an
/// inadmissible one.
struct InadmissibleComplexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when block data cannot come from any point function on the
/// complex (the overdetermination check fails).
struct InconsistentDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Over F_2 every line is an unordered pair of points, so the canonical
/// line order is the lexicographic order of pairs (i, j), i < j, and line
/// ids admit a closed form.
inline int line_count(const GeometrySpace& s) {
    if (s.q != 2) throw std::invalid_argument("line_count: line complexes require q = 2");
    const std::int64_t p = s.point_count;
    return static_cast<int>(p * (p - 1) / 2);
}

inline int line_id(const GeometrySpace& s, int i, int j) {
    const int P = static_cast<int>(s.point_count);
    if (s.q != 2) throw std::invalid_argument("line_id: requires q = 2");
    if (i < 0 || j <= i || j >= P) throw std::invalid_argument("line_id: endpoints must satisfy 0 <= i < j < 2^n");
    return i * (P - 1) - i * (i - 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> line_endpoints(const GeometrySpace& s, int id) {
    const int P = static_cast<int>(s.point_count);
    if (s.q != 2) throw std::invalid_argument("line_endpoints: requires q = 2");
    if (id < 0 || id >= line_count(s)) throw std::invalid_argument("line_endpoints: line id out of range");
    int i = 0;
    while (id >= P - 1 - i) {
        id -= P - 1 - i;
        ++i;
    }
    return {i, i + 1 + id};
}

/// A collection of 2^n lines in F_2^n, as sorted canonical line ids. The
/// cardinality matches the point count, so the restricted transform is a
/// square system.
struct LineComplex {
    GeometrySpace space;
    std::vector<int> lines;
};

inline LineComplex make_line_complex(const GeometrySpace& s, std::vector<int> lines) {
    const int L = line_count(s);  // also enforces q = 2
    if (static_cast<std::int64_t>(lines.size()) != s.point_count)
        throw std::invalid_argument("make_line_complex: a complex has exactly 2^n lines");
    std::sort(lines.begin(), lines.end());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i] < 0 || lines[i] >= L)
            throw std::invalid_argument("make_line_complex: line id out of range");
        if (i > 0 && lines[i] == lines[i - 1])
            throw std::invalid_argument("make_line_complex: duplicate line id");
    }
    return LineComplex{s, std::move(lines)};
}

namespace detail {

/// Reusable union-find state for the streaming classifier.
struct ClassifyScratch {
    std::vector<int> parent;
    std::vector<std::uint8_t> parity;  // parity of the edge to the parent
    std::vector<int> comp_size;
    std::vector<int> comp_edges;
    std::vector<char> odd_cycle;  // component contains an odd cycle

    void reset(int vertex_count) {
        parent.resize(static_cast<std::size_t>(vertex_count));
        parity.assign(static_cast<std::size_t>(vertex_count), 0);
        comp_size.assign(static_cast<std::size_t>(vertex_count), 1);
        comp_edges.assign(static_cast<std::size_t>(vertex_count), 0);
        odd_cycle.assign(static_cast<std::size_t>(vertex_count), 0);
        for (int v = 0; v < vertex_count; ++v) parent[static_cast<std::size_t>(v)] = v;
    }
};

struct ClassifyFlags {
    int omitted_points = 0;
    int isolated_lines = 0;  // components that are a single edge
    bool isolated_tree = false;
    bool even_cycle = false;  // some component with a cycle is bipartite
    bool admissible = false;
};

/// Streams the edge list through a parity union-find and reads off the
/// component census. Admissibility needs every component to be spanning
/// free of the three obstructions: no skipped vertex, no tree component,
/// and no bipartite component with a cycle. For a square system (edge
/// count equal to vertex count) the last clause is equivalent to the
/// presence of an even cycle: once no vertex is omitted and no component
/// is a tree, every component is forced to be exactly unicyclic.
inline ClassifyFlags classify_edges(const std::pair<int, int>* edges, int edge_count, int vertex_count,
                                    ClassifyScratch& ws) {
    ws.reset(vertex_count);
    auto find = [&ws](int v, int& par) {
        int p = 0;
        while (ws.parent[static_cast<std::size_t>(v)] != v) {
            p ^= ws.parity[static_cast<std::size_t>(v)];
            v = ws.parent[static_cast<std::size_t>(v)];
        }
        par = p;
        return v;
    };
    for (int e = 0; e < edge_count; ++e) {
        int pu = 0, pv = 0;
        int ru = find(edges[e].first, pu);
        int rv = find(edges[e].second, pv);
        if (ru == rv) {
            ++ws.comp_edges[static_cast<std::size_t>(ru)];
            if (pu == pv) ws.odd_cycle[static_cast<std::size_t>(ru)] = 1;
        } else {
            if (ws.comp_size[static_cast<std::size_t>(ru)] < ws.comp_size[static_cast<std::size_t>(rv)])
                std::swap(ru, rv), std::swap(pu, pv);
            ws.parent[static_cast<std::size_t>(rv)] = ru;
            ws.parity[static_cast<std::size_t>(rv)] = static_cast<std::uint8_t>(pu ^ pv ^ 1);
            ws.comp_size[static_cast<std::size_t>(ru)] += ws.comp_size[static_cast<std::size_t>(rv)];
            ws.comp_edges[static_cast<std::size_t>(ru)] += ws.comp_edges[static_cast<std::size_t>(rv)] + 1;
            ws.odd_cycle[static_cast<std::size_t>(ru)] =
                static_cast<char>(ws.odd_cycle[static_cast<std::size_t>(ru)] | ws.odd_cycle[static_cast<std::size_t>(rv)]);
        }
    }
    ClassifyFlags flags;
    for (int v = 0; v < vertex_count; ++v) {
        if (ws.parent[static_cast<std::size_t>(v)] != v) continue;
        const int s = ws.comp_size[static_cast<std::size_t>(v)];
        const int e = ws.comp_edges[static_cast<std::size_t>(v)];
        if (s == 1 && e == 0) {
            ++flags.omitted_points;
        } else if (e == s - 1) {
            flags.isolated_tree = true;
            if (s == 2) ++flags.isolated_lines;
        } else if (!ws.odd_cycle[static_cast<std::size_t>(v)]) {
            flags.even_cycle = true;
        }
    }
    flags.admissible = flags.omitted_points == 0 && !flags.isolated_tree && !flags.even_cycle;
    return flags;
}

}  // namespace detail

/// A connected component of the complex graph.
struct GraphComponent {
    std::vector<int> vertices;        // ascending point ids
    std::vector<int> edge_positions;  // ascending positions into LineComplex::lines
    bool is_tree = false;             // at least one edge, acyclic
    bool bipartite = true;
    std::optional<std::vector<int>> unique_cycle;  // when exactly one cycle, normalized
};

/// The complex viewed as a graph on all 2^n points, with one edge per
/// line. Components are listed by smallest vertex; the coloring is the
/// breadth-first 2-coloring attempt (valid on bipartite components).
struct ComplexGraph {
    int point_count = 0;
    std::vector<std::pair<int, int>> endpoints;  // per line, complex order
    std::vector<GraphComponent> components;
    std::vector<signed char> color;
};

namespace detail {

/// Normalizes a cycle vertex sequence: start at the smallest vertex and
/// step first toward its smaller cycle neighbor.
inline std::vector<int> normalize_cycle(const std::vector<int>& cycle) {
    const std::size_t m = cycle.size();
    std::size_t start = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (cycle[i] < cycle[start]) start = i;
    const int left = cycle[(start + m - 1) % m];
    const int right = cycle[(start + 1) % m];
    std::vector<int> out;
    out.reserve(m);
    const bool forward = right < left;
    for (std::size_t k = 0; k < m; ++k)
        out.push_back(forward ? cycle[(start + k) % m] : cycle[(start + m - k) % m]);
    return out;
}

}  // namespace detail

inline ComplexGraph build_graph(const LineComplex& c) {
    const int P = static_cast<int>(c.space.point_count);
    ComplexGraph g;
    g.point_count = P;
    g.endpoints.reserve(c.lines.size());
    for (int id : c.lines) g.endpoints.push_back(line_endpoints(c.space, id));

    // Adjacency in canonical order: line positions ascending, which is
    // line-id ascending because the complex is sorted.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(P));  // (neighbor, position)
    for (int pos = 0; pos < static_cast<int>(g.endpoints.size()); ++pos) {
        const auto [u, v] = g.endpoints[static_cast<std::size_t>(pos)];
        adj[static_cast<std::size_t>(u)].emplace_back(v, pos);
        adj[static_cast<std::size_t>(v)].emplace_back(u, pos);
    }

    g.color.assign(static_cast<std::size_t>(P), -1);
    std::vector<char> edge_seen(g.endpoints.size(), 0);
    for (int root = 0; root < P; ++root) {
        if (g.color[static_cast<std::size_t>(root)] != -1) continue;
        GraphComponent comp;
        std::deque<int> queue{root};
        g.color[static_cast<std::size_t>(root)] = 0;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            comp.vertices.push_back(v);
            for (const auto& [w, pos] : adj[static_cast<std::size_t>(v)]) {
                if (!edge_seen[static_cast<std::size_t>(pos)]) {
                    edge_seen[static_cast<std::size_t>(pos)] = 1;
                    comp.edge_positions.push_back(pos);
                }
                if (g.color[static_cast<std::size_t>(w)] == -1) {
                    g.color[static_cast<std::size_t>(w)] =
                        static_cast<signed char>(1 - g.color[static_cast<std::size_t>(v)]);
                    queue.push_back(w);
                } else if (g.color[static_cast<std::size_t>(w)] == g.color[static_cast<std::size_t>(v)]) {
                    comp.bipartite = false;
                }
            }
        }
        std::sort(comp.vertices.begin(), comp.vertices.end());
        std::sort(comp.edge_positions.begin(), comp.edge_positions.end());
        const int V = static_cast<int>(comp.vertices.size());
        const int E = static_cast<int>(comp.edge_positions.size());
        comp.is_tree = E == V - 1 && E >= 1;
        if (E == V) {
            // Exactly one cycle: strip leaves, walk what remains.
            std::vector<int> degree(static_cast<std::size_t>(P), 0);
            std::vector<char> alive(static_cast<std::size_t>(P), 0);
            for (int v : comp.vertices) alive[static_cast<std::size_t>(v)] = 1;
            for (int pos : comp.edge_positions) {
                ++degree[static_cast<std::size_t>(g.endpoints[static_cast<std::size_t>(pos)].first)];
                ++degree[static_cast<std::size_t>(g.endpoints[static_cast<std::size_t>(pos)].second)];
            }
            std::deque<int> leaves;
            for (int v : comp.vertices)
                if (degree[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);
            while (!leaves.empty()) {
                const int v = leaves.front();
                leaves.pop_front();
                alive[static_cast<std::size_t>(v)] = 0;
                for (const auto& [w, pos] : adj[static_cast<std::size_t>(v)]) {
                    if (!alive[static_cast<std::size_t>(w)]) continue;
                    if (--degree[static_cast<std::size_t>(w)] == 1) leaves.push_back(w);
                }
            }
            std::vector<int> cycle;
            int start = -1;
            for (int v : comp.vertices)
                if (alive[static_cast<std::size_t>(v)]) {
                    start = v;
                    break;
                }
            int prev = -1, cur = start;
            do {
                cycle.push_back(cur);
                int next = -1;
                for (const auto& [w, pos] : adj[static_cast<std::size_t>(cur)]) {
                    if (!alive[static_cast<std::size_t>(w)] || w == prev) continue;
                    next = w;
                    break;
                }
                prev = cur;
                cur = next;
            } while (cur != start);
            comp.unique_cycle = detail::normalize_cycle(cycle);
        }
        g.components.push_back(std::move(comp));
    }
    return g;
}

/// The verdict and every concrete obstruction found. omitted_points lists
/// the uncovered points; isolated_tree_components the vertex sets of
/// acyclic components; even_cycle one even closed walk when a bipartite
/// component contains a cycle. Admissible exactly when all three are
/// empty. The optional witness is attached on request for inadmissible
/// complexes.
struct AdmissibilityReport {
    bool admissible = false;
    std::vector<int> omitted_points;
    std::vector<std::vector<int>> isolated_tree_components;
    std::optional<std::vector<int>> even_cycle;
    std::optional<DataVector> witness;
};

inline DataVector kernel_witness(const LineComplex& c);  // defined below

namespace detail {

/// An even cycle from a bipartite component known to contain one. For the
/// unicyclic case the unique cycle is it; otherwise close the first
/// non-tree edge through the breadth-first forest.
inline std::vector<int> even_cycle_of(const ComplexGraph& g, const GraphComponent& comp) {
    if (comp.unique_cycle) return *comp.unique_cycle;
    const int P = g.point_count;
    std::vector<int> parent(static_cast<std::size_t>(P), -1);
    std::vector<int> depth(static_cast<std::size_t>(P), -1);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(P));
    for (int pos : comp.edge_positions) {
        const auto [u, v] = g.endpoints[static_cast<std::size_t>(pos)];
        adj[static_cast<std::size_t>(u)].emplace_back(v, pos);
        adj[static_cast<std::size_t>(v)].emplace_back(u, pos);
    }
    const int root = comp.vertices.front();
    depth[static_cast<std::size_t>(root)] = 0;
    std::deque<int> queue{root};
    std::vector<char> tree_edge(g.endpoints.size(), 0);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const auto& [w, pos] : adj[static_cast<std::size_t>(v)]) {
            if (depth[static_cast<std::size_t>(w)] != -1) continue;
            depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(v)] + 1;
            parent[static_cast<std::size_t>(w)] = v;
            tree_edge[static_cast<std::size_t>(pos)] = 1;
            queue.push_back(w);
        }
    }
    for (int pos : comp.edge_positions) {
        if (tree_edge[static_cast<std::size_t>(pos)]) continue;
        auto [u, v] = g.endpoints[static_cast<std::size_t>(pos)];
        std::vector<int> up, vp;
        int a = u, b = v;
        while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
            up.push_back(a);
            a = parent[static_cast<std::size_t>(a)];
        }
        while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
            vp.push_back(b);
            b = parent[static_cast<std::size_t>(b)];
        }
        while (a != b) {
            up.push_back(a);
            vp.push_back(b);
            a = parent[static_cast<std::size_t>(a)];
            b = parent[static_cast<std::size_t>(b)];
        }
        up.push_back(a);  // the meeting vertex
        std::vector<int> cycle = std::move(up);
        for (auto it = vp.rbegin(); it != vp.rend(); ++it) cycle.push_back(*it);
        return normalize_cycle(cycle);
    }
    throw std::logic_error("even_cycle_of: component has no non-tree edge");
}

}  // namespace detail

/// Scans the complex graph for the three admissibility obstructions. The
/// even-cycle criterion used is "some component with a cycle is
/// bipartite"; for the square systems here this flags inadmissibility
/// exactly when an even cycle would (see classify_edges).
inline AdmissibilityReport obstruction_scan(const LineComplex& c, bool attach_witness = false) {
    const ComplexGraph g = build_graph(c);
    AdmissibilityReport rep;
    for (const auto& comp : g.components) {
        if (comp.vertices.size() == 1 && comp.edge_positions.empty()) {
            rep.omitted_points.push_back(comp.vertices.front());
        } else if (comp.is_tree) {
            rep.isolated_tree_components.push_back(comp.vertices);
        } else if (comp.bipartite && !rep.even_cycle) {
            rep.even_cycle = detail::even_cycle_of(g, comp);
        }
    }
    rep.admissible = rep.omitted_points.empty() && rep.isolated_tree_components.empty() && !rep.even_cycle;
    if (attach_witness && !rep.admissible) rep.witness = kernel_witness(c);
    return rep;
}

/// The 0/1 matrix of the restricted transform: one row per complex line in
/// complex order, one column per point.
inline IncidenceMatrix restricted_matrix(const LineComplex& c) {
    const int P = static_cast<int>(c.space.point_count);
    IncidenceMatrix m;
    m.rows = static_cast<int>(c.lines.size());
    m.cols = P;
    m.entries.assign(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(P), 0);
    for (int r = 0; r < m.rows; ++r) {
        const auto [u, v] = line_endpoints(c.space, c.lines[static_cast<std::size_t>(r)]);
        m.entries[static_cast<std::size_t>(r) * P + u] = 1;
        m.entries[static_cast<std::size_t>(r) * P + v] = 1;
    }
    return m;
}

/// Admissibility decided directly from the definition: the restricted
/// transform is injective, i.e. the restricted matrix has rank 2^n over
/// the rationals. Independent of the graph scan; the two must agree.
inline bool rank_oracle_admissible(const LineComplex& c) {
    const IncidenceMatrix m = restricted_matrix(c);
    const int P = m.cols;
    if (P <= 32) {
        std::vector<std::int64_t> a(m.entries.begin(), m.entries.end());
        return bareiss_rank_int64(std::move(a), m.rows, m.cols) == P;
    }
    return exact_rank(m) == P;
}

/// Sums of f over the complex lines, in complex order.
inline DataVector restricted_apply(const LineComplex& c, const DataVector& f) {
    detail::require_role(f, DataRole::points, static_cast<int>(c.space.point_count), "restricted_apply");
    DataVector out;
    out.role = DataRole::blocks;
    out.values.reserve(c.lines.size());
    for (int id : c.lines) {
        const auto [u, v] = line_endpoints(c.space, id);
        out.values.push_back(f.values[static_cast<std::size_t>(u)] + f.values[static_cast<std::size_t>(v)]);
    }
    return out;
}

/// A nonzero point function annihilated by the restricted transform, for
/// an inadmissible complex. Fast paths: the indicator of the smallest
/// omitted point, else the +1/-1 two-coloring of the first bipartite
/// component with an edge. A rational nullspace vector is the fallback;
/// the scan semantics make it unreachable, but it keeps this function
/// total on inadmissible input. The witness is re-verified before return.
inline DataVector kernel_witness(const LineComplex& c) {
    const AdmissibilityReport rep = obstruction_scan(c, false);
    if (rep.admissible)
        throw std::invalid_argument("kernel_witness: the complex is admissible");
    const int P = static_cast<int>(c.space.point_count);
    DataVector w;
    w.role = DataRole::points;
    w.values.assign(static_cast<std::size_t>(P), Rational(0));
    bool built = false;
    if (!rep.omitted_points.empty()) {
        w.values[static_cast<std::size_t>(rep.omitted_points.front())] = 1;
        built = true;
    }
    if (!built) {
        const ComplexGraph g = build_graph(c);
        for (const auto& comp : g.components) {
            if (comp.vertices.size() < 2 || !comp.bipartite) continue;
            for (int v : comp.vertices)
                w.values[static_cast<std::size_t>(v)] =
                    g.color[static_cast<std::size_t>(v)] == 0 ? Rational(1) : Rational(-1);
            built = true;
            break;
        }
    }
    if (!built) {
        const auto basis = rational_nullspace(to_rational(restricted_matrix(c)));
        if (basis.empty())
            throw std::logic_error("kernel_witness: inadmissible complex with trivial nullspace");
        w.values = basis.front();
    }
    bool nonzero = false;
    for (const auto& v : w.values)
        if (v != 0) nonzero = true;
    const DataVector image = restricted_apply(c, w);
    for (const auto& v : image.values)
        if (v != 0) throw std::logic_error("kernel_witness: candidate is not annihilated");
    if (!nonzero) throw std::logic_error("kernel_witness: candidate is zero");
    return w;
}

/// Exact reconstruction of f from g = restricted_apply(c, f) for an
/// admissible complex. Each component is spanning unicyclic with an odd
/// cycle: the alternating sum around the cycle pins down the value at the
/// cycle's smallest vertex, and every other value follows along the
/// breadth-first forest. A final pass re-checks every line; block data not
/// of the form Rf fails there and is reported distinctly.
inline DataVector reconstruct(const LineComplex& c, const DataVector& g) {
    detail::require_role(g, DataRole::blocks, static_cast<int>(c.lines.size()), "reconstruct");
    const ComplexGraph graph = build_graph(c);
    AdmissibilityReport rep = obstruction_scan(c, false);
    if (!rep.admissible)
        throw InadmissibleComplexError("reconstruct: the complex is inadmissible");

    const int P = static_cast<int>(c.space.point_count);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(P));
    for (int pos = 0; pos < static_cast<int>(graph.endpoints.size()); ++pos) {
        const auto [u, v] = graph.endpoints[static_cast<std::size_t>(pos)];
        adj[static_cast<std::size_t>(u)].emplace_back(v, pos);
        adj[static_cast<std::size_t>(v)].emplace_back(u, pos);
    }
    auto position_of = [&](int u, int v) {
        for (const auto& [w, pos] : adj[static_cast<std::size_t>(u)])
            if (w == v) return pos;
        throw std::logic_error("reconstruct: cycle edge missing from adjacency");
    };

    DataVector f;
    f.role = DataRole::points;
    f.values.assign(static_cast<std::size_t>(P), Rational(0));
    std::vector<char> known(static_cast<std::size_t>(P), 0);
    for (const auto& comp : graph.components) {
        const auto& cycle = *comp.unique_cycle;  // admissible: exactly one odd cycle
        const std::size_t m = cycle.size();
        Rational alt = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const int pos = position_of(cycle[i], cycle[(i + 1) % m]);
            const Rational& gv = g.values[static_cast<std::size_t>(pos)];
            alt += (i % 2 == 0) ? gv : -gv;
        }
        const int seed = cycle.front();
        f.values[static_cast<std::size_t>(seed)] = alt / 2;
        known[static_cast<std::size_t>(seed)] = 1;
        std::deque<int> queue{seed};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (const auto& [w, pos] : adj[static_cast<std::size_t>(v)]) {
                if (known[static_cast<std::size_t>(w)]) continue;
                f.values[static_cast<std::size_t>(w)] =
                    g.values[static_cast<std::size_t>(pos)] - f.values[static_cast<std::size_t>(v)];
                known[static_cast<std::size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }
    for (int pos = 0; pos < static_cast<int>(graph.endpoints.size()); ++pos) {
        const auto [u, v] = graph.endpoints[static_cast<std::size_t>(pos)];
        if (f.values[static_cast<std::size_t>(u)] + f.values[static_cast<std::size_t>(v)] !=
            g.values[static_cast<std::size_t>(pos)])
            throw InconsistentDataError(
                "reconstruct: block data is not in the range of the restricted transform (fails on line " +
                std::to_string(c.lines[static_cast<std::size_t>(pos)]) + ")");
    }
    return f;
}

/// Injectivity of the transform restricted both ways: only the lines given
/// and only the points of the flat they live in. The flat must carry as
/// many lines as it has points.
inline bool relatively_admissible(const GeometrySpace& s, const AffineFlat& flat, std::vector<int> ids) {
    if (s.q != 2) throw std::invalid_argument("relatively_admissible: requires q = 2");
    std::sort(ids.begin(), ids.end());
    if (ids.size() != flat.points.size())
        throw std::invalid_argument("relatively_admissible: need exactly as many lines as flat points");
    std::vector<int> local(static_cast<std::size_t>(s.point_count), -1);
    for (int k = 0; k < static_cast<int>(flat.points.size()); ++k)
        local[static_cast<std::size_t>(flat.points[static_cast<std::size_t>(k)])] = k;
    const int m = static_cast<int>(ids.size());
    std::vector<std::int64_t> a(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
    for (int r = 0; r < m; ++r) {
        if (r > 0 && ids[static_cast<std::size_t>(r)] == ids[static_cast<std::size_t>(r - 1)])
            throw std::invalid_argument("relatively_admissible: duplicate line id");
        const auto [u, v] = line_endpoints(s, ids[static_cast<std::size_t>(r)]);
        const int lu = local[static_cast<std::size_t>(u)], lv = local[static_cast<std::size_t>(v)];
        if (lu < 0 || lv < 0)
            throw std::invalid_argument("relatively_admissible: line leaves the flat");
        a[static_cast<std::size_t>(r) * m + lu] = 1;
        a[static_cast<std::size_t>(r) * m + lv] = 1;
    }
    return bareiss_rank_int64(std::move(a), m, m) == m;
}

namespace detail {

inline void require_plane_23(const GeometrySpace& s, const AffineFlat& plane, const char* who) {
    if (s.q != 2 || s.n != 3)
        throw std::invalid_argument(std::string(who) + ": construction lives in F_2^3");
    make_flat(s, 2, plane.points);  // validates shape, cardinality 4, closure
}

}  // namespace detail

/// Glues two relatively admissible quadruples living in complementary
/// parallel planes. Each quadruple is spanning odd-unicyclic inside its
/// plane, so the union is admissible; that is re-checked before returning.
inline LineComplex construct_spread_union(const GeometrySpace& s, const AffineFlat& plane1,
                                          const AffineFlat& plane2, const std::vector<int>& lines1,
                                          const std::vector<int>& lines2) {
    detail::require_plane_23(s, plane1, "construct_spread_union");
    detail::require_plane_23(s, plane2, "construct_spread_union");
    std::vector<int> all_points = plane1.points;
    all_points.insert(all_points.end(), plane2.points.begin(), plane2.points.end());
    std::sort(all_points.begin(), all_points.end());
    for (int p = 0; p < static_cast<int>(s.point_count); ++p)
        if (p >= static_cast<int>(all_points.size()) || all_points[static_cast<std::size_t>(p)] != p)
            throw std::invalid_argument("construct_spread_union: the planes must partition the space");
    if (!relatively_admissible(s, plane1, lines1) || !relatively_admissible(s, plane2, lines2))
        throw std::invalid_argument("construct_spread_union: each quadruple must be relatively admissible");
    std::vector<int> lines = lines1;
    lines.insert(lines.end(), lines2.begin(), lines2.end());
    LineComplex c = make_line_complex(s, std::move(lines));
    if (!obstruction_scan(c).admissible)
        throw std::logic_error("construct_spread_union: produced an inadmissible complex");
    return c;
}

/// Glues a relatively admissible quadruple in one plane to four legs, one
/// through each point of the complementary plane. Each leg must cross (one
/// endpoint in the plane, one outside) and the outside endpoints must be
/// pairwise distinct, which makes the result spanning unicyclic around the
/// in-plane odd cycle. Re-checked before returning.
inline LineComplex construct_legs(const GeometrySpace& s, const AffineFlat& plane,
                                  const std::vector<int>& core, const std::vector<int>& legs) {
    detail::require_plane_23(s, plane, "construct_legs");
    if (!relatively_admissible(s, plane, core))
        throw std::invalid_argument("construct_legs: the core quadruple must be relatively admissible");
    std::vector<char> in_plane(static_cast<std::size_t>(s.point_count), 0);
    for (int p : plane.points) in_plane[static_cast<std::size_t>(p)] = 1;
    if (legs.size() != plane.points.size())
        throw std::invalid_argument("construct_legs: need one leg per plane point");
    std::vector<char> outside_used(static_cast<std::size_t>(s.point_count), 0);
    for (int id : legs) {
        const auto [u, v] = line_endpoints(s, id);
        const bool uin = in_plane[static_cast<std::size_t>(u)] != 0;
        const bool vin = in_plane[static_cast<std::size_t>(v)] != 0;
        if (uin == vin)
            throw std::invalid_argument("construct_legs: each leg must have exactly one endpoint in the plane");
        const int out = uin ? v : u;
        if (outside_used[static_cast<std::size_t>(out)])
            throw std::invalid_argument("construct_legs: legs must reach distinct outside points");
        outside_used[static_cast<std::size_t>(out)] = 1;
    }
    std::vector<int> lines = core;
    lines.insert(lines.end(), legs.begin(), legs.end());
    LineComplex c = make_line_complex(s, std::move(lines));
    if (!obstruction_scan(c).admissible)
        throw std::logic_error("construct_legs: produced an inadmissible complex");
    return c;
}

/// The four lines translating a plane onto its complement along one
/// direction: {x, x + t} for x in the plane. Over F_2 index translation is
/// xor. The direction must leave the plane.
inline std::vector<int> perpendicular_legs(const GeometrySpace& s, const AffineFlat& plane, int direction) {
    detail::require_plane_23(s, plane, "perpendicular_legs");
    if (direction <= 0 || direction >= static_cast<int>(s.point_count))
        throw std::invalid_argument("perpendicular_legs: direction must be a nonzero point index");
    std::vector<char> in_plane(static_cast<std::size_t>(s.point_count), 0);
    for (int p : plane.points) in_plane[static_cast<std::size_t>(p)] = 1;
    std::vector<int> legs;
    legs.reserve(plane.points.size());
    for (int x : plane.points) {
        const int y = x ^ direction;
        if (in_plane[static_cast<std::size_t>(y)])
            throw std::invalid_argument("perpendicular_legs: the direction lies inside the plane");
        legs.push_back(line_id(s, std::min(x, y), std::max(x, y)));
    }
    std::sort(legs.begin(), legs.end());
    return legs;
}

/// Searches F_2^3 exhaustively, in lexicographic order of line-id tuples,
/// for an admissible complex whose restriction to every plane has in-plane
/// rank below 4, i.e. no plane carries a relatively admissible quadruple.
/// Returns the first such complex.
inline std::optional<LineComplex> search_nonplanar_admissible() {
    const GeometrySpace s = make_space(2, 3);
    const int L = line_count(s);
    const int P = static_cast<int>(s.point_count);
    std::vector<std::pair<int, int>> ends(static_cast<std::size_t>(L));
    for (int id = 0; id < L; ++id) ends[static_cast<std::size_t>(id)] = line_endpoints(s, id);
    const auto planes = enumerate_hyperplanes(s);
    const int H = static_cast<int>(planes.size());
    // For each line, the planes containing it; for each plane, a local
    // point index map for tiny in-plane rank computations.
    std::vector<std::vector<int>> planes_of_line(static_cast<std::size_t>(L));
    std::vector<std::vector<int>> local_index(static_cast<std::size_t>(H),
                                              std::vector<int>(static_cast<std::size_t>(P), -1));
    for (int h = 0; h < H; ++h) {
        const auto& pts = planes[static_cast<std::size_t>(h)].points;
        for (int k = 0; k < static_cast<int>(pts.size()); ++k)
            local_index[static_cast<std::size_t>(h)][static_cast<std::size_t>(pts[static_cast<std::size_t>(k)])] = k;
        for (int id = 0; id < L; ++id) {
            const auto [u, v] = ends[static_cast<std::size_t>(id)];
            if (local_index[static_cast<std::size_t>(h)][static_cast<std::size_t>(u)] >= 0 &&
                local_index[static_cast<std::size_t>(h)][static_cast<std::size_t>(v)] >= 0)
                planes_of_line[static_cast<std::size_t>(id)].push_back(h);
        }
    }
    detail::ClassifyScratch ws;
    std::vector<int> chosen(static_cast<std::size_t>(P));
    for (int k = 0; k < P; ++k) chosen[static_cast<std::size_t>(k)] = k;
    std::vector<std::pair<int, int>> edges(static_cast<std::size_t>(P));
    std::vector<int> per_plane(static_cast<std::size_t>(H));
    do {
        for (int k = 0; k < P; ++k)
            edges[static_cast<std::size_t>(k)] = ends[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])];
        if (!detail::classify_edges(edges.data(), P, P, ws).admissible) continue;
        std::fill(per_plane.begin(), per_plane.end(), 0);
        for (int id : chosen)
            for (int h : planes_of_line[static_cast<std::size_t>(id)]) ++per_plane[static_cast<std::size_t>(h)];
        bool planar = false;
        for (int h = 0; h < H && !planar; ++h) {
            if (per_plane[static_cast<std::size_t>(h)] < 4) continue;
            const int rows = per_plane[static_cast<std::size_t>(h)];
            std::vector<std::int64_t> a(static_cast<std::size_t>(rows) * 4, 0);
            int r = 0;
            for (int id : chosen) {
                const auto [u, v] = ends[static_cast<std::size_t>(id)];
                const int lu = local_index[static_cast<std::size_t>(h)][static_cast<std::size_t>(u)];
                const int lv = local_index[static_cast<std::size_t>(h)][static_cast<std::size_t>(v)];
                if (lu < 0 || lv < 0) continue;
                a[static_cast<std::size_t>(r) * 4 + lu] = 1;
                a[static_cast<std::size_t>(r) * 4 + lv] = 1;
                ++r;
            }
            if (bareiss_rank_int64(std::move(a), rows, 4) == 4) planar = true;
        }
        if (!planar) return make_line_complex(s, chosen);
    } while (next_combination(chosen, L));
    return std::nullopt;
}

/// A seeded admissibility-rate estimate over uniformly sampled complexes.
/// Sampling uses rejection below a power of two and a partial shuffle, so
/// the draw sequence depends only on the seed, never on the platform.
struct SampleEstimate {
    std::int64_t trials = 0;
    std::int64_t admissible = 0;
    Rational rate;
};

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
        r = rng();
    } while (r < threshold);
    return r % n;
}

}  // namespace detail

inline SampleEstimate sample_admissibility_rate(int n, std::int64_t trials, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("sample_admissibility_rate: requires dimension at least 3");
    if (trials < 1) throw std::invalid_argument("sample_admissibility_rate: requires at least one trial");
    const GeometrySpace s = make_space(2, n);
    const int L = line_count(s);
    const int P = static_cast<int>(s.point_count);
    std::mt19937_64 rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(L));
    std::vector<std::pair<int, int>> edges(static_cast<std::size_t>(P));
    detail::ClassifyScratch ws;
    SampleEstimate est;
    est.trials = trials;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (int i = 0; i < L; ++i) pool[static_cast<std::size_t>(i)] = i;
        for (int k = 0; k < P; ++k) {
            const auto j = k + static_cast<int>(detail::uniform_below(rng, static_cast<std::uint64_t>(L - k)));
            std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
            edges[static_cast<std::size_t>(k)] = line_endpoints(s, pool[static_cast<std::size_t>(k)]);
        }
        if (detail::classify_edges(edges.data(), P, P, ws).admissible) ++est.admissible;
    }
    est.rate = Rational(est.admissible, est.trials);
    return est;
}

}  // namespace finrad
