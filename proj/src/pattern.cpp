#include "posgame/pattern.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace posgame {

Pattern make_pattern(int vertex_count, std::vector<std::pair<int, int>> edges)
{
    if (vertex_count < 0)
        throw std::invalid_argument("pattern: negative vertex count");
    for (auto& [u, v] : edges) {
        if (u == v)
            throw std::invalid_argument("pattern: loop edge " + std::to_string(u));
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            throw std::invalid_argument("pattern: edge endpoint out of range");
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Pattern p;
    p.vertex_count = vertex_count;
    p.edges = std::move(edges);
    return p;
}

bool Pattern::has_edge(int u, int v) const
{
    if (u > v)
        std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::vector<int> Pattern::degrees() const
{
    std::vector<int> d(vertex_count, 0);
    for (auto [u, v] : edges) {
        ++d[u];
        ++d[v];
    }
    return d;
}

std::vector<std::uint32_t> Pattern::adjacency_masks() const
{
    if (vertex_count > 32)
        throw std::invalid_argument("pattern: too many vertices for mask adjacency");
    std::vector<std::uint32_t> m(vertex_count, 0);
    for (auto [u, v] : edges) {
        m[u] |= 1u << v;
        m[v] |= 1u << u;
    }
    return m;
}

bool Pattern::is_complete() const
{
    return edge_count() == vertex_count * (vertex_count - 1) / 2;
}

bool Pattern::connected() const
{
    if (vertex_count == 0)
        return false;
    auto adj = adjacency_masks();
    std::uint32_t seen = 1u;
    std::uint32_t frontier = 1u;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (int v = 0; v < vertex_count; ++v)
            if (frontier & (1u << v))
                next |= adj[v];
        frontier = next & ~seen;
        seen |= next;
    }
    return std::popcount(seen) == vertex_count;
}

bool Pattern::contains_two_adjacent_edges() const
{
    for (int d : degrees())
        if (d >= 2)
            return true;
    return false;
}

bool Pattern::is_forest() const
{
    // union-find over edges
    std::vector<int> parent(vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : edges) {
        int a = find(u), b = find(v);
        if (a == b)
            return false;
        parent[a] = b;
    }
    return true;
}

int Pattern::induced_edge_count(std::uint32_t vertex_mask) const
{
    int c = 0;
    for (auto [u, v] : edges)
        if ((vertex_mask & (1u << u)) && (vertex_mask & (1u << v)))
            ++c;
    return c;
}

Pattern Pattern::without_isolated(std::vector<int>* old_label) const
{
    auto d = degrees();
    std::vector<int> map(vertex_count, -1);
    std::vector<int> kept;
    for (int v = 0; v < vertex_count; ++v)
        if (d[v] > 0) {
            map[v] = static_cast<int>(kept.size());
            kept.push_back(v);
        }
    if (old_label)
        *old_label = kept;
    if (static_cast<int>(kept.size()) == vertex_count)
        return *this;
    std::vector<std::pair<int, int>> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges)
        es.emplace_back(map[u], map[v]);
    return make_pattern(static_cast<int>(kept.size()), std::move(es));
}

std::string Pattern::spec_string() const
{
    std::ostringstream out;
    out << "edges:v=" << vertex_count << ":";
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i)
            out << ",";
        out << edges[i].first << "-" << edges[i].second;
    }
    return out.str();
}

Pattern parse_graph(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int declared = -1;
    std::vector<std::pair<int, int>> edges;
    int max_index = -1;
    bool first = true;

    auto parse_int = [](const std::string& tok) {
        size_t pos = 0;
        int v;
        try {
            v = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_graph: malformed token '" + tok + "'");
        }
        if (pos != tok.size() || v < 0)
            throw std::invalid_argument("parse_graph: malformed token '" + tok + "'");
        return v;
    };

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a))
            continue; // blank line
        if (a == "#")
            continue;
        if (first && a == "n") {
            if (!(ls >> b) || (ls >> extra))
                throw std::invalid_argument("parse_graph: malformed count line");
            declared = parse_int(b);
            first = false;
            continue;
        }
        first = false;
        if (!(ls >> b) || (ls >> extra))
            throw std::invalid_argument("parse_graph: malformed edge line '" + line + "'");
        int u = parse_int(a);
        int v = parse_int(b);
        if (u == v)
            throw std::invalid_argument("parse_graph: loop edge at vertex " + std::to_string(u));
        max_index = std::max({max_index, u, v});
        edges.emplace_back(u, v);
    }

    int n = declared >= 0 ? declared : max_index + 1;
    if (declared >= 0 && max_index >= declared)
        throw std::invalid_argument("parse_graph: vertex index " + std::to_string(max_index)
                                    + " >= declared count " + std::to_string(declared));
    return make_pattern(n, std::move(edges));
}

Pattern pattern_from_spec(const std::string& spec)
{
    auto count_after = [&](size_t off) {
        size_t pos = 0;
        int v;
        try {
            v = std::stoi(spec.substr(off), &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("pattern spec: bad count in '" + spec + "'");
        }
        if (off + pos != spec.size() || v < 1)
            throw std::invalid_argument("pattern spec: bad count in '" + spec + "'");
        return v;
    };

    if (spec.rfind("edges:", 0) == 0) {
        // edges:v=<n>:a-b,c-d,...
        size_t vpos = spec.find("v=");
        size_t colon = spec.find(':', vpos == std::string::npos ? 0 : vpos);
        if (vpos == std::string::npos || colon == std::string::npos)
            throw std::invalid_argument("pattern spec: expected edges:v=<n>:<list>");
        int n = std::stoi(spec.substr(vpos + 2, colon - vpos - 2));
        std::vector<std::pair<int, int>> es;
        std::string rest = spec.substr(colon + 1);
        std::istringstream ls(rest);
        std::string item;
        while (std::getline(ls, item, ',')) {
            if (item.empty())
                continue;
            size_t dash = item.find('-');
            if (dash == std::string::npos)
                throw std::invalid_argument("pattern spec: bad edge '" + item + "'");
            es.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
        }
        return make_pattern(n, std::move(es));
    }

    if (spec.empty())
        throw std::invalid_argument("pattern spec: empty");

    char kind = spec[0];
    std::vector<std::pair<int, int>> es;
    switch (kind) {
    case 'k': {
        int k = count_after(1);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v)
                es.emplace_back(u, v);
        return make_pattern(k, std::move(es));
    }
    case 'p': {
        int m = count_after(1);
        for (int v = 0; v + 1 < m; ++v)
            es.emplace_back(v, v + 1);
        return make_pattern(m, std::move(es));
    }
    case 's': {
        int m = count_after(1); // star on m vertices, centre 0
        for (int v = 1; v < m; ++v)
            es.emplace_back(0, v);
        return make_pattern(m, std::move(es));
    }
    case 'c': {
        int m = count_after(1);
        if (m < 3)
            throw std::invalid_argument("pattern spec: cycle needs >= 3 vertices");
        for (int v = 0; v < m; ++v)
            es.emplace_back(v, (v + 1) % m);
        return make_pattern(m, std::move(es));
    }
    default:
        throw std::invalid_argument("pattern spec: unknown form '" + spec + "'");
    }
}

namespace {

    std::uint64_t canonical_code(const Pattern& p)
    {
        // brute-force minimal adjacency code; fine for v <= 8
        int n = p.vertex_count;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        auto adj = p.adjacency_masks();
        std::uint64_t best = ~0ULL;
        do {
            std::uint64_t code = 0;
            int bit = 0;
            bool prune = false;
            for (int i = 0; i < n && !prune; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (adj[perm[i]] & (1u << perm[j]))
                        code |= 1ULL << bit;
                    ++bit;
                }
            best = std::min(best, code);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

} // namespace

bool patterns_isomorphic(const Pattern& a, const Pattern& b)
{
    if (a.vertex_count != b.vertex_count || a.edge_count() != b.edge_count())
        return false;
    auto da = a.degrees();
    auto db = b.degrees();
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db)
        return false;
    if (a.vertex_count > 8)
        throw std::invalid_argument("patterns_isomorphic: capped at 8 vertices");
    return canonical_code(a) == canonical_code(b);
}

std::vector<SubgraphProfile> candidate_subgraphs(const Pattern& h)
{
    if (h.vertex_count > 10)
        throw std::invalid_argument("candidate_subgraphs: capped at 10 vertices");
    std::set<SubgraphProfile> out;
    const std::uint32_t all = h.vertex_count >= 32 ? ~0u : ((1u << h.vertex_count) - 1);
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        int v = std::popcount(mask);
        int e = h.induced_edge_count(mask);
        bool clique = e == v * (v - 1) / 2;
        bool full = mask == all && e == h.edge_count();
        out.insert({v, e, clique, full});
        // densest strictly-smaller subgraph on the same vertex set; never a
        // complete graph, so it is the densest admissible Int^c member here
        if (e >= 1)
            out.insert({v, e - 1, false, false});
    }
    return {out.begin(), out.end()};
}

} // namespace posgame
