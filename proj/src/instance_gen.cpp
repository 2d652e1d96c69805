#include "mapf/instance_gen.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "mapf/rng.hpp"

namespace mapf {

namespace {

// Row-major occupancy of an n x n grid.
struct Cells {
    int n;
    std::vector<char> on;

    bool inside(int r, int c) const { return r >= 0 && c >= 0 && r < n && c < n; }
    bool at(int r, int c) const { return inside(r, c) && on[r * n + c]; }
};

constexpr int kDr[4] = {-1, 0, 1, 0};  // up, right, down, left
constexpr int kDc[4] = {0, 1, 0, -1};

std::string cell_name(int r, int c) { return "v" + std::to_string(r) + "_" + std::to_string(c); }

// Drops every cell outside the largest 4-connected component; the first
// component found in row-major order wins ties.
void keep_largest_component(Cells& cells) {
    const int n = cells.n;
    std::vector<int> label(n * n, -1);
    int best = -1;
    std::size_t best_size = 0;
    for (int s = 0; s < n * n; ++s) {
        if (!cells.on[s] || label[s] >= 0) continue;
        std::size_t size = 0;
        std::queue<int> queue;
        queue.push(s);
        label[s] = s;
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop();
            ++size;
            for (int d = 0; d < 4; ++d) {
                int r = x / n + kDr[d], c = x % n + kDc[d];
                if (cells.at(r, c) && label[r * n + c] < 0) {
                    label[r * n + c] = s;
                    queue.push(r * n + c);
                }
            }
        }
        if (size > best_size) best = s, best_size = size;
    }
    for (int x = 0; x < n * n; ++x) cells.on[x] = cells.on[x] && label[x] == best;
}

// Undirected tree edges as pairs of cell indices, carved by randomized DFS.
std::vector<std::pair<int, int>> carve_maze(int n, SplitMix64& rng) {
    std::vector<std::pair<int, int>> tree;
    std::vector<char> seen(n * n, 0);
    std::vector<int> stack{static_cast<int>(rng.below(n * n))};
    seen[stack.back()] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        int fresh[4], count = 0;
        for (int d = 0; d < 4; ++d) {
            int r = x / n + kDr[d], c = x % n + kDc[d];
            if (r >= 0 && c >= 0 && r < n && c < n && !seen[r * n + c]) fresh[count++] = r * n + c;
        }
        if (count == 0) {
            stack.pop_back();
            continue;
        }
        int y = fresh[rng.below(count)];
        seen[y] = 1;
        tree.emplace_back(x, y);
        stack.push_back(y);
    }
    return tree;
}

Cells room_cells(int n, int room, SplitMix64& rng) {
    Cells cells{n, std::vector<char>(n * n, 1)};
    const int period = room + 1;
    auto wall = [&](int i) { return i % period == room; };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (wall(r) || wall(c)) cells.on[r * n + c] = 0;
    // Vertical wall segments (between horizontally adjacent rooms), then
    // horizontal ones, each scanned row-major by room.
    for (int vertical = 1; vertical >= 0; --vertical) {
        for (int r0 = 0; r0 < n; r0 += period) {
            for (int c0 = 0; c0 < n; c0 += period) {
                int line = (vertical ? c0 : r0) + room;  // wall row/column after this room
                if (line >= n) continue;
                int lo = vertical ? r0 : c0;
                int len = std::min(room, n - lo);
                if (!rng.chance(0.9)) continue;
                int off = lo + static_cast<int>(rng.below(len));
                if (vertical) cells.on[off * n + line] = 1;
                else cells.on[line * n + off] = 1;
            }
        }
    }
    return cells;
}

std::vector<VertexId> pick_distinct(std::size_t universe, std::size_t k, SplitMix64& rng) {
    std::vector<VertexId> ids(universe);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(ids[i], ids[i + rng.below(universe - i)]);
    ids.resize(k);
    return ids;
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::grid: return "grid";
        case Family::maze: return "maze";
        case Family::room: return "room";
        case Family::random: return "random";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    for (auto f : {Family::grid, Family::maze, Family::room, Family::random})
        if (text == to_string(f)) return f;
    throw std::invalid_argument("unknown family '" + std::string(text) + "'");
}

Instance gen(const GenSpec& spec) {
    const int n = spec.size;
    if (n < 1) throw std::invalid_argument("grid size must be positive");
    if (spec.agents < 0) throw std::invalid_argument("negative agent count");
    if (spec.room_size < 1) throw std::invalid_argument("room size must be positive");
    if (spec.density < 0 || spec.density > 1) throw std::invalid_argument("density must lie in [0,1]");
    if (spec.max_duration && *spec.max_duration < 1) throw std::invalid_argument("max duration must be positive");

    SplitMix64 rng(spec.seed);
    Cells cells{n, std::vector<char>(n * n, 1)};
    std::vector<std::pair<int, int>> links;  // undirected, cell indices
    switch (spec.family) {
        case Family::grid: break;
        case Family::maze: links = carve_maze(n, rng); break;
        case Family::room:
            cells = room_cells(n, spec.room_size, rng);
            keep_largest_component(cells);
            break;
        case Family::random:
            for (auto& on : cells.on) on = rng.chance(spec.density);
            keep_largest_component(cells);
            break;
    }
    if (spec.family != Family::maze) {
        for (int x = 0; x < n * n; ++x) {
            if (!cells.on[x]) continue;
            if (cells.at(x / n, x % n + 1)) links.emplace_back(x, x + 1);
            if (cells.at(x / n + 1, x % n)) links.emplace_back(x, x + n);
        }
    }

    std::vector<std::string> names;
    for (int x = 0; x < n * n; ++x)
        if (cells.on[x]) names.push_back(cell_name(x / n, x % n));
    std::sort(names.begin(), names.end());

    Instance inst;
    auto& p = inst.problem;
    p.graph = Graph(names);
    auto id = [&](int x) { return *p.graph.find(cell_name(x / n, x % n)); };
    std::sort(links.begin(), links.end(), [&](auto l, auto r) {
        return std::pair(id(l.first), id(l.second)) < std::pair(id(r.first), id(r.second));
    });
    for (auto [x, y] : links) {
        p.graph.add_edge(id(x), id(y));
        p.graph.add_edge(id(y), id(x));
    }

    const auto k = static_cast<std::size_t>(spec.agents);
    if (k > names.size())
        throw std::invalid_argument("cannot place " + std::to_string(k) + " agents on " +
                                    std::to_string(names.size()) + " vertices");
    auto starts = pick_distinct(names.size(), k, rng);
    auto goals = pick_distinct(names.size(), k, rng);
    std::vector<std::tuple<std::string, VertexId, VertexId>> agents;
    for (std::size_t i = 0; i < k; ++i) agents.emplace_back("a" + std::to_string(i), starts[i], goals[i]);
    std::sort(agents.begin(), agents.end());
    for (auto& [name, s, g] : agents) {
        p.agents.push_back(name);
        p.start.push_back(s);
        p.goal.push_back(g);
    }

    if (spec.max_duration) {
        std::vector<int> delta;
        for (std::size_t e = 0; e < p.graph.num_edges(); ++e)
            delta.push_back(1 + static_cast<int>(rng.below(*spec.max_duration)));
        inst.delta = std::move(delta);
    }

    inst.meta["family"] = to_string(spec.family);
    inst.meta["size"] = std::to_string(n);
    inst.meta["agents"] = std::to_string(k);
    inst.meta["seed"] = std::to_string(spec.seed);
    if (spec.family == Family::room) inst.meta["room_size"] = std::to_string(spec.room_size);
    if (spec.family == Family::random) inst.meta["density"] = std::to_string(spec.density);
    if (spec.max_duration) inst.meta["max_duration"] = std::to_string(*spec.max_duration);
    return inst;
}

}  // namespace mapf
