#include "hamlaw/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hamlaw/errors.hpp"

namespace hamlaw {

Hypergraph::Hypergraph(unsigned n, unsigned r, std::vector<Rank> ranks) : n_(n), r_(r), ranks_(std::move(ranks)) {
    if (n > kMaxVertices) throw InvalidArgument("Hypergraph: n exceeds " + std::to_string(kMaxVertices));
    if (r == 0 || r > n) throw InvalidArgument("Hypergraph: need 0 < r <= n");
    std::sort(ranks_.begin(), ranks_.end());
    if (std::adjacent_find(ranks_.begin(), ranks_.end()) != ranks_.end()) {
        throw InvalidArgument("Hypergraph: duplicate edge rank");
    }
    const std::uint64_t universe = universe_size();
    if (!ranks_.empty() && ranks_.back() >= universe) throw InvalidArgument("Hypergraph: edge rank out of range");
    dense_ = universe <= kDenseLimit;
    if (dense_) {
        bits_.assign((universe + 63) / 64, 0);
        for (Rank k : ranks_) bits_[k >> 6] |= std::uint64_t{1} << (k & 63);
    } else {
        sparse_.reserve(ranks_.size());
        sparse_.insert(ranks_.begin(), ranks_.end());
    }
}

Hypergraph Hypergraph::from_edges(unsigned n, unsigned r, const std::vector<std::vector<Vertex>>& edges) {
    std::vector<Rank> ranks;
    ranks.reserve(edges.size());
    for (auto e : edges) {
        std::sort(e.begin(), e.end());
        ranks.push_back(rank_subset(e, n, r));
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    return Hypergraph(n, r, std::move(ranks));
}

Hypergraph Hypergraph::complete(unsigned n, unsigned r) {
    const std::uint64_t universe = choose(n, r);
    if (universe > kDenseLimit) throw ResourceLimit("Hypergraph::complete: C(n, r) too large");
    std::vector<Rank> ranks(universe);
    for (std::uint64_t i = 0; i < universe; ++i) ranks[i] = i;
    return Hypergraph(n, r, std::move(ranks));
}

Hypergraph Hypergraph::with_edges(std::span<const Rank> extra) const {
    std::vector<Rank> merged(ranks_);
    merged.insert(merged.end(), extra.begin(), extra.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return Hypergraph(n_, r_, std::move(merged));
}

Hypergraph relabel(const Hypergraph& graph, std::span<const Vertex> perm) {
    const unsigned n = graph.n();
    if (perm.size() != n) throw InvalidArgument("relabel: permutation has wrong length");
    std::vector<char> seen(n, 0);
    for (Vertex v : perm) {
        if (v >= n || seen[v]) throw InvalidArgument("relabel: map is not a bijection on [0, n)");
        seen[v] = 1;
    }
    std::vector<Rank> out;
    out.reserve(graph.edge_count());
    std::vector<Vertex> buf(graph.r());
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        const auto e = graph.edge_vertices(i);
        for (unsigned j = 0; j < graph.r(); ++j) buf[j] = perm[e[j]];
        std::sort(buf.begin(), buf.end());
        out.push_back(rank_sorted_unchecked(buf.data(), graph.r()));
    }
    return Hypergraph(n, graph.r(), std::move(out));
}

// --- text -------------------------------------------------------------------

void write_text(std::ostream& os, const Hypergraph& graph) {
    os << "# hamlaw-hypergraph 1\n";
    os << graph.n() << ' ' << graph.r() << ' ' << graph.edge_count() << '\n';
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        const auto e = graph.edge_vertices(i);
        for (unsigned j = 0; j < e.size(); ++j) os << (j ? " " : "") << e[j];
        os << '\n';
    }
}

std::string to_text(const Hypergraph& graph) {
    std::ostringstream os;
    write_text(os, graph);
    return os.str();
}

Hypergraph read_text(std::istream& is) {
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(is, line)) {
            if (!line.empty() && line[0] == '#') {
                if (line.rfind("# hamlaw-hypergraph", 0) == 0) {
                    std::istringstream hs(line.substr(19));
                    int version = 0;
                    if (!(hs >> version) || version != 1) throw UsageError("hypergraph text: unsupported version");
                }
                continue;
            }
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            return true;
        }
        return false;
    };
    if (!next_line()) throw UsageError("hypergraph text: missing header");
    unsigned n = 0, r = 0;
    std::size_t count = 0;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> r >> count)) throw UsageError("hypergraph text: malformed header '" + line + "'");
    }
    std::vector<std::vector<Vertex>> edges;
    edges.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!next_line()) throw UsageError("hypergraph text: fewer edges than declared");
        std::istringstream es(line);
        std::vector<Vertex> e;
        long long v = 0;
        while (es >> v) {
            if (v < 0) throw UsageError("hypergraph text: negative vertex");
            e.push_back(static_cast<Vertex>(v));
        }
        if (e.size() != r) throw UsageError("hypergraph text: edge with wrong arity");
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    if (next_line()) throw UsageError("hypergraph text: more edges than declared");
    Hypergraph g = Hypergraph::from_edges(n, r, edges);
    if (g.edge_count() != count) throw UsageError("hypergraph text: duplicate edges");
    return g;
}

// --- binary -----------------------------------------------------------------

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
    std::array<char, sizeof(T)> buf{};
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    os.write(buf.data(), buf.size());
}

template <class T>
T get_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> buf{};
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw UsageError("hypergraph binary: truncated");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
}

constexpr char kMagic[4] = {'H', 'L', 'H', 'G'};

}  // namespace

void write_binary(std::ostream& os, const Hypergraph& graph) {
    os.write(kMagic, 4);
    put_le<std::uint32_t>(os, 1);
    put_le<std::uint32_t>(os, graph.n());
    put_le<std::uint32_t>(os, graph.r());
    put_le<std::uint64_t>(os, graph.edge_count());
    for (Rank k : graph.ranks()) put_le<std::uint64_t>(os, k);
}

Hypergraph read_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) throw UsageError("hypergraph binary: bad magic");
    if (get_le<std::uint32_t>(is) != 1) throw UsageError("hypergraph binary: unsupported version");
    const auto n = get_le<std::uint32_t>(is);
    const auto r = get_le<std::uint32_t>(is);
    const auto count = get_le<std::uint64_t>(is);
    if (n > kMaxVertices || r == 0 || r > n || count > choose(n, r)) throw UsageError("hypergraph binary: bad header");
    std::vector<Rank> ranks(count);
    for (auto& k : ranks) k = get_le<std::uint64_t>(is);
    return Hypergraph(n, r, std::move(ranks));
}

Hypergraph load_hypergraph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    if (std::equal(magic, magic + 4, kMagic)) return read_binary(in);
    return read_text(in);
}

void save_hypergraph(const std::string& path, const Hypergraph& graph, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    if (binary) {
        write_binary(out, graph);
    } else {
        write_text(out, graph);
    }
}

}  // namespace hamlaw
