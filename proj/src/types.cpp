#include "hcw/types.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hcw {

namespace {

uint64_t hash_key(const std::vector<int64_t>& key) {
    uint64_t h = 1469598103934665603ull;
    for (int64_t v : key) {
        h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 1099511628211ull;
    }
    return h;
}

struct TypedModel {
    const ColoredGraph& s;
    std::vector<char> adj;

    explicit TypedModel(const ColoredGraph& cg) : s(cg), adj(cg.graph.n * cg.graph.n, 0) {
        int n = cg.graph.n;
        for (auto [u, v] : cg.graph.edges) adj[u * n + v] = adj[v * n + u] = 1;
        for (int v : cg.graph.loops) adj[v * n + v] = 1;
    }
    bool edge(int u, int v) const { return adj[u * s.graph.n + v] != 0; }
};

}  // namespace

TypeId TypeUniverse::intern(const std::vector<int64_t>& key) {
    auto& bucket = table_[hash_key(key)];
    for (auto& [stored, id] : bucket)
        if (stored == key) return id;
    TypeId id = next_id_++;
    bucket.emplace_back(key, id);
    return id;
}

TypeId TypeUniverse::rank_type(const ColoredGraph& s, const std::vector<int>& tuple, int q) {
    if (q < 0 || q > rank_cap_) throw Error("rank_type: rank cap exceeded");
    if (static_cast<int>(tuple.size()) > tuple_cap_) throw Error("rank_type: tuple cap exceeded");
    return rank_type_unchecked(s, tuple, q);
}

TypeId TypeUniverse::rank_type_unchecked(const ColoredGraph& s, const std::vector<int>& tuple, int q) {
    for (int v : tuple)
        if (v < 0 || v >= s.graph.n) throw Error("rank_type: tuple vertex out of range");
    TypedModel m(s);

    // Atomic ids along the tuple prefix.
    std::vector<int64_t> empty_key{0, -1};
    TypeId atom = intern(empty_key);
    std::vector<int> prefix;
    auto extend_atom = [&](TypeId parent, const std::vector<int>& pref, int w) {
        std::vector<int64_t> key;
        key.reserve(2 * pref.size() + 4);
        key.push_back(0);
        key.push_back(parent);
        key.push_back(s.color[w]);
        key.push_back(m.edge(w, w) ? 1 : 0);
        for (int u : pref) {
            key.push_back(u == w ? 2 : 0);
            key.push_back(m.edge(u, w) ? 1 : 0);
        }
        return intern(key);
    };
    for (int v : tuple) {
        atom = extend_atom(atom, prefix, v);
        prefix.push_back(v);
    }

    // Recursive construction over extensions, sharing the incremental
    // atomic ids. work(tuple, atomId, q) never copies the tuple.
    std::vector<int> work = tuple;
    std::function<TypeId(TypeId, int)> type_at = [&](TypeId atom_id, int rank) -> TypeId {
        if (rank == 0) {
            std::vector<int64_t> key{1, 0, atom_id};
            return intern(key);
        }
        std::set<TypeId> kids;
        for (int w = 0; w < s.graph.n; ++w) {
            TypeId ext_atom = extend_atom(atom_id, work, w);
            work.push_back(w);
            kids.insert(type_at(ext_atom, rank - 1));
            work.pop_back();
        }
        std::vector<int64_t> key;
        key.reserve(kids.size() + 3);
        key.push_back(1);
        key.push_back(rank);
        key.push_back(atom_id);
        for (TypeId k : kids) key.push_back(k);
        return intern(key);
    };
    return type_at(atom, q);
}

// ------------------------------------------------------------------ games

namespace {

bool atoms_match(const TypedModel& m1, const std::vector<int>& t1, const TypedModel& m2,
                 const std::vector<int>& t2) {
    size_t k = t1.size();
    if (t2.size() != k) return false;
    for (size_t i = 0; i < k; ++i) {
        if (m1.s.color[t1[i]] != m2.s.color[t2[i]]) return false;
        if (m1.edge(t1[i], t1[i]) != m2.edge(t2[i], t2[i])) return false;
        for (size_t j = 0; j < i; ++j) {
            if ((t1[i] == t1[j]) != (t2[i] == t2[j])) return false;
            if (m1.edge(t1[i], t1[j]) != m2.edge(t2[i], t2[j])) return false;
        }
    }
    return true;
}

struct PositionHash {
    size_t operator()(const std::vector<int>& v) const {
        uint64_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

std::vector<int> position_key(const std::vector<int>& t1, const std::vector<int>& t2, int q) {
    std::vector<int> key;
    key.reserve(t1.size() + t2.size() + 2);
    key.push_back(q);
    key.push_back(static_cast<int>(t1.size()));
    key.insert(key.end(), t1.begin(), t1.end());
    key.insert(key.end(), t2.begin(), t2.end());
    return key;
}

struct GameSearch {
    const TypedModel& m1;
    const TypedModel& m2;
    std::unordered_map<std::vector<int>, char, PositionHash> memo;

    bool duplicator_wins(std::vector<int>& t1, std::vector<int>& t2, int q) {
        if (!atoms_match(m1, t1, m2, t2)) return false;
        if (q == 0) return true;
        auto key = position_key(t1, t2, q);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second != 0;
        bool ok = true;
        // Spoiler plays in structure 1.
        for (int w1 = 0; ok && w1 < m1.s.graph.n; ++w1) {
            bool answered = false;
            t1.push_back(w1);
            for (int w2 = 0; !answered && w2 < m2.s.graph.n; ++w2) {
                t2.push_back(w2);
                answered = duplicator_wins(t1, t2, q - 1);
                t2.pop_back();
            }
            t1.pop_back();
            ok = answered;
        }
        // Spoiler plays in structure 2.
        for (int w2 = 0; ok && w2 < m2.s.graph.n; ++w2) {
            bool answered = false;
            t2.push_back(w2);
            for (int w1 = 0; !answered && w1 < m1.s.graph.n; ++w1) {
                t1.push_back(w1);
                answered = duplicator_wins(t1, t2, q - 1);
                t1.pop_back();
            }
            t2.pop_back();
            ok = answered;
        }
        memo[key] = ok ? 1 : 0;
        return ok;
    }
};

}  // namespace

bool ef_equivalent(const ColoredGraph& s1, const std::vector<int>& t1, const ColoredGraph& s2,
                   const std::vector<int>& t2, int q, int rank_cap, int tuple_cap) {
    if (q < 0 || q > rank_cap) throw Error("ef_equivalent: rank cap exceeded");
    if (static_cast<int>(t1.size()) > tuple_cap || static_cast<int>(t2.size()) > tuple_cap)
        throw Error("ef_equivalent: tuple cap exceeded");
    for (int v : t1)
        if (v < 0 || v >= s1.graph.n) throw Error("ef_equivalent: tuple vertex out of range");
    for (int v : t2)
        if (v < 0 || v >= s2.graph.n) throw Error("ef_equivalent: tuple vertex out of range");
    TypedModel m1(s1), m2(s2);
    GameSearch search{m1, m2, {}};
    std::vector<int> a = t1, b = t2;
    return search.duplicator_wins(a, b, q);
}

size_t EfOracle::KeyHash::operator()(const std::vector<int>& v) const {
    return PositionHash{}(v);
}

EfOracle::EfOracle(const ColoredGraph& s1, const ColoredGraph& s2)
    : n1_(s1.graph.n), n2_(s2.graph.n), color1_(s1.color), color2_(s2.color) {
    adj1_.assign(n1_ * n1_, 0);
    for (auto [u, v] : s1.graph.edges) adj1_[u * n1_ + v] = adj1_[v * n1_ + u] = 1;
    for (int v : s1.graph.loops) adj1_[v * n1_ + v] = 1;
    adj2_.assign(n2_ * n2_, 0);
    for (auto [u, v] : s2.graph.edges) adj2_[u * n2_ + v] = adj2_[v * n2_ + u] = 1;
    for (int v : s2.graph.loops) adj2_[v * n2_ + v] = 1;
}

bool EfOracle::atoms(const std::vector<int>& t1, const std::vector<int>& t2) const {
    size_t k = t1.size();
    if (t2.size() != k) return false;
    for (size_t i = 0; i < k; ++i) {
        if (color1_[t1[i]] != color2_[t2[i]]) return false;
        if (adj1_[t1[i] * n1_ + t1[i]] != adj2_[t2[i] * n2_ + t2[i]]) return false;
        for (size_t j = 0; j < i; ++j) {
            if ((t1[i] == t1[j]) != (t2[i] == t2[j])) return false;
            if (adj1_[t1[i] * n1_ + t1[j]] != adj2_[t2[i] * n2_ + t2[j]]) return false;
        }
    }
    return true;
}

bool EfOracle::wins(std::vector<int>& t1, std::vector<int>& t2, int q) {
    if (!atoms(t1, t2)) return false;
    if (q == 0) return true;
    auto key = position_key(t1, t2, q);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second != 0;
    bool ok = true;
    for (int w1 = 0; ok && w1 < n1_; ++w1) {
        bool answered = false;
        t1.push_back(w1);
        for (int w2 = 0; !answered && w2 < n2_; ++w2) {
            t2.push_back(w2);
            answered = wins(t1, t2, q - 1);
            t2.pop_back();
        }
        t1.pop_back();
        ok = answered;
    }
    for (int w2 = 0; ok && w2 < n2_; ++w2) {
        bool answered = false;
        t2.push_back(w2);
        for (int w1 = 0; !answered && w1 < n1_; ++w1) {
            t1.push_back(w1);
            answered = wins(t1, t2, q - 1);
            t1.pop_back();
        }
        t2.pop_back();
        ok = answered;
    }
    memo_[key] = ok ? 1 : 0;
    return ok;
}

bool EfOracle::equivalent(const std::vector<int>& t1, const std::vector<int>& t2, int q) {
    std::vector<int> a = t1, b = t2;
    return wins(a, b, q);
}

}  // namespace hcw
