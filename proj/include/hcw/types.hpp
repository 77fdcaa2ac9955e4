#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hcw/graph.hpp"

namespace hcw {

/// Canonical identifier of a rank-q type. Ids are stable within one
/// TypeUniverse: two tuples (possibly from different structures) receive
/// the same id at rank q exactly when no quantifier-rank-q formula over the
/// colored-graph signature distinguishes them.
using TypeId = int;

/// Interning table for the recursive type construction. Rank 0 is the
/// atomic type of the tuple (equalities, adjacencies, loops, colors); rank
/// q+1 pairs the atomic type with the set of rank-q ids of all one-vertex
/// extensions. Not thread-safe; confine to one task or use one per context.
class TypeUniverse {
  public:
    explicit TypeUniverse(int rank_cap = 3, int tuple_cap = 4)
        : rank_cap_(rank_cap), tuple_cap_(tuple_cap) {}

    TypeId rank_type(const ColoredGraph& s, const std::vector<int>& tuple, int q);

    /// Same computation with the caps ignored; the synthesis pipeline works
    /// with long tuples and bounds them itself.
    TypeId rank_type_unchecked(const ColoredGraph& s, const std::vector<int>& tuple, int q);

    int rank_cap() const { return rank_cap_; }
    int tuple_cap() const { return tuple_cap_; }
    size_t size() const { return table_.size(); }

  private:
    TypeId intern(const std::vector<int64_t>& key);

    int rank_cap_;
    int tuple_cap_;
    TypeId next_id_ = 0;
    std::unordered_map<uint64_t, std::vector<std::pair<std::vector<int64_t>, TypeId>>> table_;
};

/// Exact Ehrenfeucht-Fraisse game search: true iff the duplicator wins the
/// q-round game from position (t1 in s1, t2 in s2). Independent oracle for
/// rank_type; plain adversarial recursion with memoization, no type
/// construction involved.
bool ef_equivalent(const ColoredGraph& s1, const std::vector<int>& t1, const ColoredGraph& s2,
                   const std::vector<int>& t2, int q, int rank_cap = 3, int tuple_cap = 4);

/// The same game search with a memo shared across queries on one pair of
/// structures; used when many positions are probed on the same instance.
class EfOracle {
  public:
    EfOracle(const ColoredGraph& s1, const ColoredGraph& s2);
    bool equivalent(const std::vector<int>& t1, const std::vector<int>& t2, int q);

  private:
    struct KeyHash {
        size_t operator()(const std::vector<int>& v) const;
    };

    bool wins(std::vector<int>& t1, std::vector<int>& t2, int q);
    bool atoms(const std::vector<int>& t1, const std::vector<int>& t2) const;

    int n1_, n2_;
    std::vector<char> adj1_, adj2_;
    std::vector<int> color1_, color2_;
    std::unordered_map<std::vector<int>, char, KeyHash> memo_;
};

}  // namespace hcw
