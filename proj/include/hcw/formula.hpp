#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hcw/graph.hpp"

namespace hcw {

/// Variable reference. Free variables are written x1, x2, ... and bound
/// variables y1, y2, ...; the two namespaces are disjoint, quantifiers only
/// ever bind y-variables.
struct Var {
    bool bound = false;
    int index = 0;  // 1-based

    bool operator==(const Var& o) const { return bound == o.bound && index == o.index; }
    bool operator<(const Var& o) const {
        return bound != o.bound ? bound < o.bound : index < o.index;
    }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// First-order formula over the colored-graph signature: binary edge
/// relation E, unary color predicates, and equality.
struct Formula {
    enum Kind { True, False, Edge, Color, Eq, Not, And, Or, Implies, Exists, Forall };
    Kind kind = True;
    Var a, b;                        // Edge/Eq use both, Color uses a
    int color = 0;                   // Color only
    Var quantified;                  // Exists/Forall
    std::vector<FormulaPtr> kids;    // Not: 1, Implies: 2, And/Or: any, quantifiers: 1
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_edge(Var a, Var b);
FormulaPtr f_color(int c, Var a);
FormulaPtr f_eq(Var a, Var b);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr f_exists(int y_index, FormulaPtr f);
FormulaPtr f_forall(int y_index, FormulaPtr f);

inline Var x(int i) { return Var{false, i}; }
inline Var y(int i) { return Var{true, i}; }

int quantifier_rank(const FormulaPtr& f);
std::vector<int> free_variables(const FormulaPtr& f);  // sorted x-indices

/// Replaces free x-variables per `mapping` (x-index -> new Var). Bound
/// variables of the formula are renamed apart first, so substituting a
/// y-variable cannot be captured.
FormulaPtr substitute_free(const FormulaPtr& f, const std::map<int, Var>& mapping);

/// S-expression text form: (E x1 x2), (and ...), (or ...), (not ...),
/// (implies ...), (exists y1 ...), (forall y1 ...), (color c x1),
/// (= x1 x2), true, false.
FormulaPtr parse_formula(const std::string& text);
std::string to_text(const FormulaPtr& f);

/// Standard Tarskian evaluation; the edge relation is symmetric as stored
/// and E(v,v) holds exactly for loops.
bool eval_formula(const ColoredGraph& s, const FormulaPtr& phi,
                  const std::map<int, int>& assignment);

/// Result of interpreting a binary formula: same vertex set, edge uv
/// (u != v) present iff the formula holds on (u, v). Rejects formulas that
/// are not symmetric on the given structure, naming a witness pair.
Graph interpret(const ColoredGraph& g, const FormulaPtr& xi);

struct LocalityVerdict {
    bool holds = true;
    std::string reason;           // which condition failed
    std::vector<int> witness;     // offending tuple
};

/// Per-instance evidence for strong r-locality of an arity <= 2 formula:
/// evaluation agrees with evaluation in the r-ball of the arguments, and
/// satisfied tuples have pairwise distance at most r.
LocalityVerdict check_strong_locality(const ColoredGraph& g, const FormulaPtr& xi, int r);

}  // namespace hcw
