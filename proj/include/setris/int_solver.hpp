// Finite-domain integer constraints: domains, propagators, labeling.
#pragma once

#include <setris/formula.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace setris {

class Store;

// Sorted, disjoint, nonempty closed intervals.
class IntDomain {
public:
    IntDomain() = default;
    IntDomain(std::int64_t lo, std::int64_t hi);
    static IntDomain from_intervals(std::vector<std::pair<std::int64_t, std::int64_t>> iv);

    bool empty() const { return iv_.empty(); }
    std::int64_t lo() const { return iv_.front().first; }
    std::int64_t hi() const { return iv_.back().second; }
    bool singleton() const { return iv_.size() == 1 && iv_[0].first == iv_[0].second; }
    bool contains(std::int64_t v) const;
    // Number of values, saturating at UINT64_MAX.
    std::uint64_t size() const;
    const std::vector<std::pair<std::int64_t, std::int64_t>>& intervals() const { return iv_; }

    // Each returns true if the domain changed.
    bool restrict(std::int64_t lo, std::int64_t hi);
    bool remove(std::int64_t v);
    bool intersect(const IntDomain& o);
    // Smallest value strictly greater than v, if any.
    std::optional<std::int64_t> next_above(std::int64_t v) const;

    bool operator==(const IntDomain& o) const { return iv_ == o.iv_; }
    std::string str() const;  // "{-5,5}" style for small domains, "lo..hi" ranges otherwise

private:
    std::vector<std::pair<std::int64_t, std::int64_t>> iv_;
};

// Linear constraint sum(coef*var) + k REL 0, or a nonlinear helper relation z = x*y / z = x mod y.
struct IntProp {
    enum class Kind : std::uint8_t { Lin, Mul, Mod } kind = Kind::Lin;
    enum class Rel : std::uint8_t { Eq, Neq, Le } rel = Rel::Eq;
    std::vector<std::pair<std::int64_t, VarId>> terms;
    std::int64_t k = 0;
    VarId x = 0, y = 0, z = 0;
    Formula src;  // the posted atom, kept for residue output; null for helper relations
};

using IntProps = std::vector<IntProp>;

// Post an integer atom (Le, Lt, Ge, Gt, IntEq, IntNeq, or Eq/Neq over integer terms).
// Returns false if it is unsatisfiable given the current domains.
bool post_int(Store& s, const Formula& atom, IntProps& props);

// Bounds propagation to a fixpoint. Singleton domains bind their variables.
bool propagate_ints(Store& s, IntProps& props);

// Drop propagators whose variables are all fixed (after checking them).
void prune_props(Store& s, IntProps& props);

// Variables mentioned by the propagators (after dereferencing), unbound only.
std::vector<VarId> prop_vars(const Store& s, const IntProps& props);

}  // namespace setris
