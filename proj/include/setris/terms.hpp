// Term universe: variables, constants, pairs, integer expressions and set terms.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace setris {

using VarId = std::uint32_t;

struct TermNode;
using Term = std::shared_ptr<const TermNode>;
struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedRis : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsafeRis : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotExpandable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TermKind : std::uint8_t { Var, Int, Str, Pair, Expr, Empty, Cons, Interval, Ris };
enum class ExprOp : std::uint8_t { Add, Sub, Mul, Mod };

struct RisTerm {
    Term control;
    Term domain;
    Formula filter;
    Term pattern;
    std::vector<Term> dummies;
    bool admissible_shape = false;
    bool pattern_is_control = false;
    // control variables followed by dummies; these are local to the RIS
    std::vector<VarId> bound;
};

struct TermNode {
    TermKind kind = TermKind::Empty;
    // Var
    VarId id = 0;
    std::string name;
    bool anon = false;
    // Int value, Interval lower bound
    std::int64_t ival = 0;
    // Interval upper bound
    std::int64_t hi = 0;
    std::string sval;
    ExprOp op = ExprOp::Add;
    // Pair(a,b), Cons(elem=a, rest=b), Expr(a op b)
    Term a, b;
    std::shared_ptr<const RisTerm> ris;
};

// Issues variable ids and auto names for one solver session.
class VarPool {
public:
    Term fresh(std::optional<std::string> hint = std::nullopt);
    VarId issued() const { return next_.load(); }

private:
    std::atomic<VarId> next_{0};
    std::atomic<std::uint32_t> anon_{0};
};

// Read-only view of variable bindings.
class Bindings {
public:
    virtual ~Bindings() = default;
    virtual const Term* lookup(VarId v) const = 0;
};

class BindingMap : public Bindings {
public:
    const Term* lookup(VarId v) const override;
    void bind(VarId v, Term t) { map_[v] = std::move(t); }
    void erase(VarId v) { map_.erase(v); }
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<VarId, Term> map_;
};

Term fresh_var(VarPool& pool, std::optional<std::string> hint = std::nullopt);
Term mk_int(std::int64_t v);
Term mk_str(std::string s);
Term mk_pair(Term a, Term b);
Term mk_tuple(const std::vector<Term>& items);  // right-nested pairs
Term mk_expr(ExprOp op, Term a, Term b);
Term mk_empty();
Term mk_cons(Term elem, Term rest);
Term mk_set(const std::vector<Term>& elems, Term rest = nullptr);
Term mk_interval(std::int64_t lo, std::int64_t hi);
Term mk_ris(Term control, Term domain, Formula filter, Term pattern = nullptr,
            std::vector<Term> dummies = {}, bool strict = false);
// Same control/filter/pattern, different domain.
Term ris_with_domain(const Term& ris, Term domain);

bool is_var(const Term& t);
bool is_set_term(const Term& t);  // Empty, Cons, Interval, Ris
bool is_set_typed(const Term& t);  // set term or variable
bool is_int_typed(const Term& t);  // Int, Expr or Var

// Follow bindings until the top constructor is not a bound variable.
Term deref(const Term& t, const Bindings& b);
// Deep dereference. RIS filters and patterns are left untouched.
Term resolve(const Term& t, const Bindings& b);

// Structural identity (variables compared by id).
bool same(const Term& x, const Term& y);
std::size_t term_hash(const Term& t);

// Free variables, excluding RIS control variables and dummies.
std::set<VarId> free_vars(const Term& t);
// Free unbound variables reached through bindings (cycle safe).
std::set<VarId> free_vars(const Term& t, const Bindings& b);
bool is_ground(const Term& t, const Bindings& b);

// True if v occurs in t outside any RIS body (used by the occurs check).
bool occurs_outside_ris(VarId v, const Term& t, const Bindings& b);

using Subst = std::unordered_map<VarId, Term>;
Term subst(const Term& t, const Subst& s);

// Evaluate a ground integer term.
std::optional<std::int64_t> eval_int(const Term& t, const Bindings& b);

// Canonical ground value used for fast comparisons of ground terms.
// Sets are sorted and deduplicated. Returns nullopt if not ground or contains a RIS.
struct GroundValue;
using GroundPtr = std::shared_ptr<const GroundValue>;
struct GroundValue {
    enum Kind : std::uint8_t { Int, Str, Pair, Set } kind = Int;
    std::int64_t i = 0;
    std::string s;
    std::vector<GroundPtr> items;  // Pair: 2 items, Set: sorted unique
};
int ground_compare(const GroundValue& x, const GroundValue& y);
std::optional<GroundPtr> ground_value(const Term& t, const Bindings& b, std::size_t interval_limit = 4096);
Term term_of_ground(const GroundValue& g);

// Integer floor-style remainder with 0 <= r < m for m > 0.
std::optional<std::int64_t> int_mod(std::int64_t a, std::int64_t m);

}  // namespace setris
