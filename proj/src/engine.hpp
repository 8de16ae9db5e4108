// Internal rewriting engine shared by the solver, the set rules and the RIS rules.
#pragma once

#include <setris/formula.hpp>
#include <setris/int_solver.hpp>
#include <setris/ris.hpp>
#include <setris/store.hpp>

#include <utility>
#include <vector>

namespace setris::detail {

// One alternative produced by a rewrite: bindings applied first, then goals pushed.
struct Branch {
    std::vector<std::pair<Term, Term>> binds;
    std::vector<Formula> goals;
};

struct Step {
    enum class Kind : std::uint8_t { Fail, Rewrite, Suspend } kind = Kind::Rewrite;
    std::vector<Branch> branches;  // Rewrite: at least one
    std::vector<VarId> watch;      // Suspend

    static Step fail() { return {Kind::Fail, {}, {}}; }
    static Step done() { return {Kind::Rewrite, {Branch{}}, {}}; }
    static Step to(std::vector<Formula> goals) { return {Kind::Rewrite, {Branch{{}, std::move(goals)}}, {}}; }
    static Step bind(Term v, Term t) { return {Kind::Rewrite, {Branch{{{std::move(v), std::move(t)}}, {}}}, {}}; }
    static Step alt(std::vector<Branch> bs) { return {Kind::Rewrite, std::move(bs), {}}; }
    static Step suspend(std::vector<VarId> w) { return {Kind::Suspend, {}, std::move(w)}; }
};

struct Goals {
    struct Susp {
        Formula atom;
        std::vector<VarId> watch;
    };
    std::vector<Formula> stack;  // back is the next goal
    std::vector<Susp> susp;
    IntProps props;
};

class Search;

// Rewriting context handed to the rules.
struct Ctx {
    Store& st;
    Goals& g;
    Search& search;

    Term fresh() { return st.pool().fresh(); }
    Term d(const Term& t) const;  // dereference and normalize
};

// Dispatch one atom. Arguments are normalized inside.
Step rewrite(Ctx& c, const Formula& a);

// Set rules (unifier.cpp).
Step rw_eq(Ctx& c, const Term& a, const Term& b);
Step rw_neq(Ctx& c, const Term& a, const Term& b);
Step rw_in(Ctx& c, const Term& e, const Term& s);
Step rw_nin(Ctx& c, const Term& e, const Term& s);
Step rw_un(Ctx& c, const Term& a, const Term& b, const Term& r);
Step rw_disj(Ctx& c, const Term& a, const Term& b);
Step rw_subset(Ctx& c, const Term& a, const Term& b);
Step rw_size(Ctx& c, const Term& s, const Term& n);

// RIS rules (ris_engine.cpp).
Step ris_member(Ctx& c, const Term& e, const Term& r);
Step ris_not_member(Ctx& c, const Term& e, const Term& r);
Step ris_eq(Ctx& c, const Term& a, const Term& b);
// One lazy unfolding step of a RIS with a non-variable domain: calls k with the
// replacement term for each alternative; k returns the goals for that branch.
Step ris_lazy(Ctx& c, const Term& r, const std::function<std::vector<Formula>(const Term&)>& k);
// Peel the first domain element: returns (element, rest) for Cons/Interval domains.
std::optional<std::pair<Term, Term>> peel(Ctx& c, const Term& domain);

struct Instance {
    Formula filter;
    Term pattern;
    std::vector<Formula> eqs;  // control matching constraints, when structural matching fails
    bool nomatch = false;      // the element can never match the control term
};
// Instantiate the RIS for element z with fresh control variables and dummies.
Instance instantiate(Ctx& c, const RisTerm& r, const Term& z);

// Truth of an instantiated filter when it has no free unbound variables:
// evaluated by an isolated sub-search. nullopt if not decidable that way.
std::optional<bool> eval_closed(Ctx& c, const Formula& f);

// Variables whose binding can change the outcome of rewriting the terms.
std::vector<VarId> watch_of(const Store& st, std::initializer_list<Term> ts);

bool is_varlike(const Store& st, const Term& t);  // variable or RIS over a variable domain
bool is_var_ris(const Store& st, const Term& t);  // RIS over a variable domain

// Tail of a Cons chain after dereferencing.
Term chain_tail(const Store& st, const Term& t);

// Search over a shared Store; used for top-level solving and nested evaluation.
class Search {
public:
    Search(Store& st, int depth);
    Goals& goals() { return g_; }
    void push(const std::vector<Formula>& fs);
    void push(const Formula& f) { push(std::vector<Formula>{f}); }
    // Runs to the next solution (fixpoint). false when the search space is exhausted.
    bool run();
    // Continue after a solution: backtrack and run again.
    bool next();
    // Drop all choice points (commit to the current state).
    void commit() { cps_.clear(); }
    std::size_t choice_points() const { return cps_.size(); }
    int depth() const { return depth_; }
    bool label_ints = false;
    std::vector<VarId> label_vars;  // labeled at fixpoint when label_ints is set
    std::function<bool(VarId)> is_user_var;

private:
    struct ChoicePoint {
        std::size_t mark;
        Goals saved;
        std::vector<Branch> rest;  // remaining branches, next first
        std::size_t next = 0;
    };
    bool apply(const Branch& b);
    bool bind_checked(const Term& v, const Term& t);
    bool backtrack();
    void wake();
    bool fixpoint_work();

    Store& st_;
    Goals g_;
    std::vector<ChoicePoint> cps_;
    int depth_;
};

// Binding with the occurs check, integer-domain checks and domain merging.
bool bind_var(Store& st, const Term& v, const Term& t);

}  // namespace setris::detail
