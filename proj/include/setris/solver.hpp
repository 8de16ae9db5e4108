// Public solver API: post formulas, solve, enumerate solutions.
#pragma once

#include <setris/formula.hpp>
#include <setris/store.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace setris {

namespace detail {
class Search;
struct Goals;
}

enum class Outcome : std::uint8_t { Success, Failure, ResourceLimit };
const char* outcome_name(Outcome o);

struct Solution {
    // Named variables with their resolved values (unbound ones map to themselves).
    std::vector<std::pair<Term, Term>> bindings;
    // Residual solved-form atoms, resolved against the bindings.
    std::vector<Formula> residue;
    // Domains of unbound integer variables that appear in the output.
    std::vector<std::pair<VarId, IntDomain>> domains;
};

class Solver {
public:
    explicit Solver(SolverOptions opts = {});
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    VarPool& pool() { return pool_; }
    Store& store() { return store_; }
    const SolverOptions& options() const { return store_.options(); }
    void set_options(const SolverOptions& o);

    // A named variable; the same name yields the same variable.
    Term var(const std::string& name);
    const std::map<std::string, Term>& named() const { return named_; }

    // Queue a formula; nothing is solved until solve/check.
    void add(const Formula& f);

    // Rewrite to solved form, committing to the first solution.
    // On Failure or ResourceLimit the store returns to its state before the call.
    Outcome solve();
    // solve() as a boolean; ResourceLimit is raised as an exception.
    bool check();
    // Next solution of the most recent solve(); Failure when exhausted, which
    // restores the pre-solve state.
    Outcome next_solution();

    // Current solution (valid after Success).
    Solution solution() const;
    // Residual atoms of the current state.
    std::vector<Formula> residue() const;
    std::string last_error() const { return last_error_; }
    std::size_t last_steps() const { return last_steps_; }

    // Label integer variables at solutions (values in ascending order).
    void set_labeling(bool on) { labeling_ = on; }
    // Explicit variables to label (used by the CLI "label" predicate); empty = all output vars.
    void label(const Term& v);

    // Drop queued formulas that were never solved.
    void discard_pending();
    // Forget everything: bindings, residue, named variables.
    void reset();

    bool is_solved_form(const Formula& a);

private:
    Outcome run(bool first);

    VarPool pool_;
    Store store_;
    std::map<std::string, Term> named_;
    std::vector<Formula> pending_;
    std::unique_ptr<detail::Search> search_;
    std::size_t root_mark_ = 0;
    std::unique_ptr<detail::Goals> saved_;  // goals before the current solve
    std::vector<Term> order_;  // named variables in creation order
    bool labeling_ = false;
    std::vector<VarId> label_vars_;
    std::string last_error_;
    std::size_t last_steps_ = 0;
};

}  // namespace setris
