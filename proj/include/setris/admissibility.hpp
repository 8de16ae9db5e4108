// Syntactic classifier: is the solver guaranteed to terminate on a formula?
#pragma once

#include <setris/formula.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace setris {

// Shape of a set term as seen by the classifier.
struct TExpr;
using TPtr = std::shared_ptr<const TExpr>;
struct TExpr {
    enum class Kind : std::uint8_t { S, P, U, Unknown } kind = Kind::S;
    TPtr a, b;        // P: a; U: a, b
    Term var;         // Unknown: the variable it stands for
};
std::string render(const TPtr& t);

struct TEquation {
    TPtr lhs, rhs;  // rhs is always U(y, z)
};

struct Verdict {
    bool admissible = true;
    std::optional<TEquation> witness;  // present when not admissible
    std::vector<TEquation> equations;  // after substitution
};

// Union-constraint conjunctions, one per disjunct of the set part.
// Fresh variables come from pool.
std::vector<std::vector<Formula>> tau(const Formula& f, VarPool& pool);

// Equalities for the union constraints, before substitution.
std::vector<TEquation> t_classify(const std::vector<Formula>& unions);

Verdict check_admissible(const Formula& f, VarPool& pool);

}  // namespace setris
