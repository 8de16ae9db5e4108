// Expansion of intensional sets into extensional ones.
#pragma once

#include <setris/formula.hpp>
#include <setris/terms.hpp>

namespace setris {

class Solver;

// Empty domain, or a domain with at least one ground element and a filter
// whose outer variables are all bound to ground values.
bool is_expandable(Solver& s, const Term& ris);

// Extensional set of pattern values, in domain order, without duplicates.
// Throws NotExpandable when the domain or filter is not ground.
Term expand(Solver& s, const Term& ris);

// Filter negation; throws UnsafeRis when the RIS has dummy variables.
Formula negate_filter(const Formula& f, const std::vector<Term>& dummies, VarPool& pool);

}  // namespace setris
