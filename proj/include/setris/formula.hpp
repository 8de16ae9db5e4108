// Constraint algebra: atoms, conjunction, disjunction.
#pragma once

#include <setris/terms.hpp>

#include <string>
#include <vector>

namespace setris {

enum class AtomKind : std::uint8_t {
    Eq, Neq, In, Nin, Un, Disj,
    Subset, Inters, Diff, Nun, Ndisj, Nsubset, Ninters, Ndiff,
    Size,
    Le, Lt, Ge, Gt, IntEq, IntNeq,
    TrueC, FalseC,
    Label,  // label(v, from): enumerate the values of v that are >= from
};

struct FormulaNode {
    enum class Tag : std::uint8_t { Atom, And, Or } tag = Tag::Atom;
    AtomKind kind = AtomKind::TrueC;
    std::vector<Term> args;
    Formula l, r;
};

std::size_t arity(AtomKind k);
const char* kind_name(AtomKind k);
bool is_primitive(AtomKind k);
bool is_derived(AtomKind k);
bool is_int_atom(AtomKind k);

Formula atom(AtomKind k, std::vector<Term> args = {});
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula conj_all(const std::vector<Formula>& fs);  // empty -> true
Formula disj_all(const std::vector<Formula>& fs);  // empty -> false
Formula truec();
Formula falsec();

// Shorthands.
Formula eq(Term a, Term b);
Formula neq(Term a, Term b);
Formula in(Term e, Term s);
Formula nin(Term e, Term s);
Formula un(Term a, Term b, Term c);
Formula disj_c(Term a, Term b);
Formula subset(Term a, Term b);
Formula size_c(Term s, Term n);
Formula le(Term a, Term b);
Formula lt(Term a, Term b);
Formula ge(Term a, Term b);
Formula gt(Term a, Term b);

// Rewrite a derived atom into primitive atoms with fresh variables.
Formula expand_derived(const Formula& a, VarPool& pool);

using Conjunct = std::vector<Formula>;  // atoms only
std::vector<Conjunct> to_dnf(const Formula& f);

// Flatten top-level conjunction into a list (Or nodes kept as items).
void flatten_and(const Formula& f, std::vector<Formula>& out);

Formula subst(const Formula& f, const Subst& s);
void collect_free_vars(const Formula& f, std::set<VarId>& out);
bool same(const Formula& x, const Formula& y);
std::size_t formula_hash(const Formula& f);

}  // namespace setris
