#include <setris/admissibility.hpp>

#include <functional>
#include <map>
#include <set>

namespace setris {

namespace {

TPtr mk(TExpr::Kind k, TPtr a = nullptr, TPtr b = nullptr, Term v = nullptr) {
    auto e = std::make_shared<TExpr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    e->var = std::move(v);
    return e;
}

TPtr s_const() {
    static const TPtr s = mk(TExpr::Kind::S);
    return s;
}

// Argument-position classification of a set term.
TPtr classify(const Term& t) {
    switch (t->kind) {
        case TermKind::Var: return mk(TExpr::Kind::Unknown, nullptr, nullptr, t);
        case TermKind::Cons: return classify(t->b);
        case TermKind::Ris: {
            TPtr d = classify(t->ris->domain);
            return same(t->ris->pattern, t->ris->control) ? d : mk(TExpr::Kind::P, d);
        }
        default: return s_const();
    }
}

// Innermost domain variable of a variable or variable-RIS, if any.
std::optional<VarId> key_var(const Term& t) {
    if (t->kind == TermKind::Var) return t->id;
    if (t->kind == TermKind::Ris) return key_var(t->ris->domain);
    return std::nullopt;
}

void atom_vars(const Formula& a, std::set<VarId>& out) {
    std::function<void(const Term&)> walk = [&](const Term& t) {
        switch (t->kind) {
            case TermKind::Var: out.insert(t->id); break;
            case TermKind::Pair:
            case TermKind::Expr:
            case TermKind::Cons:
                walk(t->a);
                walk(t->b);
                break;
            case TermKind::Ris: walk(t->ris->domain); break;
            default: break;
        }
    };
    for (auto& t : a->args) walk(t);
}

bool set_like(const Term& t) { return t->kind == TermKind::Var || is_set_term(t); }

bool empty_set(const Term& t) {
    return t->kind == TermKind::Empty || (t->kind == TermKind::Interval && t->ival > t->hi);
}

Formula expand_tree(const Formula& f, VarPool& pool) {
    if (f->tag == FormulaNode::Tag::And) return conj(expand_tree(f->l, pool), expand_tree(f->r, pool));
    if (f->tag == FormulaNode::Tag::Or) return disj(expand_tree(f->l, pool), expand_tree(f->r, pool));
    if (is_derived(f->kind)) return expand_tree(expand_derived(f, pool), pool);
    return f;
}

bool p_reach(const TPtr& e) {
    if (e->kind == TExpr::Kind::P) return true;
    if (e->kind == TExpr::Kind::U) return p_reach(e->a) || p_reach(e->b);
    return false;
}

TPtr substitute(const TPtr& e, const std::map<VarId, TPtr>& defs, std::set<VarId>& path) {
    switch (e->kind) {
        case TExpr::Kind::S: return e;
        case TExpr::Kind::P: return mk(TExpr::Kind::P, substitute(e->a, defs, path));
        case TExpr::Kind::U: return mk(TExpr::Kind::U, substitute(e->a, defs, path), substitute(e->b, defs, path));
        case TExpr::Kind::Unknown: {
            VarId v = e->var->id;
            auto it = defs.find(v);
            if (it == defs.end() || path.count(v)) return e;
            path.insert(v);
            TPtr r = substitute(it->second, defs, path);
            path.erase(v);
            return r;
        }
    }
    return e;
}

// Replace X by t everywhere when X = t names a non-recursive term.
void inline_definitions(Conjunct& atoms) {
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < atoms.size() && !changed; ++i) {
            const Formula& a = atoms[i];
            if (a->kind != AtomKind::Eq) continue;
            for (int side = 0; side < 2 && !changed; ++side) {
                Term x = a->args[side], t = a->args[1 - side];
                if (x->kind != TermKind::Var || t->kind == TermKind::Var) continue;
                if (free_vars(t).count(x->id)) continue;
                Subst sub{{x->id, t}};
                Conjunct rest;
                for (std::size_t j = 0; j < atoms.size(); ++j)
                    if (j != i) rest.push_back(subst(atoms[j], sub));
                atoms = std::move(rest);
                changed = true;
            }
        }
    }
}

}  // namespace

std::string render(const TPtr& t) {
    switch (t->kind) {
        case TExpr::Kind::S: return "S";
        case TExpr::Kind::P: return "P(" + render(t->a) + ")";
        case TExpr::Kind::U: return "U(" + render(t->a) + "," + render(t->b) + ")";
        case TExpr::Kind::Unknown: return "T(" + (t->var->name.empty() ? "_V" + std::to_string(t->var->id) : t->var->name) + ")";
    }
    return "?";
}

std::vector<std::vector<Formula>> tau(const Formula& f, VarPool& pool) {
    std::vector<std::vector<Formula>> out;
    for (Conjunct conj_atoms : to_dnf(expand_tree(f, pool))) {
        inline_definitions(conj_atoms);
        std::vector<std::set<VarId>> vars(conj_atoms.size());
        for (std::size_t i = 0; i < conj_atoms.size(); ++i) atom_vars(conj_atoms[i], vars[i]);
        auto elsewhere = [&](VarId v, std::size_t self) {
            for (std::size_t j = 0; j < conj_atoms.size(); ++j)
                if (j != self && vars[j].count(v)) return true;
            return false;
        };
        std::vector<Formula> unions;
        for (std::size_t i = 0; i < conj_atoms.size(); ++i) {
            const Formula& a = conj_atoms[i];
            const auto& x = a->args;
            if (a->kind == AtomKind::Un) {
                bool drop = true;
                for (auto& t : x) {
                    auto k = key_var(t);
                    if (!k || elsewhere(*k, i)) drop = false;
                }
                if (!drop) unions.push_back(a);
            } else if (a->kind == AtomKind::Eq && set_like(x[0]) && set_like(x[1]) && !empty_set(x[0]) &&
                       !empty_set(x[1])) {
                unions.push_back(un(x[0], x[1], x[1]));
                unions.push_back(un(x[1], x[0], x[0]));
            }
        }
        // Hoist partially specified extensional arguments into their own union.
        std::vector<Formula> hoisted;
        for (auto& u : unions) {
            std::vector<Term> args = u->args;
            for (auto& t : args) {
                if (t->kind != TermKind::Cons) continue;
                std::vector<Term> elems;
                Term tail = t;
                for (; tail->kind == TermKind::Cons; tail = tail->b) elems.push_back(tail->a);
                if (tail->kind == TermKind::Empty) continue;
                Term n = pool.fresh();
                hoisted.push_back(un(mk_set(elems), tail, n));
                t = n;
            }
            hoisted.push_back(atom(AtomKind::Un, args));
        }
        out.push_back(std::move(hoisted));
    }
    return out;
}

std::vector<TEquation> t_classify(const std::vector<Formula>& unions) {
    std::vector<TEquation> eqs;
    for (auto& u : unions)
        eqs.push_back({classify(u->args[2]), mk(TExpr::Kind::U, classify(u->args[0]), classify(u->args[1]))});
    return eqs;
}

Verdict check_admissible(const Formula& f, VarPool& pool) {
    Verdict v;
    for (auto& unions : tau(f, pool)) {
        std::vector<TEquation> eqs = t_classify(unions);
        std::map<VarId, TPtr> defs;
        for (auto& e : eqs)
            if (e.lhs->kind == TExpr::Kind::Unknown) defs.emplace(e.lhs->var->id, e.rhs);
        for (auto& e : eqs) {
            std::set<VarId> path;
            if (e.lhs->kind == TExpr::Kind::Unknown) path.insert(e.lhs->var->id);
            TEquation s{e.lhs, substitute(e.rhs, defs, path)};
            v.equations.push_back(s);
            bool x = p_reach(s.lhs), y = p_reach(s.rhs->a), z = p_reach(s.rhs->b);
            if (v.admissible && ((x && (!y || !z)) || ((y || z) && !x))) {
                v.admissible = false;
                v.witness = s;
            }
        }
    }
    return v;
}

}  // namespace setris
