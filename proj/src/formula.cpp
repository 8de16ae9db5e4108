#include <setris/formula.hpp>

#include <cassert>

namespace setris {

namespace {

Formula mk(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

void hash_mix(std::size_t& h, std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); }

}  // namespace

std::size_t arity(AtomKind k) {
    switch (k) {
        case AtomKind::Un:
        case AtomKind::Inters:
        case AtomKind::Diff:
        case AtomKind::Nun:
        case AtomKind::Ninters:
        case AtomKind::Ndiff:
            return 3;
        case AtomKind::TrueC:
        case AtomKind::FalseC:
            return 0;
        default:
            return 2;
    }
}

const char* kind_name(AtomKind k) {
    switch (k) {
        case AtomKind::Eq: return "=";
        case AtomKind::Neq: return "neq";
        case AtomKind::In: return "in";
        case AtomKind::Nin: return "nin";
        case AtomKind::Un: return "un";
        case AtomKind::Disj: return "disj";
        case AtomKind::Subset: return "subset";
        case AtomKind::Inters: return "inters";
        case AtomKind::Diff: return "diff";
        case AtomKind::Nun: return "nun";
        case AtomKind::Ndisj: return "ndisj";
        case AtomKind::Nsubset: return "nsubset";
        case AtomKind::Ninters: return "ninters";
        case AtomKind::Ndiff: return "ndiff";
        case AtomKind::Size: return "size";
        case AtomKind::Le: return "<=";
        case AtomKind::Lt: return "<";
        case AtomKind::Ge: return ">=";
        case AtomKind::Gt: return ">";
        case AtomKind::IntEq: return "=";
        case AtomKind::IntNeq: return "neq";
        case AtomKind::TrueC: return "true";
        case AtomKind::FalseC: return "false";
        case AtomKind::Label: return "label";
    }
    return "?";
}

bool is_primitive(AtomKind k) {
    switch (k) {
        case AtomKind::Eq:
        case AtomKind::Neq:
        case AtomKind::In:
        case AtomKind::Nin:
        case AtomKind::Un:
        case AtomKind::Disj:
            return true;
        default:
            return is_int_atom(k);
    }
}

bool is_derived(AtomKind k) {
    switch (k) {
        case AtomKind::Subset:
        case AtomKind::Inters:
        case AtomKind::Diff:
        case AtomKind::Nun:
        case AtomKind::Ndisj:
        case AtomKind::Nsubset:
        case AtomKind::Ninters:
        case AtomKind::Ndiff:
            return true;
        default:
            return false;
    }
}

bool is_int_atom(AtomKind k) {
    switch (k) {
        case AtomKind::Le:
        case AtomKind::Lt:
        case AtomKind::Ge:
        case AtomKind::Gt:
        case AtomKind::IntEq:
        case AtomKind::IntNeq:
            return true;
        default:
            return false;
    }
}

Formula atom(AtomKind k, std::vector<Term> args) {
    if (args.size() != arity(k)) throw TypeError(std::string("wrong number of arguments for ") + kind_name(k));
    for (auto& a : args)
        if (!a) throw TypeError("null term argument");
    FormulaNode n;
    n.kind = k;
    n.args = std::move(args);
    return mk(std::move(n));
}

Formula conj(Formula a, Formula b) {
    FormulaNode n;
    n.tag = FormulaNode::Tag::And;
    n.l = std::move(a);
    n.r = std::move(b);
    return mk(std::move(n));
}

Formula disj(Formula a, Formula b) {
    FormulaNode n;
    n.tag = FormulaNode::Tag::Or;
    n.l = std::move(a);
    n.r = std::move(b);
    return mk(std::move(n));
}

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return truec();
    Formula f = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) f = conj(fs[i], f);
    return f;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return falsec();
    Formula f = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) f = disj(fs[i], f);
    return f;
}

Formula truec() {
    static const Formula t = atom(AtomKind::TrueC);
    return t;
}

Formula falsec() {
    static const Formula f = atom(AtomKind::FalseC);
    return f;
}

Formula eq(Term a, Term b) { return atom(AtomKind::Eq, {std::move(a), std::move(b)}); }
Formula neq(Term a, Term b) { return atom(AtomKind::Neq, {std::move(a), std::move(b)}); }
Formula in(Term e, Term s) { return atom(AtomKind::In, {std::move(e), std::move(s)}); }
Formula nin(Term e, Term s) { return atom(AtomKind::Nin, {std::move(e), std::move(s)}); }
Formula un(Term a, Term b, Term c) { return atom(AtomKind::Un, {std::move(a), std::move(b), std::move(c)}); }
Formula disj_c(Term a, Term b) { return atom(AtomKind::Disj, {std::move(a), std::move(b)}); }
Formula subset(Term a, Term b) { return atom(AtomKind::Subset, {std::move(a), std::move(b)}); }
Formula size_c(Term s, Term n) { return atom(AtomKind::Size, {std::move(s), std::move(n)}); }
Formula le(Term a, Term b) { return atom(AtomKind::Le, {std::move(a), std::move(b)}); }
Formula lt(Term a, Term b) { return atom(AtomKind::Lt, {std::move(a), std::move(b)}); }
Formula ge(Term a, Term b) { return atom(AtomKind::Ge, {std::move(a), std::move(b)}); }
Formula gt(Term a, Term b) { return atom(AtomKind::Gt, {std::move(a), std::move(b)}); }

Formula expand_derived(const Formula& f, VarPool& pool) {
    assert(f->tag == FormulaNode::Tag::Atom);
    const auto& a = f->args;
    switch (f->kind) {
        case AtomKind::Subset:
            return un(a[0], a[1], a[1]);
        case AtomKind::Inters: {
            Term d1 = pool.fresh(), d2 = pool.fresh();
            return conj_all({un(a[2], d1, a[0]), un(a[2], d2, a[1]), disj_c(d1, d2)});
        }
        case AtomKind::Diff: {
            Term n = pool.fresh();
            return conj_all({un(a[2], n, a[0]), disj_c(a[1], a[2]), subset(n, a[1])});
        }
        case AtomKind::Nsubset: {
            Term n = pool.fresh();
            return conj(in(n, a[0]), nin(n, a[1]));
        }
        case AtomKind::Ndisj: {
            Term n = pool.fresh();
            return conj(in(n, a[0]), in(n, a[1]));
        }
        case AtomKind::Nun: {
            Term n = pool.fresh();
            return disj_all({conj_all({in(n, a[2]), nin(n, a[0]), nin(n, a[1])}), conj(in(n, a[0]), nin(n, a[2])),
                             conj(in(n, a[1]), nin(n, a[2]))});
        }
        case AtomKind::Ninters: {
            Term n = pool.fresh();
            return disj(conj(in(n, a[2]), disj(nin(n, a[0]), nin(n, a[1]))),
                        conj_all({in(n, a[0]), in(n, a[1]), nin(n, a[2])}));
        }
        case AtomKind::Ndiff: {
            Term n = pool.fresh();
            return disj(conj(in(n, a[2]), disj(nin(n, a[0]), in(n, a[1]))),
                        conj_all({in(n, a[0]), nin(n, a[1]), nin(n, a[2])}));
        }
        default:
            throw std::logic_error(std::string("expand_derived on primitive kind ") + kind_name(f->kind));
    }
}

std::vector<Conjunct> to_dnf(const Formula& f) {
    switch (f->tag) {
        case FormulaNode::Tag::Atom:
            return {{f}};
        case FormulaNode::Tag::Or: {
            auto l = to_dnf(f->l);
            auto r = to_dnf(f->r);
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case FormulaNode::Tag::And: {
            auto l = to_dnf(f->l);
            auto r = to_dnf(f->r);
            std::vector<Conjunct> out;
            out.reserve(l.size() * r.size());
            for (auto& x : l)
                for (auto& y : r) {
                    Conjunct c = x;
                    c.insert(c.end(), y.begin(), y.end());
                    out.push_back(std::move(c));
                }
            return out;
        }
    }
    return {};
}

void flatten_and(const Formula& f, std::vector<Formula>& out) {
    if (f->tag == FormulaNode::Tag::And) {
        flatten_and(f->l, out);
        flatten_and(f->r, out);
    } else {
        out.push_back(f);
    }
}

Formula subst(const Formula& f, const Subst& s) {
    if (s.empty()) return f;
    if (f->tag == FormulaNode::Tag::Atom) {
        bool changed = false;
        std::vector<Term> args;
        args.reserve(f->args.size());
        for (auto& a : f->args) {
            args.push_back(subst(a, s));
            changed |= args.back() != a;
        }
        if (!changed) return f;
        FormulaNode n;
        n.kind = f->kind;
        n.args = std::move(args);
        return mk(std::move(n));
    }
    Formula l = subst(f->l, s), r = subst(f->r, s);
    if (l == f->l && r == f->r) return f;
    return f->tag == FormulaNode::Tag::And ? conj(l, r) : disj(l, r);
}

void collect_free_vars(const Formula& f, std::set<VarId>& out) {
    if (f->tag == FormulaNode::Tag::Atom) {
        for (auto& a : f->args) {
            auto v = free_vars(a);
            out.insert(v.begin(), v.end());
        }
        return;
    }
    collect_free_vars(f->l, out);
    collect_free_vars(f->r, out);
}

bool same(const Formula& x, const Formula& y) {
    if (x.get() == y.get()) return true;
    if (x->tag != y->tag) return false;
    if (x->tag == FormulaNode::Tag::Atom) {
        if (x->kind != y->kind || x->args.size() != y->args.size()) return false;
        for (std::size_t i = 0; i < x->args.size(); ++i)
            if (!same(x->args[i], y->args[i])) return false;
        return true;
    }
    return same(x->l, y->l) && same(x->r, y->r);
}

std::size_t formula_hash(const Formula& f) {
    std::size_t h = static_cast<std::size_t>(f->tag) * 2654435761u;
    if (f->tag == FormulaNode::Tag::Atom) {
        hash_mix(h, static_cast<std::size_t>(f->kind));
        for (auto& a : f->args) hash_mix(h, term_hash(a));
        return h;
    }
    hash_mix(h, formula_hash(f->l));
    hash_mix(h, formula_hash(f->r));
    return h;
}

}  // namespace setris
