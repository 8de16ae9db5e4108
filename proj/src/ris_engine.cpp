// Rewrite rules for restricted intensional sets.
#include "engine.hpp"

#include <setris/ris.hpp>
#include <setris/solver.hpp>

namespace setris::detail {

namespace {

// Copy of t with every variable replaced by a fresh one (recorded in map).
Term fresh_copy(Ctx& c, const Term& t, Subst& map) {
    switch (t->kind) {
        case TermKind::Var: {
            auto it = map.find(t->id);
            if (it != map.end()) return it->second;
            Term v = c.fresh();
            map[t->id] = v;
            return v;
        }
        case TermKind::Pair:
            return mk_pair(fresh_copy(c, t->a, map), fresh_copy(c, t->b, map));
        default:
            return t;
    }
}

void match(Ctx& c, const Term& ctrl, const Term& z, Subst& map, Instance& inst) {
    switch (ctrl->kind) {
        case TermKind::Var: {
            auto it = map.find(ctrl->id);
            if (it != map.end())
                inst.eqs.push_back(eq(it->second, z));
            else
                map[ctrl->id] = z;
            return;
        }
        case TermKind::Pair: {
            Term zz = c.d(z);
            if (zz->kind == TermKind::Pair) {
                match(c, ctrl->a, zz->a, map, inst);
                match(c, ctrl->b, zz->b, map, inst);
            } else if (zz->kind == TermKind::Var) {
                inst.eqs.push_back(eq(zz, fresh_copy(c, ctrl, map)));
            } else {
                inst.nomatch = true;
            }
            return;
        }
        default:
            inst.eqs.push_back(eq(ctrl, z));
            return;
    }
}

bool closed_var(const Store& st, VarId v) {
    const Term* b = st.lookup(v);
    return b && free_vars(*b, st).empty();
}

// Filter and pattern are determined by the control value alone, and every
// outer variable they mention is bound to a ground value.
bool closed_ris(const Store& st, const RisTerm& r) {
    std::set<VarId> fv;
    collect_free_vars(r.filter, fv);
    for (VarId v : free_vars(r.pattern)) {
        for (auto& d : r.dummies)
            if (d->id == v) return false;
        fv.insert(v);
    }
    for (VarId v : fv) {
        if (std::find(r.bound.begin(), r.bound.end(), v) != r.bound.end()) continue;
        if (!closed_var(st, v)) return false;
    }
    return true;
}

std::optional<ExpansionCache::Value> eval_elem(Ctx& c, const Term& ris, const Term& z) {
    const RisTerm& r = *ris->ris;
    if (!is_ground(z, c.st)) return std::nullopt;
    auto gz = ground_value(z, c.st);
    if (!gz || !closed_ris(c.st, r)) return std::nullopt;
    ExpansionCache::Key key{r.control.get(), r.filter.get(), r.pattern.get(), ground_key(**gz)};
    if (const auto* v = c.st.cache_get(key)) return *v;
    Instance inst = instantiate(c, r, z);
    ExpansionCache::Value val;
    if (!inst.nomatch) {
        std::vector<Formula> g = inst.eqs;
        g.push_back(inst.filter);
        val.pass = *eval_closed(c, conj_all(g));
        if (val.pass) {
            // The control value is ground, so the pattern evaluates directly.
            val.pattern = resolve(inst.pattern, c.st);
            if (!inst.eqs.empty() || !is_ground(val.pattern, c.st)) return std::nullopt;
        }
    }
    c.st.cache_put(key, val);
    return val;
}

bool ground_equal(const Store& st, const Term& a, const Term& b) {
    auto ga = ground_value(a, st), gb = ground_value(b, st);
    return ga && gb && ground_compare(**ga, **gb) == 0;
}

// Instance over a fresh copy of the control term, used when the domain is a variable.
std::pair<Term, Instance> fresh_instance(Ctx& c, const RisTerm& r) {
    Subst m;
    Term zc = fresh_copy(c, r.control, m);
    return {zc, instantiate(c, r, zc)};
}

std::vector<Formula> cat(std::vector<Formula> a, const std::vector<Formula>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

std::optional<std::pair<Term, Term>> peel(Ctx& c, const Term& domain) {
    Term d = c.d(domain);
    if (d->kind == TermKind::Cons) return std::make_pair(d->a, d->b);
    if (d->kind == TermKind::Interval) return std::make_pair(mk_int(d->ival), mk_interval(d->ival + 1, d->hi));
    return std::nullopt;
}

Instance instantiate(Ctx& c, const RisTerm& r, const Term& z) {
    Instance inst;
    Subst map;
    match(c, r.control, z, map, inst);
    for (VarId v : r.bound)
        if (!map.count(v)) map[v] = c.fresh();
    inst.filter = subst(r.filter, map);
    inst.pattern = subst(r.pattern, map);
    return inst;
}

Formula negate_impl(const Formula& f, const std::vector<Term>& dummies, VarPool& pool) {
    if (!dummies.empty()) throw UnsafeRis("negating a RIS filter with dummy variables");
    if (f->tag == FormulaNode::Tag::And)
        return disj(negate_impl(f->l, dummies, pool), negate_impl(f->r, dummies, pool));
    if (f->tag == FormulaNode::Tag::Or)
        return conj(negate_impl(f->l, dummies, pool), negate_impl(f->r, dummies, pool));
    const auto& a = f->args;
    auto flip = [&](AtomKind k) { return atom(k, a); };
    switch (f->kind) {
        case AtomKind::Eq: return flip(AtomKind::Neq);
        case AtomKind::Neq: return flip(AtomKind::Eq);
        case AtomKind::In: return flip(AtomKind::Nin);
        case AtomKind::Nin: return flip(AtomKind::In);
        case AtomKind::Subset: return flip(AtomKind::Nsubset);
        case AtomKind::Nsubset: return flip(AtomKind::Subset);
        case AtomKind::Un: return flip(AtomKind::Nun);
        case AtomKind::Nun: return flip(AtomKind::Un);
        case AtomKind::Disj: return flip(AtomKind::Ndisj);
        case AtomKind::Ndisj: return flip(AtomKind::Disj);
        case AtomKind::Inters: return flip(AtomKind::Ninters);
        case AtomKind::Ninters: return flip(AtomKind::Inters);
        case AtomKind::Diff: return flip(AtomKind::Ndiff);
        case AtomKind::Ndiff: return flip(AtomKind::Diff);
        case AtomKind::Le: return flip(AtomKind::Gt);
        case AtomKind::Gt: return flip(AtomKind::Le);
        case AtomKind::Lt: return flip(AtomKind::Ge);
        case AtomKind::Ge: return flip(AtomKind::Lt);
        case AtomKind::IntEq: return flip(AtomKind::IntNeq);
        case AtomKind::IntNeq: return flip(AtomKind::IntEq);
        case AtomKind::TrueC: return falsec();
        case AtomKind::FalseC: return truec();
        case AtomKind::Size: {
            Term m = pool.fresh();
            return conj(size_c(a[0], m), neq(m, a[1]));
        }
        case AtomKind::Label: return truec();
    }
    return truec();
}

Step ris_lazy(Ctx& c, const Term& R, const std::function<std::vector<Formula>(const Term&)>& k) {
    const RisTerm& r = *R->ris;
    Term dom = c.d(r.domain);
    if (dom->kind == TermKind::Ris) {
        if (is_var_ris(c.st, dom)) return Step::suspend(watch_of(c.st, {R}));
        return ris_lazy(c, dom, [&](const Term& rep) { return k(ris_with_domain(R, rep)); });
    }
    if (dom->kind == TermKind::Empty) return Step::to(k(mk_empty()));
    if (dom->kind == TermKind::Var) return Step::suspend(watch_of(c.st, {R}));
    auto pe = peel(c, dom);
    if (!pe) return Step::fail();
    auto [z, rest] = *pe;
    Term Rr = ris_with_domain(R, rest);
    if (auto v = eval_elem(c, R, z)) return Step::to(k(v->pass ? mk_cons(v->pattern, Rr) : Rr));
    Instance inst = instantiate(c, r, z);
    if (inst.nomatch) return Step::to(k(Rr));
    Formula neg = negate_impl(inst.filter, r.dummies, c.st.pool());
    return Step::alt({
        Branch{{}, cat(cat(inst.eqs, {inst.filter}), k(mk_cons(inst.pattern, Rr)))},
        Branch{{}, cat(cat(inst.eqs, {neg}), k(Rr))},
    });
}

Step ris_member(Ctx& c, const Term& e0, const Term& R) {
    Term e = c.d(e0);
    const RisTerm& r = *R->ris;
    Term dom = c.d(r.domain);
    switch (dom->kind) {
        case TermKind::Empty:
            return Step::fail();
        case TermKind::Var: {
            auto [zc, inst] = fresh_instance(c, r);
            Term n = c.fresh();
            // Bind the control through the pattern before the domain grows, so
            // constraints woken by the new element see its instantiated form.
            std::vector<Formula> g{eq(e, inst.pattern)};
            g = cat(cat(g, inst.eqs), {eq(dom, mk_cons(zc, n)), inst.filter});
            return Step::to(std::move(g));
        }
        case TermKind::Ris: {
            auto [zc, inst] = fresh_instance(c, r);
            std::vector<Formula> g{in(zc, dom), eq(e, inst.pattern)};
            return Step::to(cat(cat(g, inst.eqs), {inst.filter}));
        }
        case TermKind::Cons:
        case TermKind::Interval:
            break;
        default:
            return Step::fail();
    }
    auto [z, rest] = *peel(c, dom);
    Term Rr = ris_with_domain(R, rest);
    bool e_ground = is_ground(e, c.st);
    if (is_ground(z, c.st) && closed_ris(c.st, r)) {
        if (e_ground) {
            // Compare the pattern first; the filter only matters on a match.
            Instance probe = instantiate(c, r, z);
            if (probe.nomatch) return Step::to({in(e, Rr)});
            if (probe.eqs.empty()) {
                Term p = resolve(probe.pattern, c.st);
                if (is_ground(p, c.st) && !ground_equal(c.st, p, e)) return Step::to({in(e, Rr)});
            }
        }
        if (auto v = eval_elem(c, R, z)) {
            if (!v->pass) return Step::to({in(e, Rr)});
            if (e_ground && ground_equal(c.st, e, v->pattern)) return Step::done();
            return Step::alt({Branch{{}, {eq(e, v->pattern)}}, Branch{{}, {in(e, Rr)}}});
        }
    }
    Instance inst = instantiate(c, r, z);
    if (inst.nomatch) return Step::to({in(e, Rr)});
    std::vector<Formula> g{eq(e, inst.pattern)};
    return Step::alt({Branch{{}, cat(cat(g, inst.eqs), {inst.filter})}, Branch{{}, {in(e, Rr)}}});
}

Step ris_not_member(Ctx& c, const Term& e0, const Term& R) {
    Term e = c.d(e0);
    const RisTerm& r = *R->ris;
    Term dom = c.d(r.domain);
    switch (dom->kind) {
        case TermKind::Empty:
            return Step::done();
        case TermKind::Var:
            return Step::suspend(watch_of(c.st, {e, R}));
        case TermKind::Ris:
            return ris_lazy(c, R, [&](const Term& rep) { return std::vector<Formula>{nin(e, rep)}; });
        case TermKind::Cons:
        case TermKind::Interval:
            break;
        default:
            return Step::done();
    }
    auto [z, rest] = *peel(c, dom);
    Term Rr = ris_with_domain(R, rest);
    if (auto v = eval_elem(c, R, z)) {
        if (!v->pass) return Step::to({nin(e, Rr)});
        return Step::to({neq(e, v->pattern), nin(e, Rr)});
    }
    Instance inst = instantiate(c, r, z);
    if (inst.nomatch) return Step::to({nin(e, Rr)});
    Formula neg = negate_impl(inst.filter, r.dummies, c.st.pool());
    return Step::alt({
        Branch{{}, cat(inst.eqs, {neg, nin(e, Rr)})},
        Branch{{}, cat(inst.eqs, {neq(e, inst.pattern), nin(e, Rr)})},
    });
}

Step ris_eq(Ctx& c, const Term& a, const Term& b) {
    Term R = a, T = b;
    if (R->kind != TermKind::Ris) std::swap(R, T);
    if (T->kind == TermKind::Ris) {
        bool rv = is_var_ris(c.st, R), tv = is_var_ris(c.st, T);
        if (rv && tv) return Step::suspend(watch_of(c.st, {R, T}));
        if (rv) std::swap(R, T);
    }
    const RisTerm& r = *R->ris;
    Term dom = c.d(r.domain);
    if (dom->kind == TermKind::Var) {
        switch (T->kind) {
            case TermKind::Empty:
                return Step::suspend(watch_of(c.st, {R}));
            case TermKind::Cons: {
                auto [zc, inst] = fresh_instance(c, r);
                Term n = c.fresh();
                std::vector<Formula> g{eq(T->a, inst.pattern)};
                g = cat(cat(g, inst.eqs), {inst.filter, eq(ris_with_domain(R, n), T->b)});
                return Step{Step::Kind::Rewrite, {Branch{{{dom, mk_cons(zc, n)}}, std::move(g)}}, {}};
            }
            case TermKind::Interval:
                return Step::to({eq(R, mk_cons(mk_int(T->ival), mk_interval(T->ival + 1, T->hi)))});
            default:
                return Step::fail();
        }
    }
    if (!is_set_term(T)) return Step::fail();
    if (T->kind == TermKind::Empty && dom->kind != TermKind::Ris) {
        auto pe = peel(c, dom);
        if (!pe) return Step::fail();
        auto [z, rest] = *pe;
        Term Rr = ris_with_domain(R, rest);
        if (auto v = eval_elem(c, R, z)) return v->pass ? Step::fail() : Step::to({eq(Rr, mk_empty())});
        Instance inst = instantiate(c, r, z);
        if (inst.nomatch) return Step::to({eq(Rr, mk_empty())});
        Formula neg = negate_impl(inst.filter, r.dummies, c.st.pool());
        return Step::to(cat(inst.eqs, {neg, eq(Rr, mk_empty())}));
    }
    return ris_lazy(c, R, [&](const Term& rep) { return std::vector<Formula>{eq(rep, T)}; });
}

}  // namespace setris::detail

namespace setris {

namespace {

struct Scratch {
    detail::Goals goals;
    detail::Search search;
    detail::Ctx ctx;
    explicit Scratch(Store& st) : search(st, 1), ctx{st, goals, search} {}
};

}  // namespace

bool is_expandable(Solver& s, const Term& t) {
    Store& st = s.store();
    Term r = deref(t, st);
    if (r->kind == TermKind::Empty) return true;
    if (r->kind != TermKind::Ris) return false;
    Term dom = deref(r->ris->domain, st);
    if (dom->kind == TermKind::Empty) return true;
    bool has_ground = false;
    if (dom->kind == TermKind::Interval) has_ground = true;
    for (Term x = dom; x->kind == TermKind::Cons; x = deref(x->b, st))
        if (is_ground(x->a, st)) has_ground = true;
    return has_ground && detail::closed_ris(st, *r->ris);
}

Term expand(Solver& s, const Term& t) {
    Store& st = s.store();
    Term r = deref(t, st);
    if (r->kind == TermKind::Empty) return r;
    if (r->kind == TermKind::Cons) return mk_cons(r->a, expand(s, r->b));
    if (r->kind != TermKind::Ris) throw NotExpandable("not an intensional set");
    Term dom = deref(r->ris->domain, st);
    if (dom->kind == TermKind::Ris) dom = expand(s, dom);
    if (!detail::closed_ris(st, *r->ris)) throw NotExpandable("filter has free variables");
    Scratch sc(st);
    std::vector<Term> out;
    std::vector<GroundPtr> seen;
    // Cons elements as written; interval values by increasing magnitude, negative first.
    std::vector<Term> elems;
    Term x = deref(dom, st);
    for (; x->kind == TermKind::Cons; x = deref(x->b, st)) elems.push_back(x->a);
    if (x->kind == TermKind::Interval && x->ival <= x->hi) {
        std::int64_t lo = x->ival, hi = x->hi;
        std::int64_t start = lo > 0 ? lo : (hi < 0 ? hi : 0);
        elems.push_back(mk_int(start));
        for (std::int64_t k = 1; start - k >= lo || start + k <= hi; ++k) {
            if (start - k >= lo) elems.push_back(mk_int(start - k));
            if (start + k <= hi) elems.push_back(mk_int(start + k));
        }
    } else if (x->kind != TermKind::Empty && x->kind != TermKind::Interval) {
        throw NotExpandable("domain is not a ground set");
    }
    for (const Term& z : elems) {
        auto v = detail::eval_elem(sc.ctx, r, z);
        if (!v) throw NotExpandable("domain element is not ground");
        if (!v->pass) continue;
        auto g = ground_value(v->pattern, st);
        bool dup = false;
        for (auto& q : seen)
            if (ground_compare(**g, *q) == 0) dup = true;
        if (!dup) {
            seen.push_back(*g);
            out.push_back(v->pattern);
        }
    }
    return mk_set(out);
}

Formula negate_filter(const Formula& f, const std::vector<Term>& dummies, VarPool& pool) {
    return detail::negate_impl(f, dummies, pool);
}

}  // namespace setris
