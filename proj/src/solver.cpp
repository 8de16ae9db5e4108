#include <setris/solver.hpp>

#include "engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace setris {

namespace detail {

Term Ctx::d(const Term& t) const {
    Term x = deref(t, st);
    if (x->kind == TermKind::Expr) {
        if (auto v = eval_int(x, st)) return mk_int(*v);
    } else if (x->kind == TermKind::Ris) {
        if (deref(x->ris->domain, st)->kind == TermKind::Empty) return mk_empty();
    }
    return x;
}

std::vector<VarId> watch_of(const Store& st, std::initializer_list<Term> ts) {
    std::set<VarId> all;
    for (auto& t : ts) {
        auto v = free_vars(t, st);
        all.insert(v.begin(), v.end());
    }
    return {all.begin(), all.end()};
}

bool is_var_ris(const Store& st, const Term& t) {
    Term x = deref(t, st);
    return x->kind == TermKind::Ris && deref(x->ris->domain, st)->kind == TermKind::Var;
}

bool is_varlike(const Store& st, const Term& t) {
    Term x = deref(t, st);
    return x->kind == TermKind::Var || is_var_ris(st, x);
}

Term chain_tail(const Store& st, const Term& t) {
    Term x = deref(t, st);
    while (x->kind == TermKind::Cons) x = deref(x->b, st);
    return x;
}

bool bind_var(Store& st, const Term& v, const Term& t0) {
    Term t = deref(t0, st);
    if (t->kind == TermKind::Var) {
        if (t->id == v->id) return true;
        // Anonymous variables point at named ones; otherwise newer points at older.
        Term from = v, to = t;
        if (from->anon == to->anon ? from->id < to->id : !from->anon) std::swap(from, to);
        IntDomain merged;
        const IntDomain* df = st.domain(from->id);
        const IntDomain* dt = st.domain(to->id);
        if (df || dt) {
            merged = df ? *df : *dt;
            if (df && dt) merged.intersect(*dt);
            if (merged.empty()) return false;
        }
        st.bind(from->id, to);
        if (df || dt) {
            st.set_domain(to->id, merged);
            if (merged.singleton()) st.bind(to->id, mk_int(merged.lo()));
        }
        return true;
    }
    if (const IntDomain* dv = st.domain(v->id)) {
        if (t->kind != TermKind::Int || !dv->contains(t->ival)) return false;
    }
    if (occurs_outside_ris(v->id, t, st)) return false;
    st.bind(v->id, t);
    return true;
}

namespace {

int goal_class(const Store& st, const Formula& f) {
    if (f->tag != FormulaNode::Tag::Atom) return 0;
    // Enumeration waits for every other goal in the batch to narrow the domain.
    if (f->kind == AtomKind::Label) return 2;
    if (f->kind != AtomKind::In && f->kind != AtomKind::Nin) return 0;
    return deref(f->args[1], st)->kind == TermKind::Ris ? 1 : 0;
}

void flatten_goal(const Formula& f, VarPool& pool, std::vector<Formula>& out) {
    if (f->tag == FormulaNode::Tag::And) {
        flatten_goal(f->l, pool, out);
        flatten_goal(f->r, pool, out);
        return;
    }
    if (f->tag == FormulaNode::Tag::Atom && is_derived(f->kind) && f->kind != AtomKind::Subset) {
        flatten_goal(expand_derived(f, pool), pool, out);
        return;
    }
    out.push_back(f);
}

Step rw_int(Ctx& c, const Formula& a) {
    Term x = c.d(a->args[0]), y = c.d(a->args[1]);
    if (x->kind == TermKind::Int && y->kind == TermKind::Int) {
        std::int64_t p = x->ival, q = y->ival;
        bool r = false;
        switch (a->kind) {
            case AtomKind::Le: r = p <= q; break;
            case AtomKind::Lt: r = p < q; break;
            case AtomKind::Ge: r = p >= q; break;
            case AtomKind::Gt: r = p > q; break;
            case AtomKind::Eq:
            case AtomKind::IntEq: r = p == q; break;
            default: r = p != q; break;
        }
        return r ? Step::done() : Step::fail();
    }
    if (!is_int_typed(x) || !is_int_typed(y)) return Step::fail();
    // An undefined ground expression (overflow, bad modulus) has no value.
    if (x->kind == TermKind::Expr && free_vars(x, c.st).empty()) return Step::fail();
    if (y->kind == TermKind::Expr && free_vars(y, c.st).empty()) return Step::fail();
    return post_int(c.st, a, c.g.props) ? Step::done() : Step::fail();
}

Step rw_label(Ctx& c, const Formula& a) {
    Term v = c.d(a->args[0]);
    if (v->kind == TermKind::Int) return Step::done();
    if (v->kind != TermKind::Var) return Step::fail();
    Term from = c.d(a->args[1]);
    IntDomain dom = c.st.ensure_domain(v->id);
    if (from->kind == TermKind::Int && dom.restrict(from->ival, std::numeric_limits<std::int64_t>::max())) {
        if (dom.empty()) return Step::fail();
        c.st.set_domain(v->id, dom);
    }
    std::int64_t lo = dom.lo();
    if (dom.singleton()) return Step::bind(v, mk_int(lo));
    Branch take{{{v, mk_int(lo)}}, {}};
    Branch skip{{}, {atom(AtomKind::Label, {v, mk_int(lo + 1)})}};
    return Step::alt({take, skip});
}

}  // namespace

Step rewrite(Ctx& c, const Formula& a) {
    if (a->tag == FormulaNode::Tag::Or) return Step::alt({Branch{{}, {a->l}}, Branch{{}, {a->r}}});
    if (a->tag == FormulaNode::Tag::And) return Step::to({a->l, a->r});
    const auto& x = a->args;
    switch (a->kind) {
        case AtomKind::TrueC: return Step::done();
        case AtomKind::FalseC: return Step::fail();
        case AtomKind::Eq: return rw_eq(c, x[0], x[1]);
        case AtomKind::Neq: return rw_neq(c, x[0], x[1]);
        case AtomKind::In: return rw_in(c, x[0], x[1]);
        case AtomKind::Nin: return rw_nin(c, x[0], x[1]);
        case AtomKind::Un: return rw_un(c, x[0], x[1], x[2]);
        case AtomKind::Disj: return rw_disj(c, x[0], x[1]);
        case AtomKind::Subset: return rw_subset(c, x[0], x[1]);
        case AtomKind::Size: return rw_size(c, x[0], x[1]);
        case AtomKind::Le:
        case AtomKind::Lt:
        case AtomKind::Ge:
        case AtomKind::Gt:
        case AtomKind::IntEq:
        case AtomKind::IntNeq: return rw_int(c, a);
        case AtomKind::Label: return rw_label(c, a);
        default: return Step::to({expand_derived(a, c.st.pool())});
    }
}

std::optional<bool> eval_closed(Ctx& c, const Formula& f) {
    Store& st = c.st;
    if (st.subsolve_depth >= static_cast<int>(st.options().max_subsolve_depth))
        throw ResourceLimit("nested evaluation too deep");
    struct Depth {
        Store& s;
        explicit Depth(Store& x) : s(x) { ++s.subsolve_depth; }
        ~Depth() { --s.subsolve_depth; }
    } guard(st);
    std::size_t m = st.mark();
    bool ok;
    {
        Search sub(st, c.search.depth() + 1);
        sub.push(f);
        try {
            ok = sub.run();
        } catch (...) {
            st.undo(m);
            throw;
        }
    }
    st.undo(m);
    return ok;
}

Search::Search(Store& st, int depth) : st_(st), depth_(depth) {}

void Search::push(const std::vector<Formula>& fs) {
    std::vector<Formula> flat;
    for (auto& f : fs) flatten_goal(f, st_.pool(), flat);
    std::stable_sort(flat.begin(), flat.end(),
                     [&](const Formula& p, const Formula& q) { return goal_class(st_, p) < goal_class(st_, q); });
    for (auto it = flat.rbegin(); it != flat.rend(); ++it) g_.stack.push_back(*it);
}

bool Search::bind_checked(const Term& v, const Term& t) {
    Term dv = deref(v, st_);
    if (dv->kind != TermKind::Var) {
        push(eq(dv, t));
        return true;
    }
    Term dt = deref(t, st_);
    if (dt->kind == TermKind::Expr && !free_vars(dt, st_).empty()) {
        push(atom(AtomKind::IntEq, {dv, dt}));
        return true;
    }
    if (dt->kind == TermKind::Expr) {
        auto val = eval_int(dt, st_);
        if (!val) return false;
        dt = mk_int(*val);
    }
    return bind_var(st_, dv, dt);
}

bool Search::apply(const Branch& b) {
    for (auto& [v, t] : b.binds)
        if (!bind_checked(v, t)) return false;
    push(b.goals);
    return true;
}

bool Search::backtrack() {
    while (!cps_.empty()) {
        ChoicePoint& cp = cps_.back();
        st_.undo(cp.mark);
        Branch b = cp.rest[cp.next++];
        if (cp.next >= cp.rest.size()) {
            g_ = std::move(cp.saved);
            cps_.pop_back();
        } else {
            g_ = cp.saved;
        }
        if (apply(b)) return true;
    }
    return false;
}

void Search::wake() {
    std::vector<VarId> changed = st_.take_changed();
    if (changed.empty() || g_.susp.empty()) return;
    std::unordered_set<VarId> ch(changed.begin(), changed.end());
    std::vector<Formula> woken;
    std::vector<Goals::Susp> keep;
    for (auto& s : g_.susp) {
        bool hit = std::any_of(s.watch.begin(), s.watch.end(), [&](VarId v) { return ch.count(v) > 0; });
        if (hit)
            woken.push_back(s.atom);
        else
            keep.push_back(std::move(s));
    }
    g_.susp = std::move(keep);
    for (auto it = woken.rbegin(); it != woken.rend(); ++it) g_.stack.push_back(*it);
}

namespace {

void ris_domains(const Store& st, const Term& t, std::set<VarId>& out, int depth = 0) {
    if (depth > 64) return;
    Term x = deref(t, st);
    switch (x->kind) {
        case TermKind::Ris: {
            Term dom = deref(x->ris->domain, st);
            if (dom->kind == TermKind::Var)
                out.insert(dom->id);
            else
                ris_domains(st, dom, out, depth + 1);
            break;
        }
        case TermKind::Cons:
        case TermKind::Pair:
            ris_domains(st, x->a, out, depth + 1);
            ris_domains(st, x->b, out, depth + 1);
            break;
        default:
            break;
    }
}

}  // namespace

bool Search::fixpoint_work() {
    // X != S stays unsolved when X is the domain of a RIS constrained elsewhere:
    // split it with a witness element.
    std::set<VarId> doms;
    for (auto& s : g_.susp) {
        AtomKind k = s.atom->kind;
        if (k != AtomKind::Eq && k != AtomKind::Nin && k != AtomKind::Un && k != AtomKind::Disj) continue;
        for (auto& t : s.atom->args) ris_domains(st_, t, doms);
    }
    if (!doms.empty()) {
        for (std::size_t i = 0; i < g_.susp.size(); ++i) {
            const Formula& a = g_.susp[i].atom;
            if (a->kind != AtomKind::Neq) continue;
            Term x = deref(a->args[0], st_), y = deref(a->args[1], st_);
            if (x->kind != TermKind::Var || !doms.count(x->id)) {
                if (y->kind == TermKind::Var && doms.count(y->id))
                    std::swap(x, y);
                else
                    continue;
            }
            Term n = st_.pool().fresh();
            std::vector<Branch> bs{Branch{{}, {in(n, x), nin(n, y)}}, Branch{{}, {in(n, y), nin(n, x)}}};
            g_.susp.erase(g_.susp.begin() + static_cast<std::ptrdiff_t>(i));
            cps_.push_back({st_.mark(), g_, bs, 1});
            if (!apply(bs[0])) return backtrack();
            return true;
        }
    }
    if (label_ints) {
        std::vector<VarId> cand = label_vars;
        if (cand.empty()) {
            cand = prop_vars(st_, g_.props);
        }
        for (VarId v : cand) {
            TermNode n;
            n.kind = TermKind::Var;
            n.id = v;
            Term t = deref(std::make_shared<const TermNode>(std::move(n)), st_);
            if (t->kind != TermKind::Var || !st_.domain(t->id)) continue;
            g_.stack.push_back(atom(AtomKind::Label, {t, mk_int(std::numeric_limits<std::int64_t>::min())}));
            return true;
        }
    }
    prune_props(st_, g_.props);
    return false;
}

bool Search::run() {
    while (true) {
        st_.step();
        if (st_.int_dirty()) {
            if (!g_.props.empty() && !propagate_ints(st_, g_.props)) {
                if (!backtrack()) return false;
                continue;
            }
            st_.clear_int_dirty();
        }
        wake();
        if (g_.stack.empty()) {
            std::size_t before = cps_.size();
            bool more = fixpoint_work();
            if (more || cps_.size() != before) continue;
            if (!g_.stack.empty()) continue;
            return true;
        }
        Formula a = g_.stack.back();
        g_.stack.pop_back();
        Ctx c{st_, g_, *this};
        Step s = rewrite(c, a);
        switch (s.kind) {
            case Step::Kind::Fail:
                if (!backtrack()) return false;
                break;
            case Step::Kind::Suspend:
                g_.susp.push_back({a, std::move(s.watch)});
                break;
            case Step::Kind::Rewrite:
                if (s.branches.size() > 1) cps_.push_back({st_.mark(), g_, s.branches, 1});
                if (!apply(s.branches[0]) && !backtrack()) return false;
                break;
        }
    }
}

bool Search::next() {
    if (!backtrack()) return false;
    return run();
}

}  // namespace detail

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Success: return "Success";
        case Outcome::Failure: return "Failure";
        case Outcome::ResourceLimit: return "ResourceLimit";
    }
    return "?";
}

Solver::Solver(SolverOptions opts)
    : store_(pool_, opts), search_(std::make_unique<detail::Search>(store_, 0)),
      saved_(std::make_unique<detail::Goals>()) {}

Solver::~Solver() = default;

void Solver::set_options(const SolverOptions& o) {
    bool cache_changed = o.cache_size != store_.options().cache_size;
    store_.options() = o;
    if (cache_changed) store_.cache().set_capacity(o.cache_size);
}

Term Solver::var(const std::string& name) {
    auto it = named_.find(name);
    if (it != named_.end()) return it->second;
    Term v = pool_.fresh(name);
    named_.emplace(name, v);
    order_.push_back(v);
    return v;
}

void Solver::add(const Formula& f) { pending_.push_back(f); }

void Solver::label(const Term& v) { pending_.push_back(atom(AtomKind::Label, {v, mk_int(std::numeric_limits<std::int64_t>::min())})); }

void Solver::discard_pending() { pending_.clear(); }

Outcome Solver::run(bool first) {
    store_.reset_steps();
    last_error_.clear();
    try {
        bool ok;
        if (first) {
            search_->commit();
            root_mark_ = store_.mark();
            *saved_ = search_->goals();
            search_->label_ints = labeling_;
            search_->push(pending_);
            pending_.clear();
            ok = search_->run();
        } else {
            ok = search_->next();
        }
        last_steps_ = store_.steps();
        if (ok) return Outcome::Success;
        store_.undo(root_mark_);
        search_->goals() = *saved_;
        search_->commit();
        return Outcome::Failure;
    } catch (const ResourceLimit& e) {
        last_steps_ = store_.steps();
        last_error_ = e.what();
        store_.undo(root_mark_);
        search_->goals() = *saved_;
        search_->commit();
        return Outcome::ResourceLimit;
    } catch (...) {
        last_steps_ = store_.steps();
        store_.undo(root_mark_);
        search_->goals() = *saved_;
        search_->commit();
        throw;
    }
}

Outcome Solver::solve() { return run(true); }

bool Solver::check() {
    Outcome o = run(true);
    if (o == Outcome::ResourceLimit) throw ResourceLimit(last_error_);
    return o == Outcome::Success;
}

Outcome Solver::next_solution() { return run(false); }

std::vector<Formula> Solver::residue() const {
    std::vector<Formula> out;
    auto& g = search_->goals();
    for (auto& s : g.susp) out.push_back(s.atom);
    for (auto& p : g.props) {
        if (!p.src) continue;
        bool open = false;
        for (auto& t : p.src->args)
            if (!free_vars(t, store_).empty()) open = true;
        if (open) out.push_back(p.src);
    }
    return out;
}

Solution Solver::solution() const {
    Solution s;
    std::set<VarId> seen;
    for (auto& v : order_) {
        Term r = resolve(v, store_);
        s.bindings.push_back({v, r});
        for (VarId id : free_vars(r, store_)) seen.insert(id);
    }
    for (auto& a : residue()) {
        std::vector<Term> args;
        for (auto& t : a->args) {
            args.push_back(resolve(t, store_));
            for (VarId id : free_vars(args.back(), store_)) seen.insert(id);
        }
        FormulaNode n;
        n.kind = a->kind;
        n.args = std::move(args);
        s.residue.push_back(std::make_shared<const FormulaNode>(std::move(n)));
    }
    for (VarId id : seen)
        if (const IntDomain* d = store_.domain(id)) s.domains.push_back({id, *d});
    return s;
}

void Solver::reset() {
    store_.undo(0);
    store_.cache().clear();
    search_ = std::make_unique<detail::Search>(store_, 0);
    *saved_ = detail::Goals{};
    named_.clear();
    order_.clear();
    pending_.clear();
}

bool Solver::is_solved_form(const Formula& a) {
    if (a->tag == FormulaNode::Tag::Atom && a->kind == AtomKind::TrueC) return true;
    std::size_t m = store_.mark();
    detail::Goals scratch;
    detail::Search tmp(store_, 1);
    detail::Ctx c{store_, scratch, tmp};
    bool solved = false;
    try {
        solved = detail::rewrite(c, a).kind == detail::Step::Kind::Suspend;
    } catch (...) {
        store_.undo(m);
        throw;
    }
    store_.undo(m);
    return solved;
}

}  // namespace setris
