#include <setris/formula.hpp>
#include <setris/terms.hpp>

#include <algorithm>
#include <limits>

namespace setris {

namespace {

Term node(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

void hash_mix(std::size_t& h, std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); }

void control_vars(const Term& t, std::vector<VarId>& out) {
    if (!t) return;
    switch (t->kind) {
        case TermKind::Var:
            if (std::find(out.begin(), out.end(), t->id) == out.end()) out.push_back(t->id);
            break;
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            control_vars(t->a, out);
            control_vars(t->b, out);
            break;
        default:
            break;
    }
}

}  // namespace

Term VarPool::fresh(std::optional<std::string> hint) {
    TermNode n;
    n.kind = TermKind::Var;
    n.id = next_.fetch_add(1);
    if (hint && !hint->empty()) {
        n.name = *hint;
    } else {
        n.name = "_N" + std::to_string(anon_.fetch_add(1) + 1);
        n.anon = true;
    }
    return node(std::move(n));
}

const Term* BindingMap::lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
}

Term fresh_var(VarPool& pool, std::optional<std::string> hint) { return pool.fresh(std::move(hint)); }

Term mk_int(std::int64_t v) {
    TermNode n;
    n.kind = TermKind::Int;
    n.ival = v;
    return node(std::move(n));
}

Term mk_str(std::string s) {
    TermNode n;
    n.kind = TermKind::Str;
    n.sval = std::move(s);
    return node(std::move(n));
}

Term mk_pair(Term a, Term b) {
    TermNode n;
    n.kind = TermKind::Pair;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Term mk_tuple(const std::vector<Term>& items) {
    if (items.empty()) throw TypeError("empty tuple");
    Term t = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) t = mk_pair(items[i], t);
    return t;
}

Term mk_expr(ExprOp op, Term a, Term b) {
    auto ok = [](const Term& t) { return is_int_typed(t); };
    if (!ok(a) || !ok(b)) throw TypeError("integer expression over a non-integer term");
    TermNode n;
    n.kind = TermKind::Expr;
    n.op = op;
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Term mk_empty() {
    static const Term e = [] {
        TermNode n;
        n.kind = TermKind::Empty;
        return node(std::move(n));
    }();
    return e;
}

Term mk_cons(Term elem, Term rest) {
    if (!is_set_typed(rest)) throw TypeError("rest of a set is not a set");
    TermNode n;
    n.kind = TermKind::Cons;
    n.a = std::move(elem);
    n.b = std::move(rest);
    return node(std::move(n));
}

Term mk_set(const std::vector<Term>& elems, Term rest) {
    Term t = rest ? rest : mk_empty();
    if (!is_set_typed(t)) throw TypeError("rest of a set is not a set");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) t = mk_cons(*it, t);
    return t;
}

Term mk_interval(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return mk_empty();
    TermNode n;
    n.kind = TermKind::Interval;
    n.ival = lo;
    n.hi = hi;
    return node(std::move(n));
}

Term mk_ris(Term control, Term domain, Formula filter, Term pattern, std::vector<Term> dummies, bool strict) {
    if (!is_set_typed(domain)) throw TypeError("RIS domain is not a set");
    std::vector<VarId> cv;
    control_vars(control, cv);
    if (cv.empty()) throw MalformedRis("RIS control term contains no variable");
    if (!pattern && !dummies.empty()) throw MalformedRis("RIS with dummies needs an explicit pattern");
    auto r = std::make_shared<RisTerm>();
    r->control = control;
    r->domain = std::move(domain);
    r->filter = filter ? std::move(filter) : truec();
    r->pattern = pattern ? std::move(pattern) : control;
    r->pattern_is_control = same(r->pattern, control);
    bool ctrl_ok = control->kind == TermKind::Var ||
                   (control->kind == TermKind::Pair && control->a->kind == TermKind::Var &&
                    control->b->kind == TermKind::Var && control->a->id != control->b->id);
    bool pat_ok = r->pattern_is_control ||
                  (r->pattern->kind == TermKind::Pair && same(r->pattern->a, control));
    r->admissible_shape = ctrl_ok && pat_ok;
    if (strict && !r->admissible_shape)
        throw MalformedRis("RIS control term or pattern has a non-admissible shape");
    for (auto& d : dummies) {
        if (!d || d->kind != TermKind::Var) throw MalformedRis("RIS dummy is not a variable");
    }
    r->dummies = std::move(dummies);
    r->bound = cv;
    for (auto& d : r->dummies)
        if (std::find(r->bound.begin(), r->bound.end(), d->id) == r->bound.end()) r->bound.push_back(d->id);
    TermNode n;
    n.kind = TermKind::Ris;
    n.ris = std::move(r);
    return node(std::move(n));
}

Term ris_with_domain(const Term& ris, Term domain) {
    auto r = std::make_shared<RisTerm>(*ris->ris);
    r->domain = std::move(domain);
    TermNode n;
    n.kind = TermKind::Ris;
    n.ris = std::move(r);
    return node(std::move(n));
}

bool is_var(const Term& t) { return t && t->kind == TermKind::Var; }

bool is_set_term(const Term& t) {
    switch (t->kind) {
        case TermKind::Empty:
        case TermKind::Cons:
        case TermKind::Interval:
        case TermKind::Ris:
            return true;
        default:
            return false;
    }
}

bool is_set_typed(const Term& t) { return t && (is_set_term(t) || t->kind == TermKind::Var); }

bool is_int_typed(const Term& t) {
    return t && (t->kind == TermKind::Int || t->kind == TermKind::Expr || t->kind == TermKind::Var);
}

Term deref(const Term& t, const Bindings& b) {
    Term cur = t;
    while (cur && cur->kind == TermKind::Var) {
        const Term* nx = b.lookup(cur->id);
        if (!nx) break;
        cur = *nx;
    }
    return cur;
}

namespace {

Term resolve_rec(const Term& t, const Bindings& b, std::vector<VarId>& path) {
    Term d = deref(t, b);
    if (d.get() != t.get() && t->kind == TermKind::Var) {
        if (std::find(path.begin(), path.end(), t->id) != path.end()) return t;
        path.push_back(t->id);
        Term r = resolve_rec(d, b, path);
        path.pop_back();
        return r;
    }
    switch (d->kind) {
        case TermKind::Pair: {
            Term a = resolve_rec(d->a, b, path), c = resolve_rec(d->b, b, path);
            if (a == d->a && c == d->b) return d;
            return mk_pair(a, c);
        }
        case TermKind::Cons: {
            Term a = resolve_rec(d->a, b, path), c = resolve_rec(d->b, b, path);
            if (a == d->a && c == d->b) return d;
            return mk_cons(a, c);
        }
        case TermKind::Expr: {
            if (auto v = eval_int(d, b)) return mk_int(*v);
            Term a = resolve_rec(d->a, b, path), c = resolve_rec(d->b, b, path);
            if (a == d->a && c == d->b) return d;
            return mk_expr(d->op, a, c);
        }
        case TermKind::Ris: {
            Term dom = resolve_rec(d->ris->domain, b, path);
            if (dom == d->ris->domain) return d;
            return ris_with_domain(d, dom);
        }
        default:
            return d;
    }
}

}  // namespace

Term resolve(const Term& t, const Bindings& b) {
    std::vector<VarId> path;
    return resolve_rec(t, b, path);
}

bool same(const Term& x, const Term& y) {
    if (x.get() == y.get()) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case TermKind::Var:
            return x->id == y->id;
        case TermKind::Int:
            return x->ival == y->ival;
        case TermKind::Str:
            return x->sval == y->sval;
        case TermKind::Pair:
        case TermKind::Cons:
            return same(x->a, y->a) && same(x->b, y->b);
        case TermKind::Expr:
            return x->op == y->op && same(x->a, y->a) && same(x->b, y->b);
        case TermKind::Empty:
            return true;
        case TermKind::Interval:
            return x->ival == y->ival && x->hi == y->hi;
        case TermKind::Ris: {
            const auto& p = *x->ris;
            const auto& q = *y->ris;
            if (p.dummies.size() != q.dummies.size()) return false;
            for (std::size_t i = 0; i < p.dummies.size(); ++i)
                if (!same(p.dummies[i], q.dummies[i])) return false;
            return same(p.control, q.control) && same(p.domain, q.domain) && same(p.pattern, q.pattern) &&
                   same(p.filter, q.filter);
        }
    }
    return false;
}

std::size_t term_hash(const Term& t) {
    std::size_t h = static_cast<std::size_t>(t->kind) * 1315423911u;
    switch (t->kind) {
        case TermKind::Var:
            hash_mix(h, t->id);
            break;
        case TermKind::Int:
            hash_mix(h, std::hash<std::int64_t>{}(t->ival));
            break;
        case TermKind::Str:
            hash_mix(h, std::hash<std::string>{}(t->sval));
            break;
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            hash_mix(h, static_cast<std::size_t>(t->op));
            hash_mix(h, term_hash(t->a));
            hash_mix(h, term_hash(t->b));
            break;
        case TermKind::Empty:
            break;
        case TermKind::Interval:
            hash_mix(h, std::hash<std::int64_t>{}(t->ival));
            hash_mix(h, std::hash<std::int64_t>{}(t->hi));
            break;
        case TermKind::Ris:
            hash_mix(h, term_hash(t->ris->control));
            hash_mix(h, term_hash(t->ris->domain));
            hash_mix(h, term_hash(t->ris->pattern));
            hash_mix(h, formula_hash(t->ris->filter));
            break;
    }
    return h;
}

namespace {

void fv_rec(const Term& t, std::set<VarId>& out) {
    switch (t->kind) {
        case TermKind::Var:
            out.insert(t->id);
            break;
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            fv_rec(t->a, out);
            fv_rec(t->b, out);
            break;
        case TermKind::Ris: {
            fv_rec(t->ris->domain, out);
            std::set<VarId> inner;
            collect_free_vars(t->ris->filter, inner);
            fv_rec(t->ris->pattern, inner);
            for (VarId v : t->ris->bound) inner.erase(v);
            out.insert(inner.begin(), inner.end());
            break;
        }
        default:
            break;
    }
}

void fvb_rec(const Term& t, const Bindings& b, std::set<VarId>& out, std::set<VarId>& seen) {
    switch (t->kind) {
        case TermKind::Var: {
            const Term* nx = b.lookup(t->id);
            if (!nx) {
                out.insert(t->id);
            } else if (seen.insert(t->id).second) {
                fvb_rec(*nx, b, out, seen);
            }
            break;
        }
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            fvb_rec(t->a, b, out, seen);
            fvb_rec(t->b, b, out, seen);
            break;
        case TermKind::Ris: {
            fvb_rec(t->ris->domain, b, out, seen);
            std::set<VarId> inner;
            collect_free_vars(t->ris->filter, inner);
            fv_rec(t->ris->pattern, inner);
            for (VarId v : t->ris->bound) inner.erase(v);
            for (VarId v : inner) {
                const Term* nx = b.lookup(v);
                if (!nx) {
                    out.insert(v);
                } else if (seen.insert(v).second) {
                    fvb_rec(*nx, b, out, seen);
                }
            }
            break;
        }
        default:
            break;
    }
}

bool has_unbound_or_ris(const Term& t, const Bindings& b) {
    Term d = deref(t, b);
    switch (d->kind) {
        case TermKind::Var:
        case TermKind::Ris:
            return true;
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            return has_unbound_or_ris(d->a, b) || has_unbound_or_ris(d->b, b);
        default:
            return false;
    }
}

bool occurs_rec(VarId v, const Term& t, const Bindings& b, std::set<VarId>& seen) {
    switch (t->kind) {
        case TermKind::Var: {
            const Term* nx = b.lookup(t->id);
            if (!nx) return t->id == v;
            if (!seen.insert(t->id).second) return false;
            return occurs_rec(v, *nx, b, seen);
        }
        case TermKind::Pair:
        case TermKind::Cons:
        case TermKind::Expr:
            return occurs_rec(v, t->a, b, seen) || occurs_rec(v, t->b, b, seen);
        default:
            return false;
    }
}

}  // namespace

std::set<VarId> free_vars(const Term& t) {
    std::set<VarId> out;
    fv_rec(t, out);
    return out;
}

std::set<VarId> free_vars(const Term& t, const Bindings& b) {
    std::set<VarId> out, seen;
    fvb_rec(t, b, out, seen);
    return out;
}

bool is_ground(const Term& t, const Bindings& b) { return !has_unbound_or_ris(t, b); }

bool occurs_outside_ris(VarId v, const Term& t, const Bindings& b) {
    std::set<VarId> seen;
    return occurs_rec(v, t, b, seen);
}

Term subst(const Term& t, const Subst& s) {
    if (s.empty()) return t;
    switch (t->kind) {
        case TermKind::Var: {
            auto it = s.find(t->id);
            return it == s.end() ? t : it->second;
        }
        case TermKind::Pair: {
            Term a = subst(t->a, s), b = subst(t->b, s);
            return (a == t->a && b == t->b) ? t : mk_pair(a, b);
        }
        case TermKind::Cons: {
            Term a = subst(t->a, s), b = subst(t->b, s);
            return (a == t->a && b == t->b) ? t : mk_cons(a, b);
        }
        case TermKind::Expr: {
            Term a = subst(t->a, s), b = subst(t->b, s);
            if (a == t->a && b == t->b) return t;
            TermNode n;
            n.kind = TermKind::Expr;
            n.op = t->op;
            n.a = a;
            n.b = b;
            return node(std::move(n));
        }
        case TermKind::Ris: {
            const auto& r = *t->ris;
            Term dom = subst(r.domain, s);
            Formula f = subst(r.filter, s);
            Term pat = subst(r.pattern, s);
            Term ctl = subst(r.control, s);
            if (dom == r.domain && f == r.filter && pat == r.pattern && ctl == r.control) return t;
            auto nr = std::make_shared<RisTerm>(r);
            nr->domain = dom;
            nr->filter = f;
            nr->pattern = pat;
            nr->control = ctl;
            nr->bound.clear();
            control_vars(ctl, nr->bound);
            for (auto& d : nr->dummies) {
                d = subst(d, s);
                if (d->kind == TermKind::Var) nr->bound.push_back(d->id);
            }
            TermNode n;
            n.kind = TermKind::Ris;
            n.ris = std::move(nr);
            return node(std::move(n));
        }
        default:
            return t;
    }
}

std::optional<std::int64_t> int_mod(std::int64_t a, std::int64_t m) {
    if (m <= 0) return std::nullopt;
    std::int64_t r = a % m;
    if (r < 0) r += m;
    return r;
}

std::optional<std::int64_t> eval_int(const Term& t, const Bindings& b) {
    Term d = deref(t, b);
    if (d->kind == TermKind::Int) return d->ival;
    if (d->kind != TermKind::Expr) return std::nullopt;
    auto x = eval_int(d->a, b);
    if (!x) return std::nullopt;
    auto y = eval_int(d->b, b);
    if (!y) return std::nullopt;
    __int128 r = 0;
    switch (d->op) {
        case ExprOp::Add:
            r = static_cast<__int128>(*x) + *y;
            break;
        case ExprOp::Sub:
            r = static_cast<__int128>(*x) - *y;
            break;
        case ExprOp::Mul:
            r = static_cast<__int128>(*x) * *y;
            break;
        case ExprOp::Mod:
            return int_mod(*x, *y);
    }
    if (r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
    return static_cast<std::int64_t>(r);
}

int ground_compare(const GroundValue& x, const GroundValue& y) {
    if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
    switch (x.kind) {
        case GroundValue::Int:
            return x.i < y.i ? -1 : (x.i > y.i ? 1 : 0);
        case GroundValue::Str:
            return x.s.compare(y.s) < 0 ? -1 : (x.s == y.s ? 0 : 1);
        default: {
            std::size_t n = std::min(x.items.size(), y.items.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = ground_compare(*x.items[i], *y.items[i]);
                if (c) return c;
            }
            if (x.items.size() == y.items.size()) return 0;
            return x.items.size() < y.items.size() ? -1 : 1;
        }
    }
}

std::optional<GroundPtr> ground_value(const Term& t, const Bindings& b, std::size_t interval_limit) {
    Term d = deref(t, b);
    auto g = std::make_shared<GroundValue>();
    switch (d->kind) {
        case TermKind::Int:
            g->kind = GroundValue::Int;
            g->i = d->ival;
            return g;
        case TermKind::Str:
            g->kind = GroundValue::Str;
            g->s = d->sval;
            return g;
        case TermKind::Expr: {
            auto v = eval_int(d, b);
            if (!v) return std::nullopt;
            g->kind = GroundValue::Int;
            g->i = *v;
            return g;
        }
        case TermKind::Pair: {
            auto x = ground_value(d->a, b, interval_limit);
            if (!x) return std::nullopt;
            auto y = ground_value(d->b, b, interval_limit);
            if (!y) return std::nullopt;
            g->kind = GroundValue::Pair;
            g->items = {*x, *y};
            return g;
        }
        case TermKind::Empty:
        case TermKind::Cons:
        case TermKind::Interval: {
            g->kind = GroundValue::Set;
            Term cur = d;
            while (true) {
                if (cur->kind == TermKind::Empty) break;
                if (cur->kind == TermKind::Interval) {
                    if (static_cast<std::uint64_t>(cur->hi - cur->ival) >= interval_limit) return std::nullopt;
                    for (std::int64_t v = cur->ival; v <= cur->hi; ++v) {
                        auto e = std::make_shared<GroundValue>();
                        e->kind = GroundValue::Int;
                        e->i = v;
                        g->items.push_back(e);
                    }
                    break;
                }
                if (cur->kind != TermKind::Cons) return std::nullopt;
                auto e = ground_value(cur->a, b, interval_limit);
                if (!e) return std::nullopt;
                g->items.push_back(*e);
                cur = deref(cur->b, b);
            }
            std::sort(g->items.begin(), g->items.end(),
                      [](const GroundPtr& p, const GroundPtr& q) { return ground_compare(*p, *q) < 0; });
            g->items.erase(std::unique(g->items.begin(), g->items.end(),
                                       [](const GroundPtr& p, const GroundPtr& q) {
                                           return ground_compare(*p, *q) == 0;
                                       }),
                           g->items.end());
            return g;
        }
        default:
            return std::nullopt;
    }
}

Term term_of_ground(const GroundValue& g) {
    switch (g.kind) {
        case GroundValue::Int:
            return mk_int(g.i);
        case GroundValue::Str:
            return mk_str(g.s);
        case GroundValue::Pair:
            return mk_pair(term_of_ground(*g.items[0]), term_of_ground(*g.items[1]));
        case GroundValue::Set: {
            std::vector<Term> el;
            for (auto& i : g.items) el.push_back(term_of_ground(*i));
            return mk_set(el);
        }
    }
    return mk_empty();
}

}  // namespace setris
