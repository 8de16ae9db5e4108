// Rewrite rules for set constraints over extensional sets, intervals and variables.
#include "engine.hpp"

#include <algorithm>

namespace setris::detail {

namespace {

bool fast(const Ctx& c) { return c.st.options().ground_fastpath; }

std::optional<GroundPtr> gval(const Ctx& c, const Term& t) {
    if (!is_ground(t, c.st)) return std::nullopt;
    return ground_value(t, c.st);
}

Term unfold(const Term& iv) { return mk_cons(mk_int(iv->ival), mk_interval(iv->ival + 1, iv->hi)); }

bool is_set_value(const Term& t) { return is_set_term(t); }

// Coarse sort of a non-variable term, used to detect type clashes.
int sort_of(const Term& t) {
    switch (t->kind) {
        case TermKind::Int:
        case TermKind::Expr:
            return 0;
        case TermKind::Str:
            return 1;
        case TermKind::Pair:
            return 2;
        default:
            return 3;
    }
}

bool is_ground_set(const GroundValue& g) { return g.kind == GroundValue::Set; }

bool ground_member(const GroundValue& e, const GroundValue& s) {
    return std::binary_search(s.items.begin(), s.items.end(), std::make_shared<GroundValue>(e),
                              [](const GroundPtr& p, const GroundPtr& q) { return ground_compare(*p, *q) < 0; });
}

std::vector<Term> elems_of(const Store& st, const Term& t) {
    std::vector<Term> out;
    Term x = deref(t, st);
    while (x->kind == TermKind::Cons) {
        out.push_back(x->a);
        x = deref(x->b, st);
    }
    return out;
}

// Non-variable RIS among the terms, if any.
const Term* find_lazy(const Ctx& c, std::vector<Term>& ts) {
    for (auto& t : ts)
        if (t->kind == TermKind::Ris && !is_var_ris(c.st, t)) return &t;
    return nullptr;
}

// Union rules once the identity shortcuts are handled.
Step un_rules(Ctx& c, const Term& A, const Term& B, const Term& C) {
    std::vector<Term> ts{A, B, C};
    if (const Term* r = find_lazy(c, ts)) {
        std::size_t i = static_cast<std::size_t>(r - ts.data());
        return ris_lazy(c, *r, [&, i](const Term& rep) {
            std::vector<Term> args{A, B, C};
            args[i] = rep;
            return std::vector<Formula>{un(args[0], args[1], args[2])};
        });
    }
    if (C->kind == TermKind::Interval) return Step::to({un(A, B, unfold(C))});
    if (C->kind == TermKind::Cons) {
        Term t = C->a;
        Term n1 = c.fresh(), n2 = c.fresh(), n3 = c.fresh();
        std::vector<Formula> common{eq(C, mk_cons(t, n1)), nin(t, n1)};
        auto with = [&](std::vector<Formula> extra) {
            std::vector<Formula> g = common;
            g.insert(g.end(), extra.begin(), extra.end());
            return Branch{{}, std::move(g)};
        };
        return Step::alt({
            with({eq(A, mk_cons(t, n2)), nin(t, n2), nin(t, B), un(n2, B, n1)}),
            with({eq(B, mk_cons(t, n3)), nin(t, n3), nin(t, A), un(A, n3, n1)}),
            with({eq(A, mk_cons(t, n2)), nin(t, n2), eq(B, mk_cons(t, n3)), nin(t, n3), un(n2, n3, n1)}),
        });
    }
    for (const Term& x : {A, B}) {
        if (x->kind == TermKind::Interval) {
            Term a2 = same(x, A) ? unfold(A) : A;
            Term b2 = same(x, B) && !same(x, A) ? unfold(B) : B;
            return Step::to({un(a2, b2, C)});
        }
        if (x->kind == TermKind::Cons) {
            Term n = c.fresh();
            return Step::to({eq(C, mk_cons(x->a, n)), nin(x->a, n), un(A, B, C)});
        }
    }
    for (const Term& x : {A, B, C})
        if (!is_set_typed(x)) return Step::fail();
    return Step::suspend(watch_of(c.st, {A, B, C}));
}

Step subset_general(Ctx& c, const Term& A, const Term& C) {
    if (C->kind == TermKind::Ris && !is_var_ris(c.st, C))
        return ris_lazy(c, C, [&](const Term& rep) { return std::vector<Formula>{subset(A, rep)}; });
    return un_rules(c, A, C, C);
}

}  // namespace

Step rw_eq(Ctx& c, const Term& a0, const Term& b0) {
    Term a = c.d(a0), b = c.d(b0);
    if (same(a, b)) return Step::done();
    if (a->kind == TermKind::Expr || b->kind == TermKind::Expr) return Step::to({atom(AtomKind::IntEq, {a, b})});
    if (fast(c)) {
        auto ga = gval(c, a), gb = gval(c, b);
        if (ga && gb) return ground_compare(**ga, **gb) == 0 ? Step::done() : Step::fail();
    }
    if (a->kind == TermKind::Var) return Step::bind(a, b);
    if (b->kind == TermKind::Var) return Step::bind(b, a);
    if (a->kind == TermKind::Ris || b->kind == TermKind::Ris) return ris_eq(c, a, b);
    if (sort_of(a) != sort_of(b)) return Step::fail();
    switch (a->kind) {
        case TermKind::Int:
        case TermKind::Str:
            return Step::fail();  // not same
        case TermKind::Pair:
            return Step::to({eq(a->a, b->a), eq(a->b, b->b)});
        case TermKind::Empty:
            return Step::fail();  // b is a nonempty set
        case TermKind::Interval:
            if (b->kind == TermKind::Empty) return Step::fail();
            return Step::to({eq(unfold(a), b)});
        case TermKind::Cons:
            break;
        default:
            return Step::fail();
    }
    if (b->kind == TermKind::Empty) return Step::fail();
    if (b->kind == TermKind::Interval) return Step::to({eq(a, unfold(b))});
    Term ta = chain_tail(c.st, a), tb = chain_tail(c.st, b);
    if (ta->kind == TermKind::Var && tb->kind == TermKind::Var && ta->id == tb->id) {
        // {L | X} = {R | X}: every element of each side belongs to the other side.
        std::vector<Formula> g;
        for (auto& t : elems_of(c.st, a)) g.push_back(in(t, b));
        for (auto& s : elems_of(c.st, b)) g.push_back(in(s, a));
        return Step::to(std::move(g));
    }
    Term s = a->a, A = a->b, t = b->a, B = b->b;
    Term n = c.fresh();
    return Step::alt({
        Branch{{}, {eq(s, t), eq(A, B)}},
        Branch{{}, {eq(s, t), eq(a, B)}},
        Branch{{}, {eq(s, t), eq(A, b)}},
        Branch{{}, {eq(A, mk_cons(t, n)), eq(mk_cons(s, n), B)}},
    });
}

Step rw_neq(Ctx& c, const Term& a0, const Term& b0) {
    Term a = c.d(a0), b = c.d(b0);
    if (same(a, b)) return Step::fail();
    if (a->kind == TermKind::Expr || b->kind == TermKind::Expr) return Step::to({atom(AtomKind::IntNeq, {a, b})});
    if (fast(c)) {
        auto ga = gval(c, a), gb = gval(c, b);
        if (ga && gb) return ground_compare(**ga, **gb) != 0 ? Step::done() : Step::fail();
    }
    if (b->kind == TermKind::Var && a->kind != TermKind::Var) std::swap(a, b);
    if (a->kind == TermKind::Var) {
        const IntDomain* da = c.st.domain(a->id);
        if (da && (b->kind == TermKind::Int || (b->kind == TermKind::Var && c.st.domain(b->id))))
            return Step::to({atom(AtomKind::IntNeq, {a, b})});
        if (b->kind == TermKind::Int && !da) return Step::suspend(watch_of(c.st, {a}));
        if (b->kind != TermKind::Var && occurs_outside_ris(a->id, b, c.st)) return Step::done();
        if (da && b->kind != TermKind::Int && b->kind != TermKind::Var) return Step::done();
        if (b->kind != TermKind::Ris) return Step::suspend(watch_of(c.st, {a, b}));
        // A RIS is not a plain value: decide through a discriminating element.
    }
    if (a->kind != TermKind::Var && sort_of(a) != sort_of(b)) return Step::done();
    switch (a->kind) {
        case TermKind::Int:
        case TermKind::Str:
            return Step::done();
        case TermKind::Pair:
            return Step::alt({Branch{{}, {neq(a->a, b->a)}}, Branch{{}, {neq(a->b, b->b)}}});
        default:
            break;
    }
    if (a->kind == TermKind::Empty && b->kind == TermKind::Empty) return Step::fail();
    Term n = c.fresh();
    return Step::alt({Branch{{}, {in(n, a), nin(n, b)}}, Branch{{}, {in(n, b), nin(n, a)}}});
}

Step rw_in(Ctx& c, const Term& e0, const Term& s0) {
    Term e = c.d(e0), s = c.d(s0);
    if (fast(c)) {
        auto ge = gval(c, e), gs = gval(c, s);
        if (ge && gs) {
            if (!is_ground_set(**gs)) return Step::fail();
            return ground_member(**ge, **gs) ? Step::done() : Step::fail();
        }
    }
    switch (s->kind) {
        case TermKind::Empty:
            return Step::fail();
        case TermKind::Cons:
            if (same(e, s->a)) return Step::done();
            return Step::alt({Branch{{}, {eq(e, s->a)}}, Branch{{}, {in(e, s->b)}}});
        case TermKind::Interval:
            return Step::to({le(mk_int(s->ival), e), le(e, mk_int(s->hi))});
        case TermKind::Var: {
            Term n = c.fresh();
            return Step::bind(s, mk_cons(e, n));
        }
        case TermKind::Ris:
            return ris_member(c, e, s);
        default:
            return Step::fail();
    }
}

Step rw_nin(Ctx& c, const Term& e0, const Term& s0) {
    Term e = c.d(e0), s = c.d(s0);
    if (fast(c)) {
        auto ge = gval(c, e), gs = gval(c, s);
        if (ge && gs) {
            if (!is_ground_set(**gs)) return Step::done();
            return ground_member(**ge, **gs) ? Step::fail() : Step::done();
        }
    }
    switch (s->kind) {
        case TermKind::Empty:
            return Step::done();
        case TermKind::Cons:
            return Step::to({neq(e, s->a), nin(e, s->b)});
        case TermKind::Interval: {
            if (e->kind == TermKind::Int) return (e->ival < s->ival || e->ival > s->hi) ? Step::done() : Step::fail();
            bool int_like = e->kind == TermKind::Expr || (e->kind == TermKind::Var && c.st.domain(e->id));
            if (int_like)
                return Step::alt({Branch{{}, {lt(e, mk_int(s->ival))}}, Branch{{}, {gt(e, mk_int(s->hi))}}});
            if (e->kind == TermKind::Var) return Step::suspend(watch_of(c.st, {e}));
            return Step::done();
        }
        case TermKind::Var:
            return Step::suspend(watch_of(c.st, {e, s}));
        case TermKind::Ris:
            return ris_not_member(c, e, s);
        default:
            return Step::done();
    }
}

Step rw_un(Ctx& c, const Term& a0, const Term& b0, const Term& c0) {
    Term A = c.d(a0), B = c.d(b0), C = c.d(c0);
    if (fast(c)) {
        auto ga = gval(c, A), gb = gval(c, B), gc = gval(c, C);
        if (ga && gb && gc) {
            if (!is_ground_set(**ga) || !is_ground_set(**gb) || !is_ground_set(**gc)) return Step::fail();
            GroundValue u;
            u.kind = GroundValue::Set;
            std::set_union((*ga)->items.begin(), (*ga)->items.end(), (*gb)->items.begin(), (*gb)->items.end(),
                           std::back_inserter(u.items),
                           [](const GroundPtr& p, const GroundPtr& q) { return ground_compare(*p, *q) < 0; });
            return ground_compare(u, **gc) == 0 ? Step::done() : Step::fail();
        }
    }
    for (const Term& x : {A, B, C})
        if (x->kind != TermKind::Var && !is_set_value(x)) return Step::fail();
    if (A->kind == TermKind::Empty) return Step::to({eq(B, C)});
    if (B->kind == TermKind::Empty) return Step::to({eq(A, C)});
    if (C->kind == TermKind::Empty) return Step::to({eq(A, mk_empty()), eq(B, mk_empty())});
    if (same(A, B)) return Step::to({eq(C, A)});
    if (same(B, C)) return Step::to({subset(A, C)});
    if (same(A, C)) return Step::to({subset(B, C)});
    return un_rules(c, A, B, C);
}

Step rw_subset(Ctx& c, const Term& a0, const Term& c0) {
    Term A = c.d(a0), C = c.d(c0);
    if (fast(c)) {
        auto ga = gval(c, A), gc = gval(c, C);
        if (ga && gc) {
            if (!is_ground_set(**ga) || !is_ground_set(**gc)) return Step::fail();
            return std::includes((*gc)->items.begin(), (*gc)->items.end(), (*ga)->items.begin(),
                                 (*ga)->items.end(),
                                 [](const GroundPtr& p, const GroundPtr& q) { return ground_compare(*p, *q) < 0; })
                       ? Step::done()
                       : Step::fail();
        }
    }
    for (const Term& x : {A, C})
        if (x->kind != TermKind::Var && !is_set_value(x)) return Step::fail();
    if (A->kind == TermKind::Empty) return Step::done();
    if (C->kind == TermKind::Empty) return Step::to({eq(A, mk_empty())});
    if (same(A, C)) return Step::done();
    // A subset of {x : A | F}: every element of A satisfies F.
    if (C->kind == TermKind::Ris && C->ris->pattern_is_control && same(deref(C->ris->domain, c.st), A)) {
        if (A->kind == TermKind::Var) return Step::suspend(watch_of(c.st, {A, C}));
        if (A->kind == TermKind::Cons || A->kind == TermKind::Interval) {
            auto pe = peel(c, A);
            if (!pe) return Step::fail();
            auto [t, rest] = *pe;
            Instance inst = instantiate(c, *C->ris, t);
            // t can never match the control term, so it is not in C.
            if (inst.nomatch) return Step::fail();
            // The tail goes first: it suspends on an open tail before the filter
            // can extend it, so new elements are checked as soon as they appear.
            std::vector<Formula> g{subset(rest, ris_with_domain(C, rest))};
            g.insert(g.end(), inst.eqs.begin(), inst.eqs.end());
            g.push_back(inst.filter);
            return Step::to(std::move(g));
        }
    }
    if (A->kind == TermKind::Cons) return Step::to({in(A->a, C), subset(A->b, C)});
    if (A->kind == TermKind::Interval) return Step::to({subset(unfold(A), C)});
    if (A->kind == TermKind::Ris && !is_var_ris(c.st, A))
        return ris_lazy(c, A, [&](const Term& rep) { return std::vector<Formula>{subset(rep, C)}; });
    // A is a variable or a variable-domain RIS.
    if (is_varlike(c.st, C)) return Step::suspend(watch_of(c.st, {A, C}));
    return subset_general(c, A, C);
}

Step rw_disj(Ctx& c, const Term& a0, const Term& b0) {
    Term A = c.d(a0), B = c.d(b0);
    if (fast(c)) {
        auto ga = gval(c, A), gb = gval(c, B);
        if (ga && gb) {
            if (!is_ground_set(**ga) || !is_ground_set(**gb)) return Step::fail();
            for (auto& x : (*ga)->items)
                if (ground_member(*x, **gb)) return Step::fail();
            return Step::done();
        }
    }
    for (const Term& x : {A, B})
        if (x->kind != TermKind::Var && !is_set_value(x)) return Step::fail();
    if (A->kind == TermKind::Empty || B->kind == TermKind::Empty) return Step::done();
    if (same(A, B)) return Step::to({eq(A, mk_empty())});
    if (A->kind == TermKind::Cons) return Step::to({nin(A->a, B), disj_c(A->b, B)});
    if (B->kind == TermKind::Cons) return Step::to({nin(B->a, A), disj_c(A, B->b)});
    if (A->kind == TermKind::Interval) return Step::to({disj_c(unfold(A), B)});
    if (B->kind == TermKind::Interval) return Step::to({disj_c(A, unfold(B))});
    if (A->kind == TermKind::Ris && !is_var_ris(c.st, A))
        return ris_lazy(c, A, [&](const Term& rep) { return std::vector<Formula>{disj_c(rep, B)}; });
    if (B->kind == TermKind::Ris && !is_var_ris(c.st, B))
        return ris_lazy(c, B, [&](const Term& rep) { return std::vector<Formula>{disj_c(A, rep)}; });
    return Step::suspend(watch_of(c.st, {A, B}));
}

Step rw_size(Ctx& c, const Term& s0, const Term& n0) {
    Term S = c.d(s0), n = c.d(n0);
    if (n->kind == TermKind::Int && n->ival < 0) return Step::fail();
    if (!is_int_typed(n)) return Step::fail();
    if (S->kind != TermKind::Var && !is_set_value(S)) return Step::fail();
    if (fast(c)) {
        if (auto gs = gval(c, S)) return Step::to({eq(n, mk_int(static_cast<std::int64_t>((*gs)->items.size())))});
    }
    switch (S->kind) {
        case TermKind::Empty:
            return Step::to({eq(n, mk_int(0))});
        case TermKind::Interval:
            if (S->hi - S->ival < 1000000) return Step::to({eq(n, mk_int(S->hi - S->ival + 1))});
            return Step::to({size_c(unfold(S), n)});
        case TermKind::Cons: {
            Term t = S->a, A = S->b;
            Term n1 = mk_expr(ExprOp::Sub, n, mk_int(1));
            return Step::alt({Branch{{}, {nin(t, A), size_c(A, n1)}}, Branch{{}, {in(t, A), size_c(A, n)}}});
        }
        case TermKind::Ris:
            if (!is_var_ris(c.st, S))
                return ris_lazy(c, S, [&](const Term& rep) { return std::vector<Formula>{size_c(rep, n)}; });
            break;
        default:
            break;
    }
    if (S->kind == TermKind::Var && n->kind == TermKind::Int) {
        if (n->ival == 0) return Step::bind(S, mk_empty());
        std::vector<Term> es;
        for (std::int64_t i = 0; i < n->ival; ++i) es.push_back(c.fresh());
        std::vector<Formula> g;
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j) g.push_back(neq(es[i], es[j]));
        return Step{Step::Kind::Rewrite, {Branch{{{S, mk_set(es)}}, std::move(g)}}, {}};
    }
    // Unknown cardinality: keep it nonnegative.
    if (n->kind == TermKind::Var) {
        const IntDomain* dn = c.st.domain(n->id);
        if (!dn || dn->lo() < 0) {
            if (!post_int(c.st, ge(n, mk_int(0)), c.g.props)) return Step::fail();
        }
    }
    return Step::suspend(watch_of(c.st, {S, n}));
}

}  // namespace setris::detail
