#include "test_main.hpp"

#include <setris/ris.hpp>
#include <setris/solver.hpp>

using namespace setris;

namespace {

std::int64_t ival(Solver& s, const Term& t) {
    auto v = eval_int(resolve(t, s.store()), s.store());
    REQUIRE(v.has_value());
    return *v;
}

std::vector<std::int64_t> ints_of(Solver& s, const Term& set) {
    auto g = ground_value(set, s.store());
    REQUIRE(g.has_value());
    std::vector<std::int64_t> out;
    for (auto& it : (*g)->items) out.push_back(it->i);
    return out;
}

}  // namespace

TEST_CASE("set unification enumerates permutations in order") {
    Solver s;
    Term x1 = s.var("x1"), x2 = s.var("x2"), x3 = s.var("x3");
    s.add(eq(mk_set({mk_int(1), mk_int(2), mk_int(3)}), mk_set({x1, x2, x3})));
    std::vector<std::vector<std::int64_t>> got;
    for (Outcome o = s.solve(); o == Outcome::Success; o = s.next_solution())
        got.push_back({ival(s, x1), ival(s, x2), ival(s, x3)});
    std::vector<std::vector<std::int64_t>> want{{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
    CHECK(got == want);
}

TEST_CASE("membership in a ground RIS") {
    Solver s;
    Term x = s.pool().fresh();
    Term r = mk_ris(x, mk_interval(1, 10), eq(mk_expr(ExprOp::Mod, x, mk_int(2)), mk_int(0)));
    Solver t;
    s.add(in(mk_int(4), r));
    CHECK(s.check());
    s.add(in(mk_int(5), r));
    CHECK_FALSE(s.check());
    s.add(nin(mk_int(5), r));
    CHECK(s.check());
}

TEST_CASE("expand evaluates filter and pattern") {
    Solver s;
    Term x = s.pool().fresh();
    Term r = mk_ris(x, mk_interval(-2, 2), truec(), mk_expr(ExprOp::Mul, x, x));
    CHECK(is_expandable(s, r));
    CHECK(ints_of(s, expand(s, r)) == std::vector<std::int64_t>{0, 1, 4});
}

TEST_CASE("x*x = 25 leaves two values") {
    Solver s;
    Term y = s.var("y");
    s.add(atom(AtomKind::IntEq, {mk_expr(ExprOp::Mul, y, y), mk_int(25)}));
    REQUIRE(s.solve() == Outcome::Success);
    auto d = s.store().domain(y->id);
    REQUIRE(d);
    CHECK(d->str() == "{-5,5}");
}

TEST_CASE("recursive factorial RIS") {
    Solver s;
    Term fact = s.var("fact"), D = s.var("D");
    Term x = s.pool().fresh(), z = s.pool().fresh();
    Term body = mk_ris(x, D,
                       conj(gt(x, mk_int(0)),
                            in(mk_pair(mk_expr(ExprOp::Sub, x, mk_int(1)), z), fact)),
                       mk_pair(x, mk_expr(ExprOp::Mul, z, x)), {z});
    s.add(eq(fact, mk_cons(mk_pair(mk_int(0), mk_int(1)), body)));
    Term ff = s.var("ff");
    s.add(in(mk_pair(mk_int(5), ff), fact));
    REQUIRE(s.solve() == Outcome::Success);
    CHECK(ival(s, ff) == 120);

    Solver s2;
    Term fact2 = s2.var("fact"), D2 = s2.var("D");
    Term x2 = s2.pool().fresh(), z2 = s2.pool().fresh();
    Term body2 = mk_ris(x2, D2,
                        conj(gt(x2, mk_int(0)),
                             in(mk_pair(mk_expr(ExprOp::Sub, x2, mk_int(1)), z2), fact2)),
                        mk_pair(x2, mk_expr(ExprOp::Mul, z2, x2)), {z2});
    s2.add(eq(fact2, mk_cons(mk_pair(mk_int(0), mk_int(1)), body2)));
    Term n = s2.var("n");
    s2.add(in(mk_pair(n, mk_int(120)), fact2));
    REQUIRE(s2.solve() == Outcome::Success);
    CHECK(ival(s2, n) == 5);
}

TEST_CASE("reachable nodes via a recursive RIS") {
    Solver s;
    Term R = s.var("R"), RR = s.var("R_R");
    Term x = s.pool().fresh(), y = s.pool().fresh();
    auto p = [](int a, int b) { return mk_pair(mk_int(a), mk_int(b)); };
    Term E = mk_set({p(1, 2), p(1, 3), p(2, 5), p(4, 6)});
    Term N = mk_set({mk_int(1), mk_int(2), mk_int(3), mk_int(4), mk_int(5), mk_int(6)});
    Term r = mk_ris(x, N, disj(eq(x, mk_int(1)), conj(in(y, R), in(mk_pair(y, x), E))), x, {y});
    s.add(eq(R, r));
    s.add(eq(R, RR));
    REQUIRE(s.check());
    CHECK(ints_of(s, expand(s, RR)) == std::vector<std::int64_t>{1, 2, 3, 5});
}
