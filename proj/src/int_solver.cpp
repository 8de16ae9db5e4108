#include <setris/int_solver.hpp>
#include <setris/store.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <deque>
#include <map>
#include <unordered_map>
#include <functional>

namespace setris {

using i64 = std::int64_t;
using i128 = __int128;

namespace {

constexpr i64 kMax = std::numeric_limits<i64>::max();
constexpr i64 kMin = std::numeric_limits<i64>::min();

i64 clamp64(i128 v) {
    if (v > kMax) return kMax;
    if (v < kMin) return kMin;
    return static_cast<i64>(v);
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 ceil_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

i64 isqrt_floor(i64 v) {
    if (v <= 0) return 0;
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(v)));
    while (static_cast<i128>(r) * r > v) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= v) ++r;
    return r;
}

i64 isqrt_ceil(i64 v) {
    if (v <= 0) return 0;
    i64 r = isqrt_floor(v);
    return static_cast<i128>(r) * r == v ? r : r + 1;
}

}  // namespace

IntDomain::IntDomain(i64 lo, i64 hi) {
    if (lo <= hi) iv_.push_back({lo, hi});
}

IntDomain IntDomain::from_intervals(std::vector<std::pair<i64, i64>> iv) {
    std::sort(iv.begin(), iv.end());
    IntDomain d;
    for (auto& [lo, hi] : iv) {
        if (lo > hi) continue;
        if (!d.iv_.empty() && static_cast<i128>(d.iv_.back().second) + 1 >= lo)
            d.iv_.back().second = std::max(d.iv_.back().second, hi);
        else
            d.iv_.push_back({lo, hi});
    }
    return d;
}

bool IntDomain::contains(i64 v) const {
    for (auto& [lo, hi] : iv_)
        if (v >= lo && v <= hi) return true;
    return false;
}

std::uint64_t IntDomain::size() const {
    std::uint64_t n = 0;
    for (auto& [lo, hi] : iv_) {
        std::uint64_t w = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (w == 0 || n + w < n) return std::numeric_limits<std::uint64_t>::max();
        n += w;
    }
    return n;
}

bool IntDomain::restrict(i64 lo, i64 hi) {
    std::vector<std::pair<i64, i64>> out;
    for (auto& [a, b] : iv_) {
        i64 x = std::max(a, lo), y = std::min(b, hi);
        if (x <= y) out.push_back({x, y});
    }
    bool changed = out != iv_;
    iv_ = std::move(out);
    return changed;
}

bool IntDomain::remove(i64 v) {
    for (std::size_t i = 0; i < iv_.size(); ++i) {
        auto [a, b] = iv_[i];
        if (v < a || v > b) continue;
        if (a == b) {
            iv_.erase(iv_.begin() + static_cast<std::ptrdiff_t>(i));
        } else if (v == a) {
            iv_[i].first = a + 1;
        } else if (v == b) {
            iv_[i].second = b - 1;
        } else {
            iv_[i].second = v - 1;
            iv_.insert(iv_.begin() + static_cast<std::ptrdiff_t>(i) + 1, {v + 1, b});
        }
        return true;
    }
    return false;
}

bool IntDomain::intersect(const IntDomain& o) {
    std::vector<std::pair<i64, i64>> out;
    std::size_t i = 0, j = 0;
    while (i < iv_.size() && j < o.iv_.size()) {
        i64 x = std::max(iv_[i].first, o.iv_[j].first);
        i64 y = std::min(iv_[i].second, o.iv_[j].second);
        if (x <= y) out.push_back({x, y});
        if (iv_[i].second < o.iv_[j].second)
            ++i;
        else
            ++j;
    }
    bool changed = out != iv_;
    iv_ = std::move(out);
    return changed;
}

std::optional<i64> IntDomain::next_above(i64 v) const {
    if (v == kMax) return std::nullopt;
    for (auto& [a, b] : iv_) {
        if (b <= v) continue;
        return std::max(a, v + 1);
    }
    return std::nullopt;
}

std::string IntDomain::str() const {
    std::string out = "{";
    bool first = true;
    for (auto& [a, b] : iv_) {
        if (!first) out += ",";
        first = false;
        if (a == b)
            out += std::to_string(a);
        else if (b - a == 1)
            out += std::to_string(a) + "," + std::to_string(b);
        else
            out += std::to_string(a) + ".." + std::to_string(b);
    }
    return out + "}";
}

namespace {

// A propagator operand after dereferencing: a fixed value or a variable.
struct Opnd {
    bool fixed = false;
    i64 val = 0;
    VarId v = 0;
};

Opnd operand(const Store& s, VarId id) {
    VarId cur = id;
    while (true) {
        const Term* t = s.lookup(cur);
        if (!t) return {false, 0, cur};
        if ((*t)->kind == TermKind::Int) return {true, (*t)->ival, 0};
        if ((*t)->kind == TermKind::Var) {
            cur = (*t)->id;
            continue;
        }
        // Bound to a non-integer: report as an impossible fixed operand via val sentinel.
        return {true, 0, static_cast<VarId>(-1)};
    }
}

bool bad(const Opnd& o) { return o.fixed && o.v == static_cast<VarId>(-1); }

std::pair<i64, i64> bounds(Store& s, const Opnd& o) {
    if (o.fixed) return {o.val, o.val};
    IntDomain d = s.ensure_domain(o.v);
    return {d.lo(), d.hi()};
}

// Narrow a variable to [lo,hi]; binds on singleton. Returns false if empty.
// Variables narrowed since the propagation queue last looked.
std::vector<VarId>* narrowed = nullptr;

void note(VarId v) {
    if (narrowed) narrowed->push_back(v);
}

bool narrow(Store& s, VarId v, i128 lo, i128 hi, bool& changed) {
    IntDomain d = s.ensure_domain(v);
    if (lo > hi) return false;
    if (lo <= d.lo() && hi >= d.hi()) return true;
    if (!d.restrict(clamp64(lo), clamp64(hi))) return true;
    if (d.empty()) return false;
    s.set_domain(v, d);
    if (d.singleton()) s.bind(v, mk_int(d.lo()));
    note(v);
    changed = true;
    return true;
}

bool narrow_dom(Store& s, VarId v, const IntDomain& with, bool& changed) {
    IntDomain d = s.ensure_domain(v);
    if (!d.intersect(with)) return true;
    if (d.empty()) return false;
    s.set_domain(v, d);
    if (d.singleton()) s.bind(v, mk_int(d.lo()));
    note(v);
    changed = true;
    return true;
}

bool remove_value(Store& s, VarId v, i64 val, bool& changed) {
    IntDomain d = s.ensure_domain(v);
    if (!d.remove(val)) return true;
    if (d.empty()) return false;
    s.set_domain(v, d);
    if (d.singleton()) s.bind(v, mk_int(d.lo()));
    note(v);
    changed = true;
    return true;
}

struct NormLin {
    std::vector<std::pair<i128, VarId>> terms;
    i128 k = 0;
    bool ok = true;
};

NormLin normalize(Store& s, const IntProp& p) {
    NormLin n;
    n.k = p.k;
    std::map<VarId, i128> acc;
    for (auto& [c, v] : p.terms) {
        Opnd o = operand(s, v);
        if (bad(o)) {
            n.ok = false;
            return n;
        }
        if (o.fixed)
            n.k += static_cast<i128>(c) * o.val;
        else
            acc[o.v] += c;
    }
    for (auto& [v, c] : acc)
        if (c != 0) n.terms.push_back({c, v});
    return n;
}

bool run_lin(Store& s, const IntProp& p, bool& changed) {
    NormLin n = normalize(s, p);
    if (!n.ok) return false;
    if (n.terms.empty()) {
        switch (p.rel) {
            case IntProp::Rel::Eq: return n.k == 0;
            case IntProp::Rel::Neq: return n.k != 0;
            case IntProp::Rel::Le: return n.k <= 0;
        }
    }
    if (p.rel == IntProp::Rel::Neq) {
        if (n.terms.size() != 1) return true;
        auto [a, v] = n.terms[0];
        if ((-n.k) % a != 0) return true;
        i128 val = -n.k / a;
        if (val > kMax || val < kMin) return true;
        return remove_value(s, v, static_cast<i64>(val), changed);
    }
    std::vector<std::pair<i128, i128>> contrib;
    i128 smin = n.k, smax = n.k;
    for (auto& [a, v] : n.terms) {
        IntDomain d = s.ensure_domain(v);
        i128 x = a * d.lo(), y = a * d.hi();
        if (x > y) std::swap(x, y);
        contrib.push_back({x, y});
        smin += x;
        smax += y;
    }
    if (smin > 0) return false;
    if (p.rel == IntProp::Rel::Eq && smax < 0) return false;
    for (std::size_t i = 0; i < n.terms.size(); ++i) {
        auto [a, v] = n.terms[i];
        i128 up = -(smin - contrib[i].first);  // a*x <= up
        i128 lo_bound = kMin, hi_bound = kMax;
        if (a > 0)
            hi_bound = floor_div(up, a);
        else
            lo_bound = ceil_div(up, a);
        if (p.rel == IntProp::Rel::Eq) {
            i128 down = -(smax - contrib[i].second);  // a*x >= down
            if (a > 0)
                lo_bound = std::max(lo_bound, ceil_div(down, a));
            else
                hi_bound = std::min(hi_bound, floor_div(down, a));
        }
        if (!narrow(s, v, lo_bound, hi_bound, changed)) return false;
    }
    return true;
}

// Quotient bounds of z/y for y of a single sign.
std::pair<i128, i128> quot_bounds(i64 zl, i64 zh, i64 yl, i64 yh) {
    i128 lo = 0, hi = 0;
    bool first = true;
    for (i64 zz : {zl, zh})
        for (i64 yy : {yl, yh}) {
            i128 f = floor_div(zz, yy), c = ceil_div(zz, yy);
            if (first) {
                lo = f;
                hi = c;
                first = false;
            } else {
                lo = std::min(lo, f);
                hi = std::max(hi, c);
            }
        }
    return {lo, hi};
}

bool run_mul(Store& s, const IntProp& p, bool& changed) {
    Opnd x = operand(s, p.x), y = operand(s, p.y), z = operand(s, p.z);
    if (bad(x) || bad(y) || bad(z)) return false;
    auto [xl, xh] = bounds(s, x);
    auto [yl, yh] = bounds(s, y);
    bool square = !x.fixed && !y.fixed && x.v == y.v;
    i128 pl, ph;
    if (square) {
        i128 a = static_cast<i128>(xl) * xl, b = static_cast<i128>(xh) * xh;
        ph = std::max(a, b);
        pl = (xl <= 0 && xh >= 0) ? 0 : std::min(a, b);
    } else {
        i128 c[4] = {static_cast<i128>(xl) * yl, static_cast<i128>(xl) * yh, static_cast<i128>(xh) * yl,
                     static_cast<i128>(xh) * yh};
        pl = *std::min_element(c, c + 4);
        ph = *std::max_element(c, c + 4);
    }
    if (z.fixed) {
        if (z.val < pl || z.val > ph) return false;
    } else if (!narrow(s, z.v, pl, ph, changed)) {
        return false;
    }
    z = operand(s, p.z);
    auto [zl, zh] = bounds(s, z);
    if (square) {
        if (zh < 0) return false;
        i64 rh = isqrt_floor(zh), rl = isqrt_ceil(std::max<i64>(zl, 0));
        if (rl > rh) return false;
        IntDomain allowed = IntDomain::from_intervals({{-rh, -rl}, {rl, rh}});
        return narrow_dom(s, x.v, allowed, changed);
    }
    if (x.fixed && y.fixed) return static_cast<i128>(x.val) * y.val == static_cast<i128>(zl) && zl == zh;
    // x from z / y when y has a single sign, and symmetrically.
    if (!x.fixed && (yl > 0 || yh < 0)) {
        auto [lo, hi] = quot_bounds(zl, zh, yl, yh);
        if (!narrow(s, x.v, lo, hi, changed)) return false;
        if (y.fixed && zl == zh && zl % y.val != 0) return false;
    }
    if (!y.fixed && (xl > 0 || xh < 0)) {
        auto [lo, hi] = quot_bounds(zl, zh, xl, xh);
        if (!narrow(s, y.v, lo, hi, changed)) return false;
        if (x.fixed && zl == zh && zl % x.val != 0) return false;
    }
    return true;
}

bool run_mod(Store& s, const IntProp& p, bool& changed) {
    Opnd x = operand(s, p.x), m = operand(s, p.y), z = operand(s, p.z);
    if (bad(x) || bad(m) || bad(z)) return false;
    if (m.fixed) {
        if (m.val <= 0) return false;
    } else if (!narrow(s, m.v, 1, kMax, changed)) {
        return false;
    }
    m = operand(s, p.y);
    auto [ml, mh] = bounds(s, m);
    if (z.fixed) {
        if (z.val < 0 || z.val > mh - 1) return false;
    } else if (!narrow(s, z.v, 0, static_cast<i128>(mh) - 1, changed)) {
        return false;
    }
    x = operand(s, p.x);
    z = operand(s, p.z);
    auto [xl, xh] = bounds(s, x);
    auto [zl, zh] = bounds(s, z);
    if (x.fixed && m.fixed) {
        i64 r = *int_mod(x.val, m.val);
        if (z.fixed) return z.val == r;
        return narrow(s, z.v, r, r, changed);
    }
    if (m.fixed) {
        i128 c = m.val;
        i128 ql = floor_div(xl, c), qh = floor_div(xh, c);
        if (ql == qh) {
            if (!z.fixed && !narrow(s, z.v, xl - c * ql, xh - c * ql, changed)) return false;
            z = operand(s, p.z);
            auto [zl2, zh2] = bounds(s, z);
            if (!x.fixed && !narrow(s, x.v, zl2 + c * ql, zh2 + c * ql, changed)) return false;
        } else if (z.fixed && !x.fixed) {
            // Move x bounds to the nearest values with the right remainder.
            i128 lo = xl + ((z.val - (xl - c * ql)) % c + c) % c;
            i128 hi = xh - (((xh - c * qh) - z.val) % c + c) % c;
            if (!narrow(s, x.v, lo, hi, changed)) return false;
        }
        return true;
    }
    if (xl >= 0 && xh < ml) {
        if (!z.fixed && !narrow(s, z.v, xl, xh, changed)) return false;
        if (!x.fixed && !narrow(s, x.v, zl, zh, changed)) return false;
    }
    return true;
}

bool run_prop(Store& s, const IntProp& p, bool& changed) {
    switch (p.kind) {
        case IntProp::Kind::Lin: return run_lin(s, p, changed);
        case IntProp::Kind::Mul: return run_mul(s, p, changed);
        case IntProp::Kind::Mod: return run_mod(s, p, changed);
    }
    return true;
}

// Opposite linear inequalities over the same variables must have compatible constants.
bool pairwise_check(Store& s, const IntProps& props) {
    std::vector<NormLin> les;
    for (auto& p : props) {
        if (p.kind != IntProp::Kind::Lin || p.rel == IntProp::Rel::Neq) continue;
        NormLin n = normalize(s, p);
        if (!n.ok || n.terms.empty()) continue;
        les.push_back(n);
        if (p.rel == IntProp::Rel::Eq) {
            for (auto& t : n.terms) t.first = -t.first;
            n.k = -n.k;
            les.push_back(std::move(n));
        }
    }
    for (std::size_t i = 0; i < les.size(); ++i)
        for (std::size_t j = i + 1; j < les.size(); ++j) {
            if (les[i].terms.size() != les[j].terms.size()) continue;
            bool opposite = true;
            for (std::size_t t = 0; t < les[i].terms.size() && opposite; ++t)
                opposite = les[i].terms[t].second == les[j].terms[t].second &&
                           les[i].terms[t].first == -les[j].terms[t].first;
            if (opposite && les[i].k + les[j].k > 0) return false;
        }
    return true;
}

// Difference equations a - b = d are checked exactly with a weighted
// union-find: a cycle such as a - b = 1, b - c = 1, c - a = 1 is refuted here,
// where bounds reasoning would only creep toward the domain limits.
bool difference_check(Store& s, const IntProps& props) {
    std::unordered_map<VarId, std::pair<VarId, i128>> parent;  // v -> (parent, v - parent)
    std::function<std::pair<VarId, i128>(VarId)> find = [&](VarId v) -> std::pair<VarId, i128> {
        auto it = parent.find(v);
        if (it == parent.end() || it->second.first == v) return {v, 0};
        auto [root, off] = find(it->second.first);
        it->second = {root, it->second.second + off};
        return it->second;
    };
    for (auto& p : props) {
        if (p.kind != IntProp::Kind::Lin || p.rel != IntProp::Rel::Eq || p.terms.size() < 2) continue;
        NormLin n = normalize(s, p);
        if (!n.ok || n.terms.size() != 2) continue;
        auto [c1, a] = n.terms[0];
        auto [c2, b] = n.terms[1];
        if (c1 != -c2) continue;
        // c1 * (a - b) + k = 0
        if (n.k % c1 != 0) return false;
        i128 d = -n.k / c1;
        auto [ra, oa] = find(a);
        auto [rb, ob] = find(b);
        if (ra == rb) {
            if (oa - ob != d) return false;
            continue;
        }
        // a = ra + oa, b = rb + ob, a - b = d  =>  ra - rb = d - oa + ob
        parent[ra] = {rb, d - oa + ob};
    }
    return true;
}

struct Builder {
    Store& s;
    IntProps& props;

    bool lin(const Term& t, i128 coef, std::map<VarId, i128>& acc, i128& k) {
        Term d = deref(t, s);
        switch (d->kind) {
            case TermKind::Int:
                k += coef * d->ival;
                return true;
            case TermKind::Var:
                s.ensure_domain(d->id);
                acc[d->id] += coef;
                return true;
            case TermKind::Expr: {
                if (auto v = eval_int(d, s)) {
                    k += coef * *v;
                    return true;
                }
                switch (d->op) {
                    case ExprOp::Add:
                        return lin(d->a, coef, acc, k) && lin(d->b, coef, acc, k);
                    case ExprOp::Sub:
                        return lin(d->a, coef, acc, k) && lin(d->b, -coef, acc, k);
                    case ExprOp::Mul: {
                        if (auto c = eval_int(d->a, s)) return lin(d->b, coef * *c, acc, k);
                        if (auto c = eval_int(d->b, s)) return lin(d->a, coef * *c, acc, k);
                        auto x = as_var(d->a), y = as_var(d->b);
                        if (!x || !y) return false;
                        VarId z = s.pool().fresh()->id;
                        s.ensure_domain(z);
                        IntProp p;
                        p.kind = IntProp::Kind::Mul;
                        p.x = *x;
                        p.y = *y;
                        p.z = z;
                        props.push_back(p);
                        acc[z] += coef;
                        return true;
                    }
                    case ExprOp::Mod: {
                        auto x = as_var(d->a), m = as_var(d->b);
                        if (!x || !m) return false;
                        VarId z = s.pool().fresh()->id;
                        s.ensure_domain(z);
                        IntProp p;
                        p.kind = IntProp::Kind::Mod;
                        p.x = *x;
                        p.y = *m;
                        p.z = z;
                        props.push_back(p);
                        acc[z] += coef;
                        return true;
                    }
                }
                return false;
            }
            default:
                return false;
        }
    }

    // A variable standing for t; constants and compound expressions get a helper variable.
    std::optional<VarId> as_var(const Term& t) {
        Term d = deref(t, s);
        if (d->kind == TermKind::Var) {
            s.ensure_domain(d->id);
            return d->id;
        }
        VarId v = s.pool().fresh()->id;
        s.ensure_domain(v);
        std::map<VarId, i128> acc;
        i128 k = 0;
        if (!lin(d, -1, acc, k)) return std::nullopt;
        acc[v] += 1;
        IntProp p;
        p.kind = IntProp::Kind::Lin;
        p.rel = IntProp::Rel::Eq;
        if (!fill(p, acc, k)) return std::nullopt;
        props.push_back(p);
        return v;
    }

    static bool fill(IntProp& p, const std::map<VarId, i128>& acc, i128 k) {
        if (k > kMax || k < kMin) return false;
        p.k = static_cast<i64>(k);
        for (auto& [v, c] : acc) {
            if (c == 0) continue;
            if (c > kMax || c < kMin) return false;
            p.terms.push_back({static_cast<i64>(c), v});
        }
        return true;
    }
};

}  // namespace

bool post_int(Store& s, const Formula& a, IntProps& props) {
    Term lhs = a->args[0], rhs = a->args[1];
    IntProp p;
    p.kind = IntProp::Kind::Lin;
    p.src = a;
    i128 extra = 0;
    switch (a->kind) {
        case AtomKind::Eq:
        case AtomKind::IntEq:
            p.rel = IntProp::Rel::Eq;
            break;
        case AtomKind::Neq:
        case AtomKind::IntNeq:
            p.rel = IntProp::Rel::Neq;
            break;
        case AtomKind::Le:
            p.rel = IntProp::Rel::Le;
            break;
        case AtomKind::Lt:
            p.rel = IntProp::Rel::Le;
            extra = 1;
            break;
        case AtomKind::Ge:
            p.rel = IntProp::Rel::Le;
            std::swap(lhs, rhs);
            break;
        case AtomKind::Gt:
            p.rel = IntProp::Rel::Le;
            std::swap(lhs, rhs);
            extra = 1;
            break;
        default:
            throw std::logic_error("post_int on a non-integer atom");
    }
    Builder b{s, props};
    std::map<VarId, i128> acc;
    i128 k = extra;
    if (!b.lin(lhs, 1, acc, k) || !b.lin(rhs, -1, acc, k)) return false;
    if (!Builder::fill(p, acc, k)) return false;
    props.push_back(std::move(p));
    return propagate_ints(s, props);
}

bool propagate_ints(Store& s, IntProps& props) {
    if (!pairwise_check(s, props) || !difference_check(s, props)) return false;
    // Which propagators mention each unbound variable.
    std::unordered_map<VarId, std::vector<std::size_t>> watchers;
    for (std::size_t i = 0; i < props.size(); ++i) {
        auto watch = [&](VarId id) {
            Opnd o = operand(s, id);
            if (!o.fixed) watchers[o.v].push_back(i);
        };
        const IntProp& p = props[i];
        if (p.kind == IntProp::Kind::Lin) {
            for (auto& t : p.terms) watch(t.second);
        } else {
            watch(p.x);
            watch(p.y);
            watch(p.z);
        }
    }
    std::deque<std::size_t> queue;
    std::vector<char> queued(props.size(), 1);
    for (std::size_t i = 0; i < props.size(); ++i) queue.push_back(i);
    std::vector<VarId> touched;
    narrowed = &touched;
    struct Reset {
        ~Reset() { narrowed = nullptr; }
    } reset;
    // Bounds reasoning can creep by one step at a time on cyclic inequalities;
    // the cap keeps propagation sound but incomplete there.
    const std::size_t cap = 200000 + 20 * props.size();
    for (std::size_t runs = 0; !queue.empty() && runs < cap; ++runs) {
        std::size_t i = queue.front();
        queue.pop_front();
        queued[i] = 0;
        bool changed = false;
        touched.clear();
        if (!run_prop(s, props[i], changed)) return false;
        for (VarId v : touched) {
            auto it = watchers.find(v);
            if (it == watchers.end()) continue;
            for (std::size_t j : it->second)
                if (!queued[j]) {
                    queued[j] = 1;
                    queue.push_back(j);
                }
        }
    }
    s.clear_int_dirty();
    return true;
}

void prune_props(Store& s, IntProps& props) {
    auto fixed = [&](const IntProp& p) {
        if (p.kind == IntProp::Kind::Lin) {
            for (auto& t : p.terms)
                if (!operand(s, t.second).fixed) return false;
            return true;
        }
        return operand(s, p.x).fixed && operand(s, p.y).fixed && operand(s, p.z).fixed;
    };
    // Linear relations that hold for every value left in the domains.
    auto entailed = [&](const IntProp& p) {
        if (p.kind != IntProp::Kind::Lin || p.rel == IntProp::Rel::Eq) return false;
        __int128 lo = p.k, hi = p.k;
        for (auto& [c, id] : p.terms) {
            Opnd o = operand(s, id);
            __int128 a, b;
            if (o.fixed) {
                a = b = o.val;
            } else {
                const IntDomain* d = s.domain(o.v);
                a = d ? d->lo() : s.options().glb;
                b = d ? d->hi() : s.options().lub;
            }
            lo += c >= 0 ? c * a : c * b;
            hi += c >= 0 ? c * b : c * a;
        }
        if (p.rel == IntProp::Rel::Le) return hi <= 0;
        if (lo > 0 || hi < 0) return true;
        if (p.terms.size() == 1) {
            auto [c, id] = p.terms[0];
            Opnd o = operand(s, id);
            const IntDomain* d = o.fixed ? nullptr : s.domain(o.v);
            return d && (-p.k) % c == 0 && !d->contains(-p.k / c);
        }
        return false;
    };
    props.erase(std::remove_if(props.begin(), props.end(), [&](const IntProp& p) { return fixed(p) || entailed(p); }),
                props.end());
}

std::vector<VarId> prop_vars(const Store& s, const IntProps& props) {
    std::vector<VarId> out;
    auto add = [&](VarId id) {
        Opnd o = operand(s, id);
        if (!o.fixed && std::find(out.begin(), out.end(), o.v) == out.end()) out.push_back(o.v);
    };
    for (auto& p : props) {
        if (p.kind == IntProp::Kind::Lin) {
            for (auto& t : p.terms) add(t.second);
        } else {
            add(p.x);
            add(p.y);
            add(p.z);
        }
    }
    return out;
}

}  // namespace setris
