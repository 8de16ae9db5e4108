#include <setris/store.hpp>

namespace setris {

std::size_t ExpansionCache::KeyHash::operator()(const Key& k) const {
    std::size_t h = std::hash<std::string>{}(k.elem);
    for (const void* p : {k.control, k.filter, k.pattern})
        h ^= std::hash<const void*>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

ExpansionCache::ExpansionCache(std::size_t capacity) : slots_(capacity == 0 ? 1 : capacity) {}

void ExpansionCache::set_capacity(std::size_t capacity) {
    slots_.assign(capacity == 0 ? 1 : capacity, Slot{});
    index_.clear();
    hand_ = 0;
}

const ExpansionCache::Value* ExpansionCache::get(const Key& k) {
    auto it = index_.find(k);
    if (it == index_.end()) {
        ++misses;
        return nullptr;
    }
    ++hits;
    Slot& s = slots_[it->second];
    s.ref = true;
    return &s.value;
}

std::optional<ExpansionCache::Key> ExpansionCache::put(const Key& k, Value v) {
    auto it = index_.find(k);
    if (it != index_.end()) {
        slots_[it->second].value = std::move(v);
        slots_[it->second].ref = true;
        return std::nullopt;
    }
    // Advance the hand past referenced slots, clearing their bits.
    while (slots_[hand_].used && slots_[hand_].ref) {
        slots_[hand_].ref = false;
        hand_ = (hand_ + 1) % slots_.size();
    }
    std::optional<Key> evicted;
    Slot& s = slots_[hand_];
    if (s.used) {
        evicted = s.key;
        index_.erase(s.key);
        ++evictions;
    }
    s.key = k;
    s.value = std::move(v);
    s.used = true;
    s.ref = false;
    index_[k] = hand_;
    hand_ = (hand_ + 1) % slots_.size();
    return evicted;
}

void ExpansionCache::erase(const Key& k) {
    auto it = index_.find(k);
    if (it == index_.end()) return;
    slots_[it->second] = Slot{};
    index_.erase(it);
}

void ExpansionCache::clear() {
    for (auto& s : slots_) s = Slot{};
    index_.clear();
    hand_ = 0;
}

std::string ground_key(const GroundValue& g) {
    switch (g.kind) {
        case GroundValue::Int:
            return std::to_string(g.i);
        case GroundValue::Str:
            return "'" + g.s + "'";
        case GroundValue::Pair:
            return "(" + ground_key(*g.items[0]) + "," + ground_key(*g.items[1]) + ")";
        case GroundValue::Set: {
            std::string out = "{";
            for (std::size_t i = 0; i < g.items.size(); ++i) {
                if (i) out += ",";
                out += ground_key(*g.items[i]);
            }
            return out + "}";
        }
    }
    return "";
}

Store::Store(VarPool& pool, SolverOptions opts) : pool_(&pool), opts_(opts), cache_(opts.cache_size) {}

const Term* Store::lookup(VarId v) const {
    auto it = bind_.find(v);
    return it == bind_.end() ? nullptr : &it->second;
}

void Store::bind(VarId v, Term t) {
    bind_[v] = std::move(t);
    trail_.push_back({Entry::Kind::Bind, v, std::nullopt, std::nullopt});
    changed_.push_back(v);
    if (dom_.count(v)) int_dirty_ = true;
}

const IntDomain* Store::domain(VarId v) const {
    auto it = dom_.find(v);
    return it == dom_.end() ? nullptr : &it->second;
}

void Store::set_domain(VarId v, IntDomain d) {
    auto it = dom_.find(v);
    if (it != dom_.end() && it->second == d) return;
    Entry e{Entry::Kind::Domain, v, std::nullopt, std::nullopt};
    if (it != dom_.end()) {
        e.old = std::move(it->second);
        it->second = std::move(d);
    } else {
        dom_.emplace(v, std::move(d));
    }
    trail_.push_back(std::move(e));
    changed_.push_back(v);
    int_dirty_ = true;
}

IntDomain Store::ensure_domain(VarId v) {
    if (const IntDomain* d = domain(v)) return *d;
    IntDomain d(opts_.glb, opts_.lub);
    set_domain(v, d);
    return d;
}

void Store::undo(std::size_t mark) {
    while (trail_.size() > mark) {
        Entry& e = trail_.back();
        switch (e.kind) {
            case Entry::Kind::Bind:
                bind_.erase(e.v);
                break;
            case Entry::Kind::Domain:
                if (e.old)
                    dom_[e.v] = std::move(*e.old);
                else
                    dom_.erase(e.v);
                break;
            case Entry::Kind::Cache:
                cache_.erase(*e.key);
                break;
        }
        trail_.pop_back();
    }
    changed_.clear();
    int_dirty_ = false;
}

void Store::cache_put(const ExpansionCache::Key& k, ExpansionCache::Value v) {
    cache_.put(k, std::move(v));
    trail_.push_back({Entry::Kind::Cache, 0, std::nullopt, k});
}

std::vector<VarId> Store::take_changed() {
    std::vector<VarId> out;
    out.swap(changed_);
    return out;
}

void Store::step() {
    if (++steps_ > opts_.step_limit) throw ResourceLimit("step limit exceeded");
}

}  // namespace setris
