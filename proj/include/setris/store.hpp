// Solver state: bindings, integer domains, trail and the RIS expansion cache.
#pragma once

#include <setris/int_solver.hpp>
#include <setris/terms.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace setris {

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    std::int64_t glb = -1000000;
    std::int64_t lub = 1000000;
    std::size_t step_limit = 100000;
    std::size_t cache_size = 1024;
    std::size_t max_subsolve_depth = 64;
    // Compare fully ground set arguments canonically instead of rewriting them.
    bool ground_fastpath = true;
};

// Memo of filter/pattern evaluation for ground RIS domain elements.
// Fixed capacity with second-chance (clock) replacement.
class ExpansionCache {
public:
    struct Key {
        const void* control = nullptr;
        const void* filter = nullptr;
        const void* pattern = nullptr;
        std::string elem;  // canonical ground element
        bool operator==(const Key& o) const {
            return control == o.control && filter == o.filter && pattern == o.pattern && elem == o.elem;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    struct Value {
        bool pass = false;
        Term pattern;  // ground pattern value when pass
    };

    explicit ExpansionCache(std::size_t capacity = 1024);
    void set_capacity(std::size_t capacity);
    std::size_t capacity() const { return slots_.size(); }
    std::size_t size() const { return index_.size(); }

    // Sets the reference bit on a hit.
    const Value* get(const Key& k);
    // Returns the evicted key, if any.
    std::optional<Key> put(const Key& k, Value v);
    void erase(const Key& k);
    void clear();

    std::size_t hits = 0, misses = 0, evictions = 0;

private:
    struct Slot {
        Key key;
        Value value;
        bool used = false;
        bool ref = false;
    };
    std::vector<Slot> slots_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
    std::size_t hand_ = 0;
};

std::string ground_key(const GroundValue& g);

class Store : public Bindings {
public:
    Store(VarPool& pool, SolverOptions opts = {});

    const Term* lookup(VarId v) const override;
    VarPool& pool() { return *pool_; }
    const SolverOptions& options() const { return opts_; }
    SolverOptions& options() { return opts_; }

    // Raw trailed binding; callers enforce the binding rules.
    void bind(VarId v, Term t);
    const IntDomain* domain(VarId v) const;
    // Trailed. Does not check emptiness.
    void set_domain(VarId v, IntDomain d);
    // Domain of an integer variable, creating the default one on first use.
    IntDomain ensure_domain(VarId v);

    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark);

    ExpansionCache& cache() { return cache_; }
    const ExpansionCache::Value* cache_get(const ExpansionCache::Key& k) { return cache_.get(k); }
    void cache_put(const ExpansionCache::Key& k, ExpansionCache::Value v);

    // Variables bound or narrowed since the last call.
    std::vector<VarId> take_changed();
    bool int_dirty() const { return int_dirty_; }
    void clear_int_dirty() { int_dirty_ = false; }

    void step();  // throws ResourceLimit past the step limit
    std::size_t steps() const { return steps_; }
    void reset_steps() { steps_ = 0; }

    int subsolve_depth = 0;

    const std::unordered_map<VarId, Term>& bindings() const { return bind_; }

private:
    struct Entry {
        enum class Kind : std::uint8_t { Bind, Domain, Cache } kind;
        VarId v = 0;
        std::optional<IntDomain> old;
        std::optional<ExpansionCache::Key> key;
    };
    VarPool* pool_;
    SolverOptions opts_;
    std::unordered_map<VarId, Term> bind_;
    std::unordered_map<VarId, IntDomain> dom_;
    std::vector<Entry> trail_;
    ExpansionCache cache_;
    std::vector<VarId> changed_;
    bool int_dirty_ = false;
    std::size_t steps_ = 0;
};

}  // namespace setris
