#include "core/linalg.hpp"

#include <atomic>

namespace steffkit {

namespace {
std::atomic<std::uint64_t> g_lu_calls{0};
}

std::uint64_t lu_factor_count() { return g_lu_calls.load(std::memory_order_relaxed); }
void reset_lu_factor_count() { g_lu_calls.store(0, std::memory_order_relaxed); }

namespace detail {
void bump_lu_factor_count() { g_lu_calls.fetch_add(1, std::memory_order_relaxed); }
}

}  // namespace steffkit
