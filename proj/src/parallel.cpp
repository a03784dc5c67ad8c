#include "stochrd/parallel.hpp"

namespace stochrd {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) noexcept { g_threads = n; }

unsigned thread_count() noexcept {
    const unsigned n = g_threads.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace stochrd
