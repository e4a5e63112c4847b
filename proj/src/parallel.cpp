#include "abcmc/parallel.hpp"

namespace abcmc {

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

} // namespace abcmc
