#include "mixdetect/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace mixdetect {

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("MIXDETECT_THREADS")) {
        try {
            const int requested = std::stoi(cap);
            if (requested >= 1) n = std::min(n, requested);
        } catch (...) {
            // unparsable cap is ignored
        }
    }
    return n;
}

}  // namespace mixdetect
