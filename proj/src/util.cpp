#include "qpomdp/util.hpp"

#include <cstdlib>

namespace qpomdp {

Caps Caps::from_env() {
    Caps c;
    if (const char* env = std::getenv("QPOMDP_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) {
            c.max_supports = v;
            c.max_product_states = v * 4;
        }
    }
    return c;
}

} // namespace qpomdp
