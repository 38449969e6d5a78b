#include "blockfade/mc.hpp"

namespace blockfade {

double empirical_tail(std::span<const double> values, double threshold) {
    if (values.empty()) throw std::domain_error("empirical_tail: values must be non-empty");
    std::int64_t hits = 0;
    for (const double v : values) {
        if (v <= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace blockfade
