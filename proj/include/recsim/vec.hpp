#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "recsim/errors.hpp"

namespace recsim {

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

inline std::vector<double> sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("sub: dimension mismatch");
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

}  // namespace recsim
