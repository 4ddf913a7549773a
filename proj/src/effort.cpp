#include "recsim/effort.hpp"

#include <cmath>

#include "recsim/vec.hpp"

namespace recsim {

namespace {
constexpr double kGapFloor = 1e-12;  // gaps at or below this count as closed
}

double effort_cost(double gamma, const EffortParams& params, double gap) {
    params.validate();
    if (!(gap > 0.0)) throw DomainError("effort_cost: gap must be > 0");
    if (gamma < 0.0 || gamma >= gap)
        throw DomainError("effort_cost: gamma must lie in [0, gap)");
    return 0.5 * params.k * gamma * gamma - params.theta * std::log(gap - gamma);
}

double benefit_coefficient(const EffortParams& params, std::span<const double> w,
                           std::span<const double> d_tilde) {
    params.validate();
    return params.beta * dot(w, d_tilde);
}

EffortResult optimal_effort(double S, const EffortParams& params, double gap) {
    params.validate();
    if (!(gap > 0.0)) throw DomainError("optimal_effort: gap must be > 0");

    EffortResult res;
    res.benefit_coeff = S;
    if (gap <= kGapFloor) {
        res.gamma = 0.0;
        res.interior = false;
        res.foc_residual = 0.0;
        return res;
    }

    const double k = params.k;
    const double theta = params.theta;
    // k g^2 - (k*gap + S) g - (theta - S*gap) = 0; the admissible root is the
    // smaller one. disc = (k*gap + S)^2 + 4k(theta - S*gap)
    //               = (k*gap - S)^2 + 4k*theta > 0.
    const double b = k * gap + S;
    const double disc = (k * gap - S) * (k * gap - S) + 4.0 * k * theta;
    const double sq = std::sqrt(disc);
    double root;
    if (S * gap > theta) {
        // product form avoids cancellation between b and sq
        root = 2.0 * (S * gap - theta) / (b + sq);
    } else {
        root = (b - sq) / (2.0 * k);
    }

    if (root <= 0.0) {
        res.gamma = 0.0;
        res.interior = false;
        res.foc_residual = 0.0;
        return res;
    }
    if (root >= gap) root = std::nextafter(gap, 0.0);  // roundoff guard
    res.gamma = root;
    res.interior = true;
    res.foc_residual = S - k * root - theta / (gap - root);
    return res;
}

}  // namespace recsim
