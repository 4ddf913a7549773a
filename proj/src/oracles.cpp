#include "recsim/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace recsim {

double oracle_cvar(std::span<const double> scores, double rho) {
    const std::size_t n = scores.size();
    std::size_t m = tail_count(n, rho);
    double best = std::numeric_limits<double>::infinity();
    for (double eta : scores) {
        double phi = eta;
        for (double s : scores)
            if (s > eta) phi += (s - eta) / static_cast<double>(m);
        best = std::min(best, phi);
    }
    return best;
}

SelectionOutcome oracle_designer(const PopulationState& state, double rho, double lambda,
                                 std::uint64_t cap) {
    const std::size_t n = state.size();
    const std::size_t d = state.dim();
    const std::size_t m = tail_count(n, rho);
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");

    double count = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (count > static_cast<double>(cap))
        throw ConfigError("oracle_designer: C(n, rho*n) exceeds the enumeration cap");

    std::vector<std::size_t> comb(m);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    std::vector<std::size_t> best_comb;
    double best_val = -1.0;
    std::vector<double> sum(d);
    while (true) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t i : comb)
            for (std::size_t j = 0; j < d; ++j) sum[j] += state.candidates[i].features[j];
        double v = 0.0;
        for (double s : sum) v += s * s;
        if (best_comb.empty() || v > best_val || (v == best_val && comb < best_comb)) {
            best_comb = comb;
            best_val = v;
        }
        std::size_t i = m;
        while (i > 0 && comb[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < m; ++j) comb[j] = comb[j - 1] + 1;
    }

    SelectionOutcome out;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t i : best_comb)
        for (std::size_t j = 0; j < d; ++j) sum[j] += state.candidates[i].features[j];
    out.w.resize(d);
    for (std::size_t j = 0; j < d; ++j)
        out.w[j] = sum[j] / (lambda * static_cast<double>(m));
    out.degenerate_w = std::sqrt(best_val) <= 1e-12;
    out.selected = best_comb;

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += out.w[j] * state.candidates[i].features[j];
        scores[i] = s;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    out.eta = scores[order[m - 1]];
    double tail_mean = 0.0;
    for (std::size_t r = 0; r < m; ++r) tail_mean += scores[order[r]];
    tail_mean /= static_cast<double>(m);
    double wn2 = 0.0;
    for (double v : out.w) wn2 += v * v;
    out.objective = tail_mean - 0.5 * lambda * wn2;
    out.alpha.assign(n, 0.0);
    for (std::size_t i : best_comb) out.alpha[i] = 1.0 / static_cast<double>(m);
    out.rejected.clear();
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (k < best_comb.size() && best_comb[k] == i)
            ++k;
        else
            out.rejected.push_back(i);
    }
    return out;
}

double oracle_effort(double S, const EffortParams& params, double gap, double resolution,
                     bool parallel) {
    params.validate();
    if (!(gap > 0.0)) throw DomainError("oracle_effort: gap must be > 0");
    if (!(resolution > 0.0)) throw DomainError("oracle_effort: resolution must be > 0");

    const double upper = gap * (1.0 - 1e-9);
    const std::int64_t steps = static_cast<std::int64_t>(upper / resolution);
    const double k = params.k;
    const double theta = params.theta;
    auto value = [&](double g) { return S * g - 0.5 * k * g * g + theta * std::log(gap - g); };

    double best_val = value(0.0);
    double best_g = 0.0;
#pragma omp parallel if (parallel)
    {
        double loc_val = -std::numeric_limits<double>::infinity();
        double loc_g = 0.0;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 1; i <= steps; ++i) {
            double g = static_cast<double>(i) * resolution;
            if (g >= gap) continue;
            double v = value(g);
            if (v > loc_val || (v == loc_val && g < loc_g)) {
                loc_val = v;
                loc_g = g;
            }
        }
#pragma omp critical
        {
            if (loc_val > best_val || (loc_val == best_val && loc_g < best_g)) {
                best_val = loc_val;
                best_g = loc_g;
            }
        }
    }
    return best_g;
}

double oracle_recourse(std::span<const double> x, std::span<const double> w, double eta,
                       const FeaturePartition& partition, std::size_t samples,
                       std::uint64_t seed) {
    if (x.size() != partition.dim || w.size() != partition.dim)
        throw DomainError("oracle_recourse: dimension mismatch");
    double margin = eta;
    for (std::size_t j = 0; j < x.size(); ++j) margin -= w[j] * x[j];
    if (margin <= 0.0) return 0.0;

    double wa2 = 0.0;
    for (std::size_t j : partition.actionable) wa2 += w[j] * w[j];
    if (wa2 == 0.0) throw DomainError("oracle_recourse: infeasible instance (w_A = 0)");

    // analytic candidate
    double best = margin * margin / (2.0 * wa2);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> slack(1.0, 3.0);
    for (std::size_t s = 0; s < samples; ++s) {
        // random actionable direction with positive w-component, scaled to a
        // feasible (over-satisfying) action
        std::vector<double> u(partition.actionable.size());
        double wu = 0.0;
        for (std::size_t t = 0; t < u.size(); ++t) {
            u[t] = gauss(rng);
            wu += w[partition.actionable[t]] * u[t];
        }
        if (wu == 0.0) continue;
        if (wu < 0.0) {
            for (double& v : u) v = -v;
            wu = -wu;
        }
        double scale = margin / wu * slack(rng);
        double c = 0.0;
        for (double v : u) c += (scale * v) * (scale * v);
        c *= 0.5;
        best = std::min(best, c);
    }
    return best;
}

}  // namespace recsim
