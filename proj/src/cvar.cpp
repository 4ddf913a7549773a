#include "recsim/cvar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "recsim/vec.hpp"

namespace recsim {

void SelectionConfig::validate() const {
    if (!(rho > 0.0) || rho > 1.0) throw ConfigError("rho must lie in (0, 1]");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (restarts < 1) throw ConfigError("restarts must be >= 1");
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
}

std::size_t tail_count(std::size_t n, double rho) {
    if (n == 0) throw DomainError("tail_count: empty population");
    if (!(rho > 0.0) || rho > 1.0) throw RhoNotIntegral("rho must lie in (0, 1]");
    double m = rho * static_cast<double>(n);
    double r = std::round(m);
    if (std::abs(m - r) > 1e-9 || r < 1.0)
        throw RhoNotIntegral("rho * n = " + std::to_string(m) + " is not a positive integer");
    return static_cast<std::size_t>(r);
}

std::vector<double> scores_of(const PopulationState& state, std::span<const double> w) {
    if (w.size() != state.dim()) throw DomainError("scores_of: dimension mismatch");
    std::vector<double> s(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
        s[i] = dot(state.candidates[i].features, w);
    return s;
}

namespace {

// Candidate positions ordered by (score desc, position asc).
std::vector<std::size_t> score_order(std::span<const double> scores) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return idx;
}

}  // namespace

double upper_cvar(std::span<const double> scores, double rho) {
    std::size_t m = tail_count(scores.size(), rho);
    auto idx = score_order(scores);
    double sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) sum += scores[idx[r]];
    return sum / static_cast<double>(m);
}

double tail_threshold(std::span<const double> scores, double rho) {
    std::size_t m = tail_count(scores.size(), rho);
    auto idx = score_order(scores);
    return scores[idx[m - 1]];
}

std::vector<std::size_t> select_top(std::span<const double> scores, double rho) {
    std::size_t m = tail_count(scores.size(), rho);
    auto idx = score_order(scores);
    std::vector<std::size_t> sel(idx.begin(), idx.begin() + m);
    std::sort(sel.begin(), sel.end());
    return sel;
}

std::vector<std::size_t> select_top(const PopulationState& state, std::span<const double> w,
                                    double rho) {
    auto s = scores_of(state, w);
    return select_top(s, rho);
}

std::vector<double> dual_weights(std::span<const std::size_t> selected, std::size_t n,
                                 double rho) {
    std::size_t m = tail_count(n, rho);
    if (selected.size() != m)
        throw DomainError("dual_weights: selected set has wrong cardinality");
    std::vector<double> alpha(n, 0.0);
    for (std::size_t i : selected) {
        if (i >= n) throw DomainError("dual_weights: index out of range");
        alpha[i] = 1.0 / static_cast<double>(m);
    }
    return alpha;
}

namespace {

constexpr double kDegenerateNorm = 1e-12;

// Feature sum over a sorted subset, accumulated in index order so that equal
// subsets give bit-equal sums regardless of how they were found.
std::vector<double> subset_sum(const PopulationState& state,
                               std::span<const std::size_t> subset) {
    std::vector<double> s(state.dim(), 0.0);
    for (std::size_t i : subset)
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += state.candidates[i].features[j];
    return s;
}

struct LocalSolution {
    std::vector<std::size_t> subset;  // sorted
    double sum_norm2 = -1.0;
};

// Alternating maximization from an initial subset: I -> w(I) -> top-m by
// w(I). ||sum_I x|| is nondecreasing along the iteration (Cauchy-Schwarz:
// the new top-m subset maximizes the inner product with the old sum), so the
// loop reaches a fixed subset in finitely many rounds.
LocalSolution polish(const PopulationState& state, std::vector<std::size_t> subset, double rho,
                     int max_iters) {
    LocalSolution best;
    for (int it = 0; it < max_iters; ++it) {
        auto sum = subset_sum(state, subset);
        std::vector<double> scores(state.size());
        for (std::size_t i = 0; i < state.size(); ++i)
            scores[i] = dot(state.candidates[i].features, sum);
        auto next = select_top(scores, rho);
        if (next == subset) break;
        subset = std::move(next);
    }
    best.subset = std::move(subset);
    best.sum_norm2 = norm2(subset_sum(state, best.subset));
    return best;
}

// Deterministic merge: larger sum norm wins; ties go to the lexicographically
// smaller sorted index set.
bool better(const LocalSolution& a, const LocalSolution& b) {
    if (a.sum_norm2 != b.sum_norm2) return a.sum_norm2 > b.sum_norm2;
    return a.subset < b.subset;
}

LocalSolution solve_alternating(const PopulationState& state, const SelectionConfig& cfg,
                                std::size_t m) {
    const std::size_t n = state.size();

    // restart 0: top-m by the population-mean direction
    std::vector<std::vector<std::size_t>> starts;
    {
        std::vector<double> mean(state.dim(), 0.0);
        for (const auto& c : state.candidates)
            for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += c.features[j];
        for (double& v : mean) v /= static_cast<double>(n);
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) scores[i] = dot(state.candidates[i].features, mean);
        starts.push_back(select_top(scores, cfg.rho));
    }
    // remaining restarts: random m-subsets from the solver seed stream
    std::mt19937_64 rng(cfg.solver_seed);
    std::vector<std::size_t> pool(n);
    for (int r = 1; r < cfg.restarts; ++r) {
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < m; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<std::size_t> sub(pool.begin(), pool.begin() + m);
        std::sort(sub.begin(), sub.end());
        starts.push_back(std::move(sub));
    }

    std::vector<LocalSolution> results(starts.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(starts.size()); ++r)
        results[r] = polish(state, starts[r], cfg.rho, cfg.max_iters);

    LocalSolution best = results[0];
    for (std::size_t r = 1; r < results.size(); ++r)
        if (better(results[r], best)) best = results[r];
    // the winning restart is already a fixed point of the iteration
    return best;
}

LocalSolution solve_exhaustive(const PopulationState& state, const SelectionConfig& cfg,
                               std::size_t m) {
    const std::size_t n = state.size();
    double count = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (count > static_cast<double>(cfg.exhaustive_cap))
        throw ConfigError("exhaustive solver: C(n, rho*n) exceeds the cap; use alternating");

    std::vector<std::size_t> comb(m);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    LocalSolution best;
    while (true) {
        double v = norm2(subset_sum(state, comb));
        if (best.sum_norm2 < 0.0 || v > best.sum_norm2 ||
            (v == best.sum_norm2 && comb < best.subset)) {
            best.subset = comb;
            best.sum_norm2 = v;
        }
        // next combination in lexicographic order
        std::size_t i = m;
        while (i > 0 && comb[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < m; ++j) comb[j] = comb[j - 1] + 1;
    }
    // land on a select_top-consistent subset; the sum norm cannot decrease
    return polish(state, best.subset, cfg.rho, cfg.max_iters);
}

}  // namespace

SelectionOutcome solve_designer(const PopulationState& state, const SelectionConfig& cfg) {
    cfg.validate();
    const std::size_t n = state.size();
    const std::size_t m = tail_count(n, cfg.rho);

    LocalSolution sol = cfg.solver == SelectionConfig::Solver::exhaustive
                            ? solve_exhaustive(state, cfg, m)
                            : solve_alternating(state, cfg, m);

    SelectionOutcome out;
    auto sum = subset_sum(state, sol.subset);
    out.w.resize(state.dim());
    for (std::size_t j = 0; j < out.w.size(); ++j)
        out.w[j] = sum[j] / (cfg.lambda * static_cast<double>(m));
    out.degenerate_w = norm(sum) <= kDegenerateNorm;

    auto scores = scores_of(state, out.w);
    out.selected = select_top(scores, cfg.rho);
    out.rejected.clear();
    {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (k < out.selected.size() && out.selected[k] == i)
                ++k;
            else
                out.rejected.push_back(i);
        }
    }
    out.eta = tail_threshold(scores, cfg.rho);
    out.alpha = dual_weights(out.selected, n, cfg.rho);
    out.objective = upper_cvar(scores, cfg.rho) - 0.5 * cfg.lambda * norm2(out.w);
    return out;
}

}  // namespace recsim
