#include "summatau/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "summatau/cesaro.hpp"
#include "summatau/io.hpp"

namespace summatau {

namespace {
constexpr std::uint64_t kBurnIn = 64;
constexpr double kSoLipschitzFactor = 2.5;
} // namespace

std::string to_string(SoClassification c) {
    switch (c) {
    case SoClassification::SoEmpirical: return "so_empirical";
    case SoClassification::NotSo: return "not_so";
    case SoClassification::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const std::vector<double>& so_lambda_grid() {
    static const std::vector<double> g = {1.5, 1.25, 1.1, 1.05, 1.02, 1.01};
    return g;
}

std::vector<std::uint64_t> so_index_grid(const ToleranceProfile& profile) {
    // Keep the widest window [n+1, 1.5n] within n_max terms.
    const std::uint64_t cap = std::max<std::uint64_t>(kBurnIn, profile.n_max / 2);
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n : cesaro_index_grid(cap))
        if (n >= kBurnIn) grid.push_back(n);
    return grid;
}

OscillationProfile so_profile(const Sequence& seq, const std::vector<double>& lambda_grid,
                              const std::vector<std::uint64_t>& n_grid) {
    for (double l : lambda_grid)
        if (!(l > 1.0)) throw std::invalid_argument("so_profile: every lambda must be > 1");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("so_profile: n grid must be strictly increasing");

    OscillationProfile prof;
    prof.lambda_grid = lambda_grid;
    prof.n_grid = n_grid;
    prof.rows.assign(lambda_grid.size(), std::vector<double>(n_grid.size(), 0.0));
    prof.tail_sups.assign(lambda_grid.size(), 0.0);

    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const double lambda = lambda_grid[i];
        for (std::size_t j = 0; j < n_grid.size(); ++j) {
            const std::uint64_t n = n_grid[j];
            const auto hi = static_cast<std::uint64_t>(
                std::floor(lambda * static_cast<double>(n)));
            double m = 0.0;
            if (hi >= n + 1) {
                const double pn = seq.term(n);
                seq.visit_range(n + 1, hi + 1, [&](std::uint64_t, std::span<const double> chunk) {
                    for (double p : chunk) m = std::max(m, std::abs(p - pn));
                    return true;
                });
            }
            prof.rows[i][j] = m;
            prof.tail_sups[i] = std::max(prof.tail_sups[i], m);
        }
    }
    return prof;
}

SoReport is_slowly_oscillating(const Sequence& seq, const ToleranceProfile& profile) {
    profile.validate();
    const auto& lambdas = so_lambda_grid();
    const auto n_grid = so_index_grid(profile);
    OscillationProfile prof = so_profile(seq, lambdas, n_grid);

    SoReport rep;
    rep.lambda_grid = lambdas;
    rep.tail_sups = prof.tail_sups;
    const double lambda_min = lambdas.back();
    rep.threshold = std::max(10.0 * profile.eps_conv, kSoLipschitzFactor * (lambda_min - 1.0));
    rep.diagnostics.push_back("empirical over sampled n in [64, " + std::to_string(n_grid.back()) +
                              "]; not a limit assertion");

    bool decreasing = true;
    for (std::size_t i = 1; i < prof.tail_sups.size(); ++i)
        if (prof.tail_sups[i] > prof.tail_sups[i - 1] + 1e-12) decreasing = false;

    const double smallest = prof.tail_sups.back();
    if (decreasing && smallest < rep.threshold) {
        rep.classification = SoClassification::SoEmpirical;
        return rep;
    }
    if (smallest >= rep.threshold) {
        // The gap persists at the smallest lambda (window-inclusion makes
        // M_n monotone in lambda, so it persists at every larger one too).
        rep.classification = SoClassification::NotSo;
        const std::size_t li = lambdas.size() - 1;
        for (std::size_t j = 0; j < n_grid.size(); ++j) {
            if (prof.rows[li][j] == smallest) {
                const std::uint64_t n = n_grid[j];
                const auto hi = static_cast<std::uint64_t>(
                    std::floor(lambdas[li] * static_cast<double>(n)));
                const double pn = seq.term(n);
                for (std::uint64_t k = n + 1; k <= hi; ++k) {
                    if (std::abs(seq.term(k) - pn) == smallest) {
                        rep.witness = SoWitness{n, k, smallest};
                        break;
                    }
                }
                break;
            }
        }
        return rep;
    }
    rep.classification = SoClassification::Inconclusive;
    rep.diagnostics.push_back("tail-sups not monotone in lambda");
    return rep;
}

std::string so_profile_csv(const OscillationProfile& profile) {
    std::string out = "lambda,n,M_n\n";
    for (std::size_t i = 0; i < profile.lambda_grid.size(); ++i) {
        for (std::size_t j = 0; j < profile.n_grid.size(); ++j) {
            out += format_double(profile.lambda_grid[i]);
            out += ',';
            out += std::to_string(profile.n_grid[j]);
            out += ',';
            out += format_double(profile.rows[i][j]);
            out += '\n';
        }
    }
    return out;
}

} // namespace summatau
