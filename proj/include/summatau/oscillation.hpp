#pragma once

#include <optional>
#include <string>
#include <vector>

#include "summatau/sequence.hpp"

namespace summatau {

/// Window maxima M_n(lambda) = max_{n+1 <= k <= [lambda*n]} |p_k - p_n| for
/// each lambda in lambda_grid and each n in n_grid. [lambda*n] is
/// floor(lambda * n); an empty window contributes M_n = 0 (vacuous max,
/// matching lim-sup semantics).
struct OscillationProfile {
    std::vector<double> lambda_grid;
    std::vector<std::uint64_t> n_grid;
    // rows[i][j] = M_{n_grid[j]}(lambda_grid[i])
    std::vector<std::vector<double>> rows;
    // tail_sup[i] = max over the sampled n of rows[i][*]
    std::vector<double> tail_sups;
};

OscillationProfile so_profile(const Sequence& seq, const std::vector<double>& lambda_grid,
                              const std::vector<std::uint64_t>& n_grid);

enum class SoClassification { SoEmpirical, NotSo, Inconclusive };

std::string to_string(SoClassification c);

struct SoWitness {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double gap = 0.0;
};

/// Slow-oscillation report over the fixed lambda ladder
/// {1.5, 1.25, 1.1, 1.05, 1.02, 1.01}, with tail-sups of M_n(lambda) taken
/// over a logarithmic n-grid in [64, n_max]:
///   SoEmpirical  tail-sups non-increasing as lambda drops and the smallest
///                is below max(10*eps_conv, 2.5*(lambda_min - 1)); the
///                second term keeps log-Lipschitz sequences (|p_m - p_n| <=
///                L ln(m/n), L <= 2.5) inside the certificate, which a bare
///                10*eps_conv threshold would reject.
///   NotSo        a gap at least the threshold persists at the smallest
///                lambda; the witness records the attaining (n, k) pair.
///   Inconclusive anything else.
/// The verdict is empirical at n_max; it never asserts the true limit.
struct SoReport {
    SoClassification classification = SoClassification::Inconclusive;
    std::vector<double> lambda_grid;
    std::vector<double> tail_sups;
    double threshold = 0.0;
    std::optional<SoWitness> witness;
    std::vector<std::string> diagnostics;
};

SoReport is_slowly_oscillating(const Sequence& seq, const ToleranceProfile& profile);

/// The fixed lambda ladder used by is_slowly_oscillating.
const std::vector<double>& so_lambda_grid();

/// Logarithmic n-grid in [64, cap] used by is_slowly_oscillating, clamped so
/// the widest window fits within profile.n_max terms.
std::vector<std::uint64_t> so_index_grid(const ToleranceProfile& profile);

/// CSV with header lambda,n,M_n.
std::string so_profile_csv(const OscillationProfile& profile);

} // namespace summatau
