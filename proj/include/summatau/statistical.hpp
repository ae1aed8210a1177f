#pragma once

#include <string>
#include <vector>

#include "summatau/sequence.hpp"
#include "summatau/verdict.hpp"

namespace summatau {

/// Natural-density profile of the "bad" index set for candidate limit l:
/// d_n = (1/n) |{1 <= k <= n : |p_k - l| >= eps}|. Counting starts at k = 1
/// (n indices per window) so that, e.g., the perfect-square count up to n is
/// exactly floor(sqrt(n)).
struct DensityProfile {
    double eps = 0.0;
    double candidate = 0.0;
    std::vector<std::uint64_t> n_grid;
    std::vector<std::uint64_t> bad_counts;
    std::vector<double> densities; // d_n = bad_counts[i] / n_grid[i]
};

/// Validated lacunary index sequence theta = (k_r), k_0 = 0, with window
/// lengths h_r = k_r - k_{r-1}.
struct LacunarySequence {
    std::vector<std::uint64_t> k; // k[0] = 0
    std::vector<std::uint64_t> h; // h[r-1] = k[r] - k[r-1]
    std::size_t windows() const { return h.size(); }
};

enum class LacunaryViolation { NotStartingAtZero, NotIncreasing, RatioLiminfViolated, WindowsNotGrowing };

std::string to_string(LacunaryViolation v);

class LacunaryError : public std::invalid_argument {
public:
    LacunaryError(LacunaryViolation v, std::string msg)
        : std::invalid_argument(std::move(msg)), violation_(v) {}
    LacunaryViolation violation() const { return violation_; }

private:
    LacunaryViolation violation_;
};

/// Checks the prefix heuristics for a lacunary sequence:
///   - k_0 = 0, strictly increasing;
///   - windows grow: h_last >= h_first and h_last >= 10;
///   - ratio liminf: beyond a burn-in of 3 ratios, min k_r/k_{r-1} must stay
///     above 1 + margin (0.01), and the late-prefix minimum must not be
///     drifting down toward 1 relative to the early prefix.
/// Throws LacunaryError naming the first violation. With allow_violations,
/// violations are reported into *warnings instead.
LacunarySequence validate_lacunary(const std::vector<std::uint64_t>& k_list,
                                   bool allow_violations = false,
                                   std::vector<std::string>* warnings = nullptr);

/// theta = (base^r) prefix: [0, base, base^2, ...] with k_r <= n_cap.
std::vector<std::uint64_t> lacunary_powers(std::uint64_t base, std::uint64_t n_cap);

/// Per-window bad ratios w_r = (1/h_r) |{k in (k_{r-1}, k_r] : |p_k - l| >= eps}|.
struct WindowProfile {
    double eps = 0.0;
    double candidate = 0.0;
    LacunarySequence theta;
    std::vector<std::uint64_t> bad_counts;
    std::vector<double> ratios;
};

/// Exact counts in one pass up to max(n_grid).
DensityProfile density_profile(const Sequence& seq, double candidate, double eps,
                               const std::vector<std::uint64_t>& n_grid);

/// Exact window counts in one pass up to k_R.
WindowProfile lacunary_profile(const Sequence& seq, const LacunarySequence& theta,
                               double candidate, double eps);

/// Statistical limit via candidate search: terms p_k for k <= n_max are
/// histogrammed into bins of width eps_conv; each maximal run of occupied
/// bins is a cluster and its count-weighted mean a candidate limit. A
/// candidate passes when, for eps in {1e-1, 1e-2, 1e-3}, the density profile
/// trends down and d_{n_max} < 0.01. Exactly one passing candidate gives
/// Converged(l, eps_conv); zero or multiple give Inconclusive with a
/// diagnostic. The verdict is empirical at n_max, never a proof.
Verdict st_limit(const Sequence& seq, const ToleranceProfile& profile);

/// Same classifier with window ratios w_r in place of d_n.
Verdict st_lacunary_limit(const Sequence& seq, const LacunarySequence& theta,
                          const ToleranceProfile& profile);

/// CSV: n,d_n for density profiles and r,k_r,h_r,w_r for window profiles.
std::string density_profile_csv(const DensityProfile& profile);
std::string window_profile_csv(const WindowProfile& profile);

} // namespace summatau
