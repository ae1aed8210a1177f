#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace summatau {

enum class VerdictStatus { Converged, Diverged, Oscillating, Inconclusive };

std::string to_string(VerdictStatus s);

/// Classification of a limit process, plus free-form diagnostics. Which
/// fields are meaningful depends on status:
///   Converged    limit, err (err >= 0)
///   Diverged     sign (+1 or -1)
///   Oscillating  band_lo < band_hi
struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    double limit = 0.0;
    double err = 0.0;
    int sign = 0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    std::vector<std::string> diagnostics;

    bool converged() const { return status == VerdictStatus::Converged; }

    static Verdict converged_to(double limit, double err);
    static Verdict diverged(int sign);
    static Verdict oscillating(double lo, double hi);
    static Verdict inconclusive();
};

/// How much the tail estimate of one curve point can be trusted.
///   Rigorous       proven bound, within budget
///   RigorousUnmet  proven bound, but larger than eps_tail (n_max hit)
///   Heuristic      quiet-run stop under Unknown growth
///   HeuristicUnmet quiet run never observed before n_max
///   Overflow       partial mean blew past the divergence guard
///   Error          term evaluation failed at this point
enum class TailKind { Rigorous, RigorousUnmet, Heuristic, HeuristicUnmet, Overflow, Error };

bool tail_is_certified(TailKind k);

struct CurvePoint {
    double value = 0.0;
    double err_bound = 0.0;
    TailKind tail = TailKind::Rigorous;
};

struct ClassifyOptions {
    double eps_conv = 1e-4;
    // Number of grid steps that double the effective resolution. 1 for the
    // Abel grid (x_j = 1 - 2^-j), 2 for the two-phase Cesaro index grid.
    int octave_stride = 1;
    bool trust_heuristic = false;
};

/// Shared verdict classifier for mean curves evaluated on a logarithmic
/// grid. Rules, applied in order (first match wins, ties fall through to
/// Inconclusive):
///   Converged    last 4 values pairwise within eps_conv; limit = last
///                value, err = max pairwise diff + max err_bound. Downgraded
///                to Inconclusive when any point is uncertified, unless
///                trust_heuristic.
///   Diverged     last 4 points sign-consistent with |value| growing by at
///                least 1.9x per octave (or a sign-consistent run of
///                overflow-flagged tail points).
///   Oscillating  over the second half of the curve, value range wider than
///                4*eps_conv and the midline crossed at least twice.
Verdict classify_curve(const std::vector<CurvePoint>& points, const ClassifyOptions& opts);

} // namespace summatau
