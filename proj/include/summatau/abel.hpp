#pragma once

#include <string>
#include <vector>

#include "summatau/sequence.hpp"
#include "summatau/verdict.hpp"

namespace summatau {

/// One evaluation of the Abel mean (1-x) * sum_{k<terms_used} p_k x^k.
/// tail_bound is a proven bound on the neglected tail when tail is
/// Rigorous/RigorousUnmet, and an observed increment scale in heuristic mode.
struct EvalPoint {
    double x = 0.0;
    double mean = 0.0;
    std::uint64_t terms_used = 0;
    double tail_bound = 0.0;
    TailKind tail = TailKind::Rigorous;
    std::string note;

    bool rigorous() const { return tail == TailKind::Rigorous; }
};

/// Abel means along a grid of x values increasing toward 1.
struct MeanCurve {
    std::vector<EvalPoint> points;
    std::optional<SequenceSpec> spec;
    std::string label;
    ToleranceProfile profile;
};

/// Geometric grid x_j = 1 - 2^-j, j = 1..J. Matches the exponential growth
/// of the term count needed per point, so per-point cost is predictable.
std::vector<double> default_grid(const ToleranceProfile& profile);

/// Evaluates the Abel mean at one x in [0, 1).
///
/// The number of terms is chosen so the neglected tail is <= eps_tail:
///   Bounded(M):      (1-x) sum_{k>=K} M x^k = M x^K, so K = ceil(ln(eps/M)/ln x).
///   Polynomial(C,d): using (1 + i/K)^d <= exp(d*i/K),
///                      (1-x) sum_{k>=K} C k^d x^k
///                        <= (1-x) C K^d x^K / (1 - x e^(d/K))
///                    valid once K >= 2d/(1-x); K is found by exponential
///                    search plus bisection on that closed bound.
///   Unknown:         heuristic stop after 50 consecutive increments with
///                    |(1-x) p_k x^k| < eps_tail/100, but not before
///                    k >= 6/(1-x) so the Abel kernel's bulk has been seen;
///                    the point is flagged Heuristic.
/// If the budget cannot be met within n_max the point is flagged
/// RigorousUnmet/HeuristicUnmet (never silent). Summation is ascending in k
/// with compensated (Kahan-Babuska-Neumaier) accumulation; if the partial
/// mean exceeds 1e12 in magnitude the point is flagged Overflow, which the
/// classifier reads as divergence evidence at that x.
EvalPoint abel_mean(const Sequence& seq, double x, const ToleranceProfile& profile);

/// Abel means on default_grid, with per-point evaluation errors captured in
/// the point notes rather than aborting the curve.
MeanCurve mean_curve(const Sequence& seq, const ToleranceProfile& profile);

/// Classifies the Abel limit from the mean curve; see classify_curve for the
/// exact rules. Converged verdicts are downgraded to Inconclusive when the
/// curve contains uncertified tails, unless profile.trust_heuristic is set.
Verdict abel_limit(const Sequence& seq, const ToleranceProfile& profile);
Verdict classify_mean_curve(const MeanCurve& curve, const ToleranceProfile& profile);

/// CSV with header x,mean,terms_used,tail_bound,rigorous; floats use the
/// shortest round-trip representation.
std::string mean_curve_csv(const MeanCurve& curve);

} // namespace summatau
