#pragma once

#include <optional>
#include <string>
#include <vector>

#include "summatau/abel.hpp"
#include "summatau/function_expr.hpp"
#include "summatau/sequence.hpp"
#include "summatau/verdict.hpp"

namespace summatau {

/// Image sequence (f(p_k)) with growth propagated through f where possible
/// (see FunctionSpec::propagate_growth). Evaluation errors carry the term
/// index k.
Sequence map_sequence(const FunctionSpec& f, const Sequence& seq);

enum class RowMatch { Yes, No, Inconclusive };
std::string to_string(RowMatch m);

struct ProbeRow {
    SequenceSpec spec;
    Verdict input_verdict;
    std::optional<Verdict> image_verdict; // absent when the row was skipped
    std::optional<double> f_of_limit;
    RowMatch match = RowMatch::Inconclusive;
    bool skipped = false; // input not Abel-convergent: the definition is vacuous here
    double gap = 0.0;     // |image limit - f(limit)| when both are available
    std::optional<MeanCurve> image_curve;
    std::string note;
};

enum class ProbeConclusion { Counterexample, NoCounterexampleFound, Inconclusive };
std::string to_string(ProbeConclusion c);

/// Result of probing one function over a battery. A verdict is always a
/// statement about this battery version, never about all sequences.
struct ProbeReport {
    FunctionSpec function;
    std::string battery_version;
    std::vector<ProbeRow> rows;
    ProbeConclusion conclusion = ProbeConclusion::Inconclusive;
    std::optional<std::size_t> witness_index; // first match == No row
    ToleranceProfile profile;
};

/// The fixed default battery (version v1).
std::vector<SequenceSpec> default_battery();
const std::string& battery_version();

/// Profile used by the probes when the caller does not override one.
/// eps_conv is loosened to 4e-3 and n_max raised to 1e8: the battery's spike
/// families converge like N^(-2/3), so at grid depth 20 their last curve
/// increments sit near 1e-3, and their polynomial tail budgets need ~8e7
/// terms at the deepest grid point. Witness gaps are still certified at
/// eps_witness = 1e-2, far above the combined curve errors.
ToleranceProfile probe_profile();

/// For each battery input with Abel verdict Converged(l): computes the image
/// Abel verdict and compares its limit against f(l) at margin eps_witness.
///   match Yes           image Converged with |l'' - f(l)| <= eps_witness
///   match No            image Diverged/Oscillating, or Converged with a gap
///                       beyond eps_witness (a counterexample row)
///   match Inconclusive  image verdict Inconclusive (numerics unresolved)
/// Rows whose input is not Converged are skipped (the definition only
/// constrains Abel-convergent inputs) and do not weaken the conclusion.
/// Conclusion: Counterexample at the first No row; else Inconclusive if any
/// evaluated row was unresolved; else NoCounterexampleFound.
/// Per-row evaluation errors annotate the row, never abort the report.
ProbeReport probe_abel_continuity(const FunctionSpec& f, const std::vector<SequenceSpec>& battery,
                                  const ToleranceProfile& profile);
ProbeReport probe_abel_continuity(const FunctionSpec& f);

enum class OrdinaryContinuity { ContinuousEmpirical, NotContinuous, Inconclusive };
std::string to_string(OrdinaryContinuity c);

struct OrdinaryReport {
    OrdinaryContinuity classification = OrdinaryContinuity::Inconclusive;
    double point = 0.0;
    double worst_gap = 0.0;
    std::string note;
};

/// Evaluates f along two-sided convergent(point, rate) test sequences for
/// rate in {1, 2}; ContinuousEmpirical when the final image terms (near
/// k = 1e6) agree with f(point) within 10*eps_conv. Domain violations give
/// Inconclusive.
OrdinaryReport probe_ordinary_continuity(const FunctionSpec& f, double point,
                                         const ToleranceProfile& profile);

/// pm1_pattern with +1 proportion rho = (1+t)/2, whose Abel limit is t up to
/// the 1e-3 pattern resolution. Realizes membership of t in the Abel
/// sequential closure of {-1, 1}.
Sequence pm1_with_abel_limit(double t);

struct EnvelopeHit {
    std::uint64_t index = 0;
    double value = 0.0;
    double envelope = 0.0; // the 2^j threshold this term exceeded
};

/// Unboundedness scan: walks the prefix (up to 2^20 terms) looking for terms
/// that keep crossing a doubling envelope 2, 4, 8, ... At least 10 crossings
/// count as a witness; the report then embeds the witness subsequence as a
/// sequence in its own right (values at 0,1,2,..., extended past the scanned
/// hits by the envelope's doubling law, saturating at 1e300) and classifies
/// its Abel limit, which realizes the divergence mechanism sum 2^k x^k for
/// x > 1/2.
struct BoundednessReport {
    std::string label;
    bool witness_found = false;
    std::vector<EnvelopeHit> hits;
    std::uint64_t scan_limit = 0;
    std::optional<Verdict> embedding_verdict; // non-Converged when witness_found
    std::string conclusion;
};

BoundednessReport boundedness_probe(const Sequence& seq, const ToleranceProfile& profile);

} // namespace summatau
