#pragma once

#include <string>
#include <vector>

#include "summatau/sequence.hpp"
#include "summatau/verdict.hpp"

namespace summatau {

/// (C,1) means sigma_n = (1/(n+1)) sum_{k=0..n} p_k sampled on an increasing
/// index grid.
struct CesaroProfile {
    std::vector<std::uint64_t> n_grid;
    std::vector<double> means;
    std::uint64_t n_max = 0;
    std::optional<SequenceSpec> spec;
    std::string label;
};

/// Two-phase logarithmic index grid {2^i} U {3*2^(i-1)} up to n_max.
/// Pure powers of two sample octave-periodic sequences at a single phase,
/// which can fake convergence; the interleaved half-octave points break the
/// lock.
std::vector<std::uint64_t> cesaro_index_grid(std::uint64_t n_max);

/// Exact prefix means via a single running compensated sum.
CesaroProfile cesaro_means(const Sequence& seq, const std::vector<std::uint64_t>& n_grid);

/// Same classifier shape as abel_limit, applied to sigma_n on the two-phase
/// index grid up to min(n_max, 2^grid_depth) (octave stride 2). The cap
/// mirrors the Abel grid's effective resolution 1/(1-x_J) = 2^J so both
/// classifiers see comparable information.
Verdict cesaro_limit(const Sequence& seq, const ToleranceProfile& profile);

/// Outcome of checking the bounded Tauberian bridge on one sequence:
/// Abel-Converged(l) should force Cesaro-Converged(l') with |l - l'| small.
struct KaramataReport {
    Verdict abel;
    Verdict cesaro;
    enum class Status {
        Pass,            // both Converged, limits within 10*eps_conv
        VacuousAbel,     // Abel verdict not Converged
        CesaroUnresolved,// Abel Converged but Cesaro did not stabilize
        Contradiction    // both Converged, limits apart by > 10*eps_conv
    } status = Status::VacuousAbel;
    double limit_gap = 0.0;

    /// False only for Status::Contradiction.
    bool consistent() const { return status != Status::Contradiction; }
};

/// Requires Bounded growth (the theorem needs it); throws otherwise.
KaramataReport tauberian_karamata_check(const Sequence& seq, const ToleranceProfile& profile);

/// CSV with header n,sigma.
std::string cesaro_profile_csv(const CesaroProfile& profile);

} // namespace summatau
