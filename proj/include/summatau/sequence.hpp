#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "summatau/growth.hpp"

namespace summatau {

/// Raised when evaluating a sequence or function produces a non-finite or
/// out-of-domain value. Carries the offending term index.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string msg, std::uint64_t index)
        : std::runtime_error(std::move(msg)), index_(index) {}
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t index_;
};

struct SpecParam {
    std::string name;
    double value = 0.0;
    bool operator==(const SpecParam&) const = default;
};

/// Parsed description of a catalog sequence: family tag, named parameters,
/// optional PRNG seed for random families.
struct SequenceSpec {
    std::string family;
    std::vector<SpecParam> params;
    std::optional<std::uint64_t> seed;

    bool operator==(const SequenceSpec&) const = default;
    std::optional<double> param(const std::string& name) const;
};

/// Tolerance knobs shared by the evaluation and classification machinery.
///   eps_tail    truncation budget per Abel mean evaluation
///   eps_conv    grid stabilization threshold for Converged verdicts
///   eps_witness margin for declaring a limit mismatch in probes
///   n_max       hard cap on terms per evaluation
///   grid_depth  number of Abel grid points (x_j = 1 - 2^-j, j = 1..J)
struct ToleranceProfile {
    double eps_tail = 1e-8;
    double eps_conv = 1e-4;
    double eps_witness = 1e-2;
    std::uint64_t n_max = 20'000'000;
    int grid_depth = 20;
    bool trust_heuristic = false;

    void validate(std::vector<std::string>* warnings = nullptr) const;
};

/// Term generator: produces p_{k0}, p_{k0+1}, ... into out. Generators are
/// always advanced sequentially from k = 0 by the owning Sequence, so
/// stateful families (harmonic_log) can keep running accumulators.
class TermGen {
public:
    virtual ~TermGen() = default;
    virtual void fill(std::uint64_t k0, std::span<double> out) = 0;
};

/// A lazily evaluated real sequence: an immutable recipe plus a memoized
/// prefix of computed terms. Copies share state; all access is internally
/// synchronized, so concurrent readers are safe.
///
/// Every produced term is checked finite and (for Bounded/Polynomial growth)
/// against the declared envelope; a violation throws EvalError rather than
/// silently corrupting downstream means.
class Sequence {
public:
    Sequence() = default;
    Sequence(std::string label, GrowthClass growth, std::unique_ptr<TermGen> gen,
             std::optional<SequenceSpec> spec = std::nullopt);

    /// p_k, memoized. Indexing is 0-based.
    double term(std::uint64_t k) const;

    /// Visits p_0..p_{n-1} in contiguous chunks, extending the memo lazily
    /// chunk by chunk so early exits do not pay for the full prefix. The
    /// visitor returns false to stop; chunk spans are valid only during the
    /// call. Runs under the state lock: do not re-enter the same sequence.
    void visit_prefix(std::uint64_t n,
                      const std::function<bool(std::uint64_t k0, std::span<const double>)>& fn) const;

    /// Element-wise convenience wrapper over visit_prefix.
    void for_each_prefix(std::uint64_t n, const std::function<void(std::uint64_t, double)>& fn) const;

    /// Chunked visit of p_k for k in [k_begin, k_end); same contract as
    /// visit_prefix.
    void visit_range(std::uint64_t k_begin, std::uint64_t k_end,
                     const std::function<bool(std::uint64_t k0, std::span<const double>)>& fn) const;

    const GrowthClass& growth() const;
    const std::string& label() const;
    const std::optional<SequenceSpec>& spec() const;

    /// Same terms with a different declared growth. Used by tests and by
    /// callers that want to force heuristic evaluation.
    Sequence with_growth(GrowthClass g) const;

    bool valid() const { return state_ != nullptr; }

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Builds a catalog sequence. Families and parameters:
///   constant(c)                p_k = c
///   alternating(c)             p_k = c * (-1)^k
///   convergent(l, rate)        p_k = l + (-1)^k * (k+1)^(-rate), rate > 0
///   convergent_slow(l)         p_k = l + 1/ln(k+2)
///   harmonic_log               p_0 = 0, p_k = sum_{j=1..k} 1/j
///   square_indicator           p_k = 1 if k is a perfect square else 0
///   lacunary_spike(beta)       p_k = 2^(j*beta) if k = 2^j else 0, beta >= 0
///   pm1_pattern(rho)           periodic +-1, +1 proportion rho over period 1000
///   log_oscillator             p_k = sin(ln(k+1))
///   geometric_spike            p_k = k if k = 2^j else 0
///   bounded_random(m)          i.i.d. uniform in [-m, m] from seed
///   ramp                       p_k = k
///
/// Families stated in the literature with n >= 1 formulas are shifted to
/// 0-based indexing: convergent uses (k+1)^(-rate), convergent_slow uses
/// ln(k+2), log_oscillator uses ln(k+1), harmonic_log pins p_0 = 0.
Sequence make_family(const std::string& name, const std::vector<SpecParam>& params,
                     std::optional<std::uint64_t> seed = std::nullopt);
Sequence make_sequence(const SequenceSpec& spec);

/// Pointwise alpha*a + beta*b with combined growth.
Sequence combine_sequences(double alpha, const Sequence& a, double beta, const Sequence& b);

/// All catalog family names, in documentation order.
const std::vector<std::string>& catalog_families();

/// SplitMix64 finalizer; the documented PRNG behind bounded_random.
/// u_k = (mix(seed + (k+1)*0x9E3779B97F4A7C15) >> 11) * 2^-53 and
/// p_k = m * (2*u_k - 1). Counter-mode use makes term(k) O(1) and the
/// stream identical across platforms.
std::uint64_t splitmix64(std::uint64_t z);

} // namespace summatau
