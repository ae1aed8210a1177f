#include "summatau/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "summatau/kahan.hpp"

namespace summatau {

std::string GrowthClass::describe() const {
    std::ostringstream os;
    switch (kind) {
    case GrowthKind::Bounded: os << "Bounded(" << coeff << ")"; break;
    case GrowthKind::Polynomial: os << "Polynomial(" << coeff << "," << degree << ")"; break;
    case GrowthKind::Unknown: os << "Unknown"; break;
    }
    return os.str();
}

GrowthClass combine_growth(double alpha, const GrowthClass& a, double beta, const GrowthClass& b) {
    if (!a.is_rigorous() || !b.is_rigorous()) return GrowthClass::unknown();
    const double c = std::abs(alpha) * a.coeff + std::abs(beta) * b.coeff;
    if (a.is_bounded() && b.is_bounded()) return GrowthClass::bounded(c);
    return GrowthClass::polynomial(c, std::max(a.degree, b.degree));
}

std::optional<double> SequenceSpec::param(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p.value;
    return std::nullopt;
}

void ToleranceProfile::validate(std::vector<std::string>* warnings) const {
    if (!(eps_tail > 0) || !(eps_conv > 0) || !(eps_witness > 0))
        throw std::invalid_argument("tolerance profile: eps fields must be positive");
    if (n_max < 1) throw std::invalid_argument("tolerance profile: n_max must be >= 1");
    if (grid_depth < 1) throw std::invalid_argument("tolerance profile: grid_depth must be >= 1");
    if (warnings && grid_depth < 63 && n_max < (std::uint64_t{1} << grid_depth))
        warnings->push_back("n_max < 2^grid_depth: deepest grid points will likely miss their tail budget");
}

std::uint64_t splitmix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

namespace {

bool is_pow2(std::uint64_t k) { return k >= 1 && (k & (k - 1)) == 0; }

int log2_exact(std::uint64_t k) {
    int j = 0;
    while ((std::uint64_t{1} << j) < k) ++j;
    return j;
}

std::uint64_t isqrt_u64(std::uint64_t k) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(k)));
    while (r > 0 && r * r > k) --r;
    while ((r + 1) * (r + 1) <= k) ++r;
    return r;
}

class ClosedFormGen final : public TermGen {
public:
    explicit ClosedFormGen(std::function<double(std::uint64_t)> f) : f_(std::move(f)) {}
    void fill(std::uint64_t k0, std::span<double> out) override {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = f_(k0 + i);
    }

private:
    std::function<double(std::uint64_t)> f_;
};

// Running partial sums of the harmonic series. Always advanced sequentially,
// compensated so the prefix is reproducible bit-for-bit regardless of how the
// memo got extended.
class HarmonicLogGen final : public TermGen {
public:
    void fill(std::uint64_t k0, std::span<double> out) override {
        if (k0 != next_) throw std::logic_error("harmonic_log generator advanced out of order");
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint64_t k = k0 + i;
            if (k > 0) acc_.add(1.0 / static_cast<double>(k));
            out[i] = k == 0 ? 0.0 : acc_.value();
        }
        next_ = k0 + out.size();
    }

private:
    KbnSum acc_;
    std::uint64_t next_ = 0;
};

class CombinedGen final : public TermGen {
public:
    CombinedGen(double alpha, Sequence a, double beta, Sequence b)
        : alpha_(alpha), a_(std::move(a)), beta_(beta), b_(std::move(b)) {}
    void fill(std::uint64_t k0, std::span<double> out) override {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint64_t k = k0 + i;
            out[i] = alpha_ * a_.term(k) + beta_ * b_.term(k);
        }
    }

private:
    double alpha_;
    Sequence a_;
    double beta_;
    Sequence b_;
};

struct FamilyInfo {
    std::string name;
    std::vector<std::string> param_names;
    bool takes_seed = false;
};

const std::vector<FamilyInfo>& family_table() {
    static const std::vector<FamilyInfo> t = {
        {"constant", {"c"}, false},
        {"alternating", {"c"}, false},
        {"convergent", {"l", "rate"}, false},
        {"convergent_slow", {"l"}, false},
        {"harmonic_log", {}, false},
        {"square_indicator", {}, false},
        {"lacunary_spike", {"beta"}, false},
        {"pm1_pattern", {"rho"}, false},
        {"log_oscillator", {}, false},
        {"geometric_spike", {}, false},
        {"bounded_random", {"m"}, true},
        {"ramp", {}, false},
    };
    return t;
}

[[noreturn]] void bad_param(const std::string& family, const std::string& msg) {
    throw std::invalid_argument("family '" + family + "': " + msg);
}

double require_param(const SequenceSpec& s, const std::string& name) {
    auto v = s.param(name);
    if (!v) bad_param(s.family, "missing parameter '" + name + "'");
    if (!std::isfinite(*v)) bad_param(s.family, "parameter '" + name + "' must be finite");
    return *v;
}

} // namespace

struct Sequence::State {
    std::mutex mu;
    std::vector<double> memo;
    std::unique_ptr<TermGen> gen;
    GrowthClass growth;
    std::string label;
    std::optional<SequenceSpec> spec;
    // Cheap envelope check: envelope at the highest power of two <= k is a
    // lower bound for envelope(k), so terms passing it need no powi.
    double floor_env = 0.0;
    std::uint64_t next_pow2 = 1;
    std::optional<std::string> poison;
    std::uint64_t poison_index = 0;

    void extend_locked(std::uint64_t n) {
        if (memo.size() >= n) return;
        if (poison) throw EvalError(*poison, poison_index);
        const std::uint64_t k0 = memo.size();
        try {
            memo.resize(n);
            std::span<double> out(memo.data() + k0, n - k0);
            gen->fill(k0, out);
            if (growth.is_rigorous()) {
                for (std::uint64_t k = k0; k < n; ++k) check(k, memo[k]);
            } else {
                for (std::uint64_t k = k0; k < n; ++k)
                    if (!std::isfinite(memo[k])) fail_nonfinite(k);
            }
        } catch (const EvalError& e) {
            // Roll back and poison: stateful generators cannot recompute the
            // lost slice, so every later extension repeats the same error.
            memo.resize(k0);
            poison = e.what();
            poison_index = e.index();
            throw;
        }
    }

    void check(std::uint64_t k, double v) {
        if (!std::isfinite(v)) fail_nonfinite(k);
        if (k >= next_pow2) {
            while (next_pow2 <= k) next_pow2 <<= 1;
            floor_env = growth.envelope(next_pow2 >> 1);
        }
        const double av = std::abs(v);
        if (av <= floor_env) return;
        if (av > growth.envelope(k)) {
            throw EvalError("sequence '" + label + "' violates declared growth " +
                                growth.describe() + " at k=" + std::to_string(k),
                            k);
        }
    }

    [[noreturn]] void fail_nonfinite(std::uint64_t k) {
        throw EvalError("sequence '" + label + "' produced a non-finite term at k=" + std::to_string(k), k);
    }
};

Sequence::Sequence(std::string label, GrowthClass growth, std::unique_ptr<TermGen> gen,
                   std::optional<SequenceSpec> spec) {
    state_ = std::make_shared<State>();
    state_->label = std::move(label);
    state_->growth = growth;
    state_->gen = std::move(gen);
    state_->spec = std::move(spec);
    state_->floor_env = growth.is_rigorous() ? growth.envelope(0) : 0.0;
}

double Sequence::term(std::uint64_t k) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    state_->extend_locked(k + 1);
    return state_->memo[k];
}

void Sequence::visit_range(
    std::uint64_t k_begin, std::uint64_t k_end,
    const std::function<bool(std::uint64_t, std::span<const double>)>& fn) const {
    constexpr std::uint64_t kChunk = 1 << 18;
    std::lock_guard<std::mutex> lock(state_->mu);
    std::uint64_t k0 = k_begin;
    while (k0 < k_end) {
        std::uint64_t hi = std::min(k_end, std::max<std::uint64_t>(state_->memo.size(), k0 + kChunk));
        state_->extend_locked(hi);
        std::span<const double> chunk(state_->memo.data() + k0, hi - k0);
        if (!fn(k0, chunk)) return;
        k0 = hi;
    }
}

void Sequence::visit_prefix(
    std::uint64_t n,
    const std::function<bool(std::uint64_t, std::span<const double>)>& fn) const {
    visit_range(0, n, fn);
}

void Sequence::for_each_prefix(std::uint64_t n,
                               const std::function<void(std::uint64_t, double)>& fn) const {
    visit_prefix(n, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) fn(k0 + i, chunk[i]);
        return true;
    });
}

const GrowthClass& Sequence::growth() const { return state_->growth; }
const std::string& Sequence::label() const { return state_->label; }
const std::optional<SequenceSpec>& Sequence::spec() const { return state_->spec; }

Sequence Sequence::with_growth(GrowthClass g) const {
    Sequence src = *this;
    auto gen = std::make_unique<ClosedFormGen>([src](std::uint64_t k) { return src.term(k); });
    return Sequence(state_->label + "#regrowth", g, std::move(gen), state_->spec);
}

Sequence combine_sequences(double alpha, const Sequence& a, double beta, const Sequence& b) {
    GrowthClass g = combine_growth(alpha, a.growth(), beta, b.growth());
    auto gen = std::make_unique<CombinedGen>(alpha, a, beta, b);
    std::ostringstream label;
    label << alpha << "*" << a.label() << " + " << beta << "*" << b.label();
    return Sequence(label.str(), g, std::move(gen));
}

const std::vector<std::string>& catalog_families() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& f : family_table()) v.push_back(f.name);
        return v;
    }();
    return names;
}

Sequence make_sequence(const SequenceSpec& spec) {
    const FamilyInfo* info = nullptr;
    for (const auto& f : family_table())
        if (f.name == spec.family) { info = &f; break; }
    if (!info) throw std::invalid_argument("unknown family '" + spec.family + "'");

    if (spec.params.size() != info->param_names.size())
        bad_param(spec.family, "expects " + std::to_string(info->param_names.size()) +
                                   " parameter(s), got " + std::to_string(spec.params.size()));
    for (const auto& p : spec.params) {
        bool known = false;
        for (const auto& n : info->param_names) known = known || n == p.name;
        if (!known) bad_param(spec.family, "unknown parameter '" + p.name + "'");
    }
    if (spec.seed && !info->takes_seed)
        bad_param(spec.family, "does not take a seed");

    const std::string& fam = spec.family;
    std::string label = fam;
    GrowthClass growth;
    std::unique_ptr<TermGen> gen;

    if (fam == "constant") {
        const double c = require_param(spec, "c");
        growth = GrowthClass::bounded(std::abs(c));
        gen = std::make_unique<ClosedFormGen>([c](std::uint64_t) { return c; });
    } else if (fam == "alternating") {
        const double c = require_param(spec, "c");
        growth = GrowthClass::bounded(std::abs(c));
        gen = std::make_unique<ClosedFormGen>([c](std::uint64_t k) { return (k & 1) ? -c : c; });
    } else if (fam == "convergent") {
        const double l = require_param(spec, "l");
        const double rate = require_param(spec, "rate");
        if (!(rate > 0)) bad_param(fam, "rate must be > 0");
        growth = GrowthClass::bounded(std::abs(l) + 1.0);
        gen = std::make_unique<ClosedFormGen>([l, rate](std::uint64_t k) {
            const double u = std::pow(static_cast<double>(k + 1), -rate);
            return (k & 1) ? l - u : l + u;
        });
    } else if (fam == "convergent_slow") {
        const double l = require_param(spec, "l");
        growth = GrowthClass::bounded(std::abs(l) + 1.0 / std::log(2.0));
        gen = std::make_unique<ClosedFormGen>(
            [l](std::uint64_t k) { return l + 1.0 / std::log(static_cast<double>(k + 2)); });
    } else if (fam == "harmonic_log") {
        // H_k <= k for k >= 1, so Polynomial(1,1) is a valid envelope.
        growth = GrowthClass::polynomial(1.0, 1);
        gen = std::make_unique<HarmonicLogGen>();
    } else if (fam == "square_indicator") {
        growth = GrowthClass::bounded(1.0);
        gen = std::make_unique<ClosedFormGen>([](std::uint64_t k) {
            const std::uint64_t r = isqrt_u64(k);
            return r * r == k ? 1.0 : 0.0;
        });
    } else if (fam == "lacunary_spike") {
        const double beta = require_param(spec, "beta");
        if (!(beta >= 0)) bad_param(fam, "beta must be >= 0");
        // 2^(j*beta) = k^beta <= k^ceil(beta) at k = 2^j.
        growth = GrowthClass::polynomial(1.0, static_cast<int>(std::ceil(beta)));
        gen = std::make_unique<ClosedFormGen>([beta](std::uint64_t k) {
            if (!is_pow2(k)) return 0.0;
            return std::exp2(log2_exact(k) * beta);
        });
    } else if (fam == "pm1_pattern") {
        const double rho = require_param(spec, "rho");
        if (!(rho >= 0.0 && rho <= 1.0)) bad_param(fam, "rho must lie in [0,1]");
        // Bresenham spread of m = round(1000*rho) plus-ones per period keeps
        // every partial-period imbalance within +-1 of proportional.
        const std::uint64_t m = static_cast<std::uint64_t>(std::llround(rho * 1000.0));
        growth = GrowthClass::bounded(1.0);
        gen = std::make_unique<ClosedFormGen>([m](std::uint64_t k) {
            const std::uint64_t i = k % 1000;
            return ((i + 1) * m / 1000 - i * m / 1000) > 0 ? 1.0 : -1.0;
        });
    } else if (fam == "log_oscillator") {
        growth = GrowthClass::bounded(1.0);
        gen = std::make_unique<ClosedFormGen>(
            [](std::uint64_t k) { return std::sin(std::log(static_cast<double>(k + 1))); });
    } else if (fam == "geometric_spike") {
        growth = GrowthClass::polynomial(1.0, 1);
        gen = std::make_unique<ClosedFormGen>(
            [](std::uint64_t k) { return is_pow2(k) ? static_cast<double>(k) : 0.0; });
    } else if (fam == "bounded_random") {
        const double m = require_param(spec, "m");
        if (!(m >= 0)) bad_param(fam, "m must be >= 0");
        const std::uint64_t seed = spec.seed.value_or(0);
        growth = GrowthClass::bounded(m);
        label += "#seed" + std::to_string(seed);
        gen = std::make_unique<ClosedFormGen>([m, seed](std::uint64_t k) {
            const std::uint64_t z = splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
            const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
            return m * (2.0 * u - 1.0);
        });
    } else { // ramp
        growth = GrowthClass::polynomial(1.0, 1);
        gen = std::make_unique<ClosedFormGen>([](std::uint64_t k) { return static_cast<double>(k); });
    }

    return Sequence(std::move(label), growth, std::move(gen), spec);
}

Sequence make_family(const std::string& name, const std::vector<SpecParam>& params,
                     std::optional<std::uint64_t> seed) {
    SequenceSpec spec{name, params, seed};
    return make_sequence(spec);
}

} // namespace summatau
