#include "summatau/probes.hpp"

#include <algorithm>
#include <cmath>

#include "summatau/dsl.hpp"

namespace summatau {

namespace {

class MappedGen final : public TermGen {
public:
    MappedGen(FunctionSpec f, Sequence inner) : f_(std::move(f)), inner_(std::move(inner)) {}
    void fill(std::uint64_t k0, std::span<double> out) override {
        std::size_t i = 0;
        inner_.visit_range(k0, k0 + out.size(), [&](std::uint64_t c0, std::span<const double> chunk) {
            for (std::size_t j = 0; j < chunk.size(); ++j) {
                try {
                    out[i++] = f_.eval(chunk[j]);
                } catch (const EvalError& e) {
                    throw EvalError(std::string(e.what()) + " (mapping term k=" +
                                        std::to_string(c0 + j) + ")",
                                    c0 + j);
                }
            }
            return true;
        });
    }

private:
    FunctionSpec f_;
    Sequence inner_;
};

class EnvelopeEmbeddingGen final : public TermGen {
public:
    EnvelopeEmbeddingGen(std::vector<double> hits, double growth_ratio)
        : hits_(std::move(hits)), ratio_(growth_ratio) {}
    void fill(std::uint64_t k0, std::span<double> out) override {
        double v = 0.0;
        bool running = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint64_t k = k0 + i;
            if (k < hits_.size()) {
                out[i] = hits_[k];
                continue;
            }
            // Extend past the scanned hits by the envelope's doubling law,
            // saturating at 1e300 to stay inside double range; by then every
            // grid mean has long exceeded the divergence guard.
            if (!running) {
                v = hits_.back() * std::pow(ratio_, static_cast<double>(k - hits_.size() + 1));
                running = true;
            } else {
                v *= ratio_;
            }
            v = std::min(v, 1e300);
            out[i] = v;
        }
    }

private:
    std::vector<double> hits_;
    double ratio_;
};

} // namespace

Sequence map_sequence(const FunctionSpec& f, const Sequence& seq) {
    GrowthClass g = f.propagate_growth(seq.growth());
    auto gen = std::make_unique<MappedGen>(f, seq);
    return Sequence(f.render() + " o " + seq.label(), g, std::move(gen));
}

std::string to_string(RowMatch m) {
    switch (m) {
    case RowMatch::Yes: return "yes";
    case RowMatch::No: return "no";
    case RowMatch::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(ProbeConclusion c) {
    switch (c) {
    case ProbeConclusion::Counterexample: return "counterexample";
    case ProbeConclusion::NoCounterexampleFound: return "no_counterexample_found";
    case ProbeConclusion::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<SequenceSpec> default_battery() {
    const char* texts[] = {
        "constant(c=0)",
        "constant(c=1)",
        "alternating(c=1)",
        "alternating(c=0.5)",
        "convergent(l=0.3,rate=1)",
        "pm1_pattern(rho=0.75)",
        "square_indicator",
        "lacunary_spike(beta=0.3333333333333333)",
        "convergent_slow(l=0.2)",
    };
    std::vector<SequenceSpec> battery;
    for (const char* t : texts) battery.push_back(parse_spec(t));
    return battery;
}

const std::string& battery_version() {
    static const std::string v = "v1";
    return v;
}

ToleranceProfile probe_profile() {
    ToleranceProfile p;
    p.eps_conv = 4e-3;
    p.n_max = 100'000'000;
    return p;
}

ProbeReport probe_abel_continuity(const FunctionSpec& f, const std::vector<SequenceSpec>& battery,
                                  const ToleranceProfile& profile) {
    if (battery.empty()) throw std::invalid_argument("probe_abel_continuity: empty battery");
    profile.validate();

    ProbeReport report;
    report.function = f;
    report.battery_version = battery_version();
    report.profile = profile;

    bool any_unresolved = false;
    for (const auto& spec : battery) {
        ProbeRow row;
        row.spec = spec;
        try {
            Sequence input = make_sequence(spec);
            row.input_verdict = abel_limit(input, profile);
            if (!row.input_verdict.converged()) {
                row.skipped = true;
                row.match = RowMatch::Inconclusive;
                row.note = "input not Abel-convergent at this profile; row skipped";
                report.rows.push_back(std::move(row));
                continue;
            }
            const double l = row.input_verdict.limit;
            double fl;
            try {
                fl = f.eval(l);
            } catch (const EvalError& e) {
                row.match = RowMatch::Inconclusive;
                row.note = std::string("f(limit) evaluation failed: ") + e.what();
                any_unresolved = true;
                report.rows.push_back(std::move(row));
                continue;
            }
            row.f_of_limit = fl;
            Sequence image = map_sequence(f, input);
            MeanCurve curve = mean_curve(image, profile);
            row.image_verdict = classify_mean_curve(curve, profile);
            row.image_curve = std::move(curve);
            const Verdict& iv = *row.image_verdict;
            if (iv.converged()) {
                row.gap = std::abs(iv.limit - fl);
                row.match = row.gap <= profile.eps_witness ? RowMatch::Yes : RowMatch::No;
            } else if (iv.status == VerdictStatus::Inconclusive) {
                row.match = RowMatch::Inconclusive;
                row.note = "image Abel verdict unresolved";
                any_unresolved = true;
            } else {
                row.match = RowMatch::No; // image visibly fails to Abel-converge
            }
        } catch (const EvalError& e) {
            row.match = RowMatch::Inconclusive;
            row.note = std::string("evaluation error: ") + e.what();
            any_unresolved = true;
        }
        report.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        if (report.rows[i].match == RowMatch::No) {
            report.witness_index = i;
            break;
        }
    }
    if (report.witness_index)
        report.conclusion = ProbeConclusion::Counterexample;
    else if (any_unresolved)
        report.conclusion = ProbeConclusion::Inconclusive;
    else
        report.conclusion = ProbeConclusion::NoCounterexampleFound;
    return report;
}

ProbeReport probe_abel_continuity(const FunctionSpec& f) {
    return probe_abel_continuity(f, default_battery(), probe_profile());
}

std::string to_string(OrdinaryContinuity c) {
    switch (c) {
    case OrdinaryContinuity::ContinuousEmpirical: return "continuous_empirical";
    case OrdinaryContinuity::NotContinuous: return "not_continuous";
    case OrdinaryContinuity::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

OrdinaryReport probe_ordinary_continuity(const FunctionSpec& f, double point,
                                         const ToleranceProfile& profile) {
    profile.validate();
    OrdinaryReport rep;
    rep.point = point;

    double f_point;
    try {
        f_point = f.eval(point);
    } catch (const EvalError& e) {
        rep.classification = OrdinaryContinuity::Inconclusive;
        rep.note = std::string("f undefined at the point: ") + e.what();
        return rep;
    }

    constexpr std::uint64_t kPrefix = 1'000'000;
    constexpr int kTailTerms = 10;
    double worst = 0.0;
    for (double rate : {1.0, 2.0}) {
        Sequence approach =
            make_family("convergent", {{"l", point}, {"rate", rate}});
        for (int i = 0; i < kTailTerms; ++i) {
            const std::uint64_t k = kPrefix - 1 - i;
            double image;
            try {
                image = f.eval(approach.term(k));
            } catch (const EvalError& e) {
                rep.classification = OrdinaryContinuity::Inconclusive;
                rep.note = std::string("domain violation near the point: ") + e.what();
                return rep;
            }
            worst = std::max(worst, std::abs(image - f_point));
        }
    }
    rep.worst_gap = worst;
    rep.classification = worst <= 10.0 * profile.eps_conv
                             ? OrdinaryContinuity::ContinuousEmpirical
                             : OrdinaryContinuity::NotContinuous;
    return rep;
}

Sequence pm1_with_abel_limit(double t) {
    if (!(t >= -1.0 && t <= 1.0))
        throw std::invalid_argument("pm1_with_abel_limit: t must lie in [-1, 1]");
    return make_family("pm1_pattern", {{"rho", (1.0 + t) / 2.0}});
}

BoundednessReport boundedness_probe(const Sequence& seq, const ToleranceProfile& profile) {
    profile.validate();
    constexpr std::uint64_t kScanCap = 1 << 20;
    constexpr int kMinHits = 10;
    constexpr double kEnvelopeStart = 2.0;

    BoundednessReport rep;
    rep.label = seq.label();
    rep.scan_limit = std::min<std::uint64_t>(kScanCap, profile.n_max);

    double envelope = kEnvelopeStart;
    seq.visit_prefix(rep.scan_limit, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            if (std::abs(chunk[i]) > envelope) {
                rep.hits.push_back({k0 + i, chunk[i], envelope});
                envelope *= 2.0;
            }
        }
        return true;
    });

    if (rep.hits.size() < static_cast<std::size_t>(kMinHits)) {
        rep.witness_found = false;
        rep.conclusion = "NoUnboundednessDetected at n=" + std::to_string(rep.scan_limit);
        return rep;
    }

    rep.witness_found = true;
    std::vector<double> values;
    for (const auto& h : rep.hits) values.push_back(std::abs(h.value));
    Sequence embedding("envelope embedding of " + seq.label(), GrowthClass::unknown(),
                       std::make_unique<EnvelopeEmbeddingGen>(std::move(values), 2.0));
    rep.embedding_verdict = abel_limit(embedding, profile);
    rep.conclusion = "NotAbelSequentiallyCompact witness: " + std::to_string(rep.hits.size()) +
                     " envelope crossings; embedding Abel verdict " +
                     to_string(rep.embedding_verdict->status);
    return rep;
}

} // namespace summatau
