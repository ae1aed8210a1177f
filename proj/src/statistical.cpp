#include "summatau/statistical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <array>
#include <map>
#include <unordered_map>

#include "summatau/cesaro.hpp" // cesaro_index_grid doubles as the density index grid
#include "summatau/io.hpp"

namespace summatau {

std::string to_string(LacunaryViolation v) {
    switch (v) {
    case LacunaryViolation::NotStartingAtZero: return "NotStartingAtZero";
    case LacunaryViolation::NotIncreasing: return "NotIncreasing";
    case LacunaryViolation::RatioLiminfViolated: return "RatioLiminfViolated";
    case LacunaryViolation::WindowsNotGrowing: return "WindowsNotGrowing";
    }
    return "?";
}

namespace {

constexpr double kRatioMargin = 0.01;
constexpr std::size_t kRatioBurnIn = 3; // ratios exempt at the front
constexpr double kTrendSlack = 0.005;   // d_n may wiggle up this much per step
constexpr double kWindowTrendSlack = 0.01;
constexpr double kFinalDensity = 0.01;
constexpr std::uint64_t kBurnInIndex = 64;

std::vector<LacunaryViolation> find_violations(const std::vector<std::uint64_t>& k_list) {
    std::vector<LacunaryViolation> out;
    if (k_list.empty() || k_list[0] != 0) out.push_back(LacunaryViolation::NotStartingAtZero);
    for (std::size_t i = 1; i < k_list.size(); ++i) {
        if (k_list[i] <= k_list[i - 1]) {
            out.push_back(LacunaryViolation::NotIncreasing);
            return out; // window/ratio checks are meaningless now
        }
    }
    if (k_list.size() < 2) return out;

    const std::uint64_t h_first = k_list[1] - k_list[0];
    const std::uint64_t h_last = k_list.back() - k_list[k_list.size() - 2];
    if (h_last < h_first || h_last < 10) out.push_back(LacunaryViolation::WindowsNotGrowing);

    // Ratio liminf heuristic on the prefix: a hard floor at 1 + margin, plus
    // a trend test. The floor alone misses slowly decaying ratios (k_r = r
    // has every prefix ratio above 1.01 until r = 100), so we also flag
    // prefixes whose late ratios sink below the early ones toward 1.
    std::vector<double> ratios;
    for (std::size_t r = 2; r < k_list.size(); ++r)
        if (k_list[r - 1] > 0)
            ratios.push_back(static_cast<double>(k_list[r]) / static_cast<double>(k_list[r - 1]));
    if (ratios.size() > kRatioBurnIn) {
        const std::size_t n = ratios.size();
        double min_all = std::numeric_limits<double>::infinity();
        for (std::size_t i = kRatioBurnIn; i < n; ++i) min_all = std::min(min_all, ratios[i]);
        bool violated = min_all <= 1.0 + kRatioMargin;
        if (!violated && n >= kRatioBurnIn + 8) {
            const std::size_t quarter = std::max<std::size_t>(1, (n - kRatioBurnIn) / 4);
            double early = std::numeric_limits<double>::infinity();
            double late = std::numeric_limits<double>::infinity();
            for (std::size_t i = kRatioBurnIn; i < kRatioBurnIn + quarter; ++i)
                early = std::min(early, ratios[i]);
            for (std::size_t i = n - quarter; i < n; ++i) late = std::min(late, ratios[i]);
            if (late < 1.0 + 10.0 * kRatioMargin && late < early) violated = true;
        }
        if (violated) out.push_back(LacunaryViolation::RatioLiminfViolated);
    }
    return out;
}

} // namespace

LacunarySequence validate_lacunary(const std::vector<std::uint64_t>& k_list, bool allow_violations,
                                   std::vector<std::string>* warnings) {
    if (k_list.size() < 2)
        throw std::invalid_argument("lacunary sequence needs at least [0, k_1]");
    auto violations = find_violations(k_list);
    if (!violations.empty()) {
        std::string msg = "lacunary sequence violates:";
        for (auto v : violations) msg += " " + to_string(v);
        if (!allow_violations) throw LacunaryError(violations.front(), msg);
        if (warnings) warnings->push_back(msg);
    }
    LacunarySequence seq;
    seq.k = k_list;
    for (std::size_t r = 1; r < k_list.size(); ++r) seq.h.push_back(k_list[r] - k_list[r - 1]);
    return seq;
}

std::vector<std::uint64_t> lacunary_powers(std::uint64_t base, std::uint64_t n_cap) {
    if (base < 2) throw std::invalid_argument("lacunary_powers: base must be >= 2");
    std::vector<std::uint64_t> k{0};
    for (std::uint64_t p = base; p <= n_cap; p *= base) {
        k.push_back(p);
        if (p > n_cap / base) break;
    }
    return k;
}

DensityProfile density_profile(const Sequence& seq, double candidate, double eps,
                               const std::vector<std::uint64_t>& n_grid) {
    if (!(eps > 0)) throw std::invalid_argument("density_profile: eps must be > 0");
    if (n_grid.empty()) throw std::invalid_argument("density_profile: empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("density_profile: n grid must be strictly increasing");

    DensityProfile prof;
    prof.eps = eps;
    prof.candidate = candidate;
    prof.n_grid = n_grid;

    std::uint64_t bad = 0;
    std::size_t next = 0;
    seq.visit_prefix(n_grid.back() + 1, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const std::uint64_t k = k0 + i;
            if (k >= 1 && std::abs(chunk[i] - candidate) >= eps) ++bad;
            while (next < n_grid.size() && n_grid[next] == k) {
                prof.bad_counts.push_back(bad);
                ++next;
            }
        }
        return next < n_grid.size();
    });
    for (std::size_t i = 0; i < prof.bad_counts.size(); ++i)
        prof.densities.push_back(static_cast<double>(prof.bad_counts[i]) /
                                 static_cast<double>(prof.n_grid[i]));
    return prof;
}

WindowProfile lacunary_profile(const Sequence& seq, const LacunarySequence& theta,
                               double candidate, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("lacunary_profile: eps must be > 0");
    if (theta.windows() == 0) throw std::invalid_argument("lacunary_profile: empty theta");

    WindowProfile prof;
    prof.eps = eps;
    prof.candidate = candidate;
    prof.theta = theta;
    prof.bad_counts.assign(theta.windows(), 0);

    std::size_t r = 0;
    seq.visit_prefix(theta.k.back() + 1, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const std::uint64_t k = k0 + i;
            if (k < 1) continue;
            while (r < theta.windows() && k > theta.k[r + 1]) ++r;
            if (r >= theta.windows()) return false;
            if (k > theta.k[r] && k <= theta.k[r + 1] && std::abs(chunk[i] - candidate) >= eps)
                ++prof.bad_counts[r];
        }
        return true;
    });
    for (std::size_t w = 0; w < theta.windows(); ++w)
        prof.ratios.push_back(static_cast<double>(prof.bad_counts[w]) /
                              static_cast<double>(theta.h[w]));
    return prof;
}

namespace {

struct Cluster {
    double center = 0.0;
    std::uint64_t mass = 0;
};

// Histogram p_k (1 <= k <= n_max) into eps_conv-wide bins and return the
// count-weighted center of each maximal run of occupied bins, largest mass
// first. Returns false when the terms are too dispersed to concentrate 99%
// of mass anywhere (distinct-bin cap).
bool find_clusters(const Sequence& seq, const ToleranceProfile& profile,
                   std::vector<Cluster>* clusters) {
    const double bin_w = profile.eps_conv;
    const double clamp = 1e15;
    const std::size_t bin_cap =
        static_cast<std::size_t>(std::max<std::uint64_t>(65536, profile.n_max / 50 + 64));

    struct Bin {
        std::uint64_t count = 0;
        double value_sum = 0.0;
    };
    std::unordered_map<std::int64_t, Bin> bins;
    bool dispersed = false;
    seq.visit_prefix(profile.n_max + 1, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            if (k0 + i < 1) continue;
            double v = chunk[i];
            if (v > clamp) v = clamp;
            if (v < -clamp) v = -clamp;
            auto key = static_cast<std::int64_t>(std::floor(v / bin_w));
            Bin& b = bins[key];
            ++b.count;
            b.value_sum += chunk[i];
            if (bins.size() > bin_cap) {
                dispersed = true;
                return false;
            }
        }
        return true;
    });
    if (dispersed) return false;

    std::map<std::int64_t, Bin> ordered(bins.begin(), bins.end());
    std::uint64_t run_mass = 0;
    double run_sum = 0.0;
    std::int64_t prev_key = 0;
    bool in_run = false;
    auto flush = [&]() {
        if (in_run && run_mass > 0)
            clusters->push_back({run_sum / static_cast<double>(run_mass), run_mass});
        run_mass = 0;
        run_sum = 0.0;
        in_run = false;
    };
    for (const auto& [key, bin] : ordered) {
        if (in_run && key != prev_key + 1) flush();
        in_run = true;
        prev_key = key;
        run_mass += bin.count;
        run_sum += bin.value_sum;
    }
    flush();
    std::sort(clusters->begin(), clusters->end(),
              [](const Cluster& a, const Cluster& b) { return a.mass > b.mass; });
    return true;
}

const std::array<double, 3> kDensityEps = {1e-1, 1e-2, 1e-3};

// Passing candidates within 2e-3 of the dominant one are the same limit at
// the certificate's own resolution (the finest density eps is 1e-3); a dense
// cluster plus a one-term satellite bin must not read as "multiple limits".
void merge_close_candidates(std::vector<Cluster>* passing) {
    if (passing->size() < 2) return;
    const Cluster dominant = (*passing)[0]; // clusters arrive mass-sorted
    bool all_close = true;
    for (const auto& c : *passing)
        if (std::abs(c.center - dominant.center) > 2e-3) all_close = false;
    if (all_close) {
        passing->clear();
        passing->push_back(dominant);
    }
}

bool density_trend_passes(const std::vector<std::uint64_t>& grid, const std::vector<double>& d,
                          std::uint64_t burn_in, double slack) {
    double prev = -1.0;
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < burn_in) continue;
        if (any && d[i] > prev + slack) return false;
        prev = d[i];
        any = true;
    }
    return any && prev < kFinalDensity;
}

} // namespace

Verdict st_limit(const Sequence& seq, const ToleranceProfile& profile) {
    profile.validate();
    std::vector<Cluster> clusters;
    if (!find_clusters(seq, profile, &clusters)) {
        Verdict v = Verdict::inconclusive();
        v.diagnostics.push_back("not statistically convergent at n_max: terms too dispersed to cluster");
        return v;
    }
    if (clusters.size() > 8) clusters.resize(8); // minor clusters cannot hold 99% of mass

    const auto grid = cesaro_index_grid(profile.n_max);
    std::vector<Cluster> passing;
    for (const auto& c : clusters) {
        bool ok = true;
        for (double eps : kDensityEps) {
            auto prof = density_profile(seq, c.center, eps, grid);
            if (!density_trend_passes(grid, prof.densities, kBurnInIndex, kTrendSlack)) {
                ok = false;
                break;
            }
        }
        if (ok) passing.push_back(c);
    }
    merge_close_candidates(&passing);

    if (passing.size() == 1) {
        Verdict v = Verdict::converged_to(passing[0].center, profile.eps_conv);
        v.diagnostics.push_back("empirical at n_max=" + std::to_string(profile.n_max) +
                                ": density trend + final-threshold certificate, not a proof");
        return v;
    }
    Verdict v = Verdict::inconclusive();
    if (passing.empty())
        v.diagnostics.push_back("not statistically convergent at n_max: no candidate limit passes");
    else
        v.diagnostics.push_back("multiple candidate limits pass; tolerance profile is misconfigured");
    return v;
}

Verdict st_lacunary_limit(const Sequence& seq, const LacunarySequence& theta,
                          const ToleranceProfile& profile) {
    profile.validate();
    if (theta.windows() == 0) throw std::invalid_argument("st_lacunary_limit: empty theta");

    ToleranceProfile hist_profile = profile;
    hist_profile.n_max = std::min<std::uint64_t>(profile.n_max, theta.k.back());
    std::vector<Cluster> clusters;
    if (!find_clusters(seq, hist_profile, &clusters)) {
        Verdict v = Verdict::inconclusive();
        v.diagnostics.push_back("not lacunary statistically convergent: terms too dispersed to cluster");
        return v;
    }
    if (clusters.size() > 8) clusters.resize(8);

    std::vector<Cluster> passing;
    for (const auto& c : clusters) {
        bool ok = true;
        for (double eps : kDensityEps) {
            auto prof = lacunary_profile(seq, theta, c.center, eps);
            // Trend over windows long enough to carry signal.
            double prev = -1.0;
            bool any = false;
            bool trend = true;
            for (std::size_t r = 0; r < prof.ratios.size(); ++r) {
                if (theta.h[r] < kBurnInIndex) continue;
                if (any && prof.ratios[r] > prev + kWindowTrendSlack) { trend = false; break; }
                prev = prof.ratios[r];
                any = true;
            }
            if (!(trend && any && prev < kFinalDensity)) { ok = false; break; }
        }
        if (ok) passing.push_back(c);
    }
    merge_close_candidates(&passing);

    if (passing.size() == 1) {
        Verdict v = Verdict::converged_to(passing[0].center, profile.eps_conv);
        v.diagnostics.push_back("empirical at k_R=" + std::to_string(theta.k.back()) +
                                ": window-ratio trend + final-threshold certificate, not a proof");
        return v;
    }
    Verdict v = Verdict::inconclusive();
    if (passing.empty())
        v.diagnostics.push_back("not lacunary statistically convergent: no candidate limit passes");
    else
        v.diagnostics.push_back("multiple candidate limits pass; tolerance profile is misconfigured");
    return v;
}

std::string density_profile_csv(const DensityProfile& profile) {
    std::string out = "n,d_n\n";
    for (std::size_t i = 0; i < profile.n_grid.size(); ++i) {
        out += std::to_string(profile.n_grid[i]);
        out += ',';
        out += format_double(profile.densities[i]);
        out += '\n';
    }
    return out;
}

std::string window_profile_csv(const WindowProfile& profile) {
    std::string out = "r,k_r,h_r,w_r\n";
    for (std::size_t r = 0; r < profile.ratios.size(); ++r) {
        out += std::to_string(r + 1);
        out += ',';
        out += std::to_string(profile.theta.k[r + 1]);
        out += ',';
        out += std::to_string(profile.theta.h[r]);
        out += ',';
        out += format_double(profile.ratios[r]);
        out += '\n';
    }
    return out;
}

} // namespace summatau
