#include "summatau/abel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "summatau/io.hpp"
#include "summatau/kahan.hpp"

namespace summatau {

namespace {

constexpr double kMeanOverflowGuard = 1e12;
constexpr int kQuietRun = 50;

// Closed tail bound for Polynomial(C,d) growth: the tail starting at index
// `count` is at most (1-x) C count^d x^count / (1 - x e^(d/count)), provided
// x e^(d/count) < 1. Inflated slightly to absorb pow/exp rounding.
double poly_tail_bound(double c, int d, double x, double count) {
    if (count <= 0) return std::numeric_limits<double>::infinity();
    const double growth_factor = x * std::exp(static_cast<double>(d) / count);
    if (growth_factor >= 1.0) return std::numeric_limits<double>::infinity();
    double lead = c * std::pow(count, d) * std::pow(x, count);
    return (1.0 - x) * lead / (1.0 - growth_factor) * (1.0 + 1e-9);
}

std::uint64_t bounded_count(double m, double x, double eps) {
    if (m <= 0.0 || x == 0.0) return 1;
    const double q = std::log(eps / m) / std::log(x); // both logs negative when eps < m
    if (!(q > 1.0)) return 1;
    return static_cast<std::uint64_t>(std::ceil(q));
}

// Minimal count with poly_tail_bound <= eps: exponential search up, then
// bisect. The bound is decreasing once count >= 2d/(1-x).
std::uint64_t poly_count(double c, int d, double x, double eps, std::uint64_t n_max, double* bound_out) {
    const std::uint64_t floor_count =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(2.0 * d / (1.0 - x))));
    std::uint64_t lo = std::max(bounded_count(c, x, eps), floor_count);
    if (lo >= n_max) {
        *bound_out = poly_tail_bound(c, d, x, static_cast<double>(n_max));
        return n_max;
    }
    if (poly_tail_bound(c, d, x, static_cast<double>(lo)) <= eps) {
        *bound_out = poly_tail_bound(c, d, x, static_cast<double>(lo));
        return lo;
    }
    std::uint64_t hi = lo;
    while (hi < n_max && poly_tail_bound(c, d, x, static_cast<double>(hi)) > eps)
        hi = std::min(n_max, hi * 2);
    if (poly_tail_bound(c, d, x, static_cast<double>(hi)) > eps) {
        *bound_out = poly_tail_bound(c, d, x, static_cast<double>(hi));
        return hi; // == n_max, budget unmet
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (poly_tail_bound(c, d, x, static_cast<double>(mid)) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    *bound_out = poly_tail_bound(c, d, x, static_cast<double>(hi));
    return hi;
}

struct SumState {
    KbnSum acc;
    double xk = 1.0;
    std::uint64_t count = 0;
    bool overflowed = false;
};

} // namespace

std::vector<double> default_grid(const ToleranceProfile& profile) {
    profile.validate();
    if (profile.grid_depth > 48)
        throw std::invalid_argument("grid_depth > 48: x would collide with 1 in double precision");
    std::vector<double> xs;
    xs.reserve(profile.grid_depth);
    for (int j = 1; j <= profile.grid_depth; ++j) xs.push_back(1.0 - std::exp2(-j));
    return xs;
}

EvalPoint abel_mean(const Sequence& seq, double x, const ToleranceProfile& profile) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("abel_mean requires 0 <= x < 1");
    profile.validate();

    EvalPoint pt;
    pt.x = x;
    const GrowthClass& g = seq.growth();
    const double one_minus_x = 1.0 - x;
    const double sum_guard = kMeanOverflowGuard / one_minus_x;

    auto run_sum = [&](std::uint64_t count, SumState& st) {
        seq.visit_prefix(count, [&](std::uint64_t, std::span<const double> chunk) {
            for (double p : chunk) {
                st.acc.add(p * st.xk);
                st.xk *= x;
                ++st.count;
                if (std::abs(st.acc.sum) > sum_guard) {
                    st.overflowed = true;
                    return false;
                }
            }
            return true;
        });
    };

    if (g.is_rigorous()) {
        std::uint64_t count;
        double bound;
        if (g.is_bounded()) {
            count = std::min<std::uint64_t>(bounded_count(g.coeff, x, profile.eps_tail), profile.n_max);
            bound = g.coeff * std::pow(x, static_cast<double>(count));
        } else {
            count = poly_count(g.coeff, g.degree, x, profile.eps_tail, profile.n_max, &bound);
        }
        SumState st;
        try {
            run_sum(count, st);
        } catch (const EvalError& e) {
            pt.mean = one_minus_x * st.acc.value();
            pt.terms_used = st.count;
            pt.tail_bound = std::numeric_limits<double>::infinity();
            pt.tail = TailKind::Error;
            pt.note = e.what();
            return pt;
        }
        pt.terms_used = st.count;
        if (st.overflowed) {
            pt.mean = st.acc.sum > 0 ? kMeanOverflowGuard : -kMeanOverflowGuard;
            pt.tail_bound = std::numeric_limits<double>::infinity();
            pt.tail = TailKind::Overflow;
            pt.note = "partial mean exceeded the overflow guard";
            return pt;
        }
        pt.mean = one_minus_x * st.acc.value();
        pt.tail_bound = bound;
        pt.tail = bound <= profile.eps_tail ? TailKind::Rigorous : TailKind::RigorousUnmet;
        if (pt.tail == TailKind::RigorousUnmet)
            pt.note = "tail budget unmet at n_max; bound is still rigorous";
        return pt;
    }

    // Unknown growth: heuristic stop once the increments have been quiet for
    // kQuietRun terms, after the kernel-coverage floor k >= 6/(1-x).
    const double quiet_threshold = profile.eps_tail / 100.0 / one_minus_x; // on |p_k x^k|
    const std::uint64_t k_floor =
        std::min<std::uint64_t>(profile.n_max,
                                static_cast<std::uint64_t>(std::ceil(6.0 / one_minus_x)));
    SumState st;
    int quiet = 0;
    double window_max = 0.0;
    bool stopped = false;
    try {
        seq.visit_prefix(profile.n_max, [&](std::uint64_t k0, std::span<const double> chunk) {
            for (std::size_t i = 0; i < chunk.size(); ++i) {
                const double inc = chunk[i] * st.xk;
                st.acc.add(inc);
                st.xk *= x;
                ++st.count;
                if (std::abs(st.acc.sum) > sum_guard) {
                    st.overflowed = true;
                    return false;
                }
                if (std::abs(inc) < quiet_threshold) {
                    if (quiet == 0) window_max = 0.0;
                    window_max = std::max(window_max, std::abs(inc));
                    ++quiet;
                } else {
                    quiet = 0;
                }
                if (quiet >= kQuietRun && k0 + i + 1 >= k_floor) {
                    stopped = true;
                    return false;
                }
            }
            return true;
        });
    } catch (const EvalError& e) {
        pt.mean = one_minus_x * st.acc.value();
        pt.terms_used = st.count;
        pt.tail_bound = std::numeric_limits<double>::infinity();
        pt.tail = TailKind::Error;
        pt.note = e.what();
        return pt;
    }
    pt.terms_used = st.count;
    if (st.overflowed) {
        pt.mean = st.acc.sum > 0 ? kMeanOverflowGuard : -kMeanOverflowGuard;
        pt.tail_bound = std::numeric_limits<double>::infinity();
        pt.tail = TailKind::Overflow;
        pt.note = "partial mean exceeded the overflow guard";
        return pt;
    }
    pt.mean = one_minus_x * st.acc.value();
    if (stopped) {
        pt.tail_bound = window_max * one_minus_x;
        pt.tail = TailKind::Heuristic;
        pt.note = "unknown growth: heuristic quiet-run stop";
    } else {
        pt.tail_bound = std::numeric_limits<double>::infinity();
        pt.tail = TailKind::HeuristicUnmet;
        pt.note = "unknown growth: no quiet run before n_max";
    }
    return pt;
}

MeanCurve mean_curve(const Sequence& seq, const ToleranceProfile& profile) {
    MeanCurve curve;
    curve.spec = seq.spec();
    curve.label = seq.label();
    curve.profile = profile;
    for (double x : default_grid(profile)) curve.points.push_back(abel_mean(seq, x, profile));
    return curve;
}

Verdict classify_mean_curve(const MeanCurve& curve, const ToleranceProfile& profile) {
    std::vector<CurvePoint> pts;
    pts.reserve(curve.points.size());
    for (const auto& p : curve.points) pts.push_back({p.mean, p.tail_bound, p.tail});
    ClassifyOptions opts;
    opts.eps_conv = profile.eps_conv;
    opts.octave_stride = 1;
    opts.trust_heuristic = profile.trust_heuristic;
    Verdict v = classify_curve(pts, opts);
    for (const auto& p : curve.points)
        if (!p.note.empty())
            v.diagnostics.push_back("x=" + format_double(p.x) + ": " + p.note);
    return v;
}

Verdict abel_limit(const Sequence& seq, const ToleranceProfile& profile) {
    return classify_mean_curve(mean_curve(seq, profile), profile);
}

std::string mean_curve_csv(const MeanCurve& curve) {
    std::string out = "x,mean,terms_used,tail_bound,rigorous\n";
    for (const auto& p : curve.points) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.mean);
        out += ',';
        out += std::to_string(p.terms_used);
        out += ',';
        out += format_double(p.tail_bound);
        out += ',';
        out += p.rigorous() ? '1' : '0';
        out += '\n';
    }
    return out;
}

} // namespace summatau
