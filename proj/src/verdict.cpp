#include "summatau/verdict.hpp"

#include <algorithm>
#include <cmath>

namespace summatau {

std::string to_string(VerdictStatus s) {
    switch (s) {
    case VerdictStatus::Converged: return "converged";
    case VerdictStatus::Diverged: return "diverged";
    case VerdictStatus::Oscillating: return "oscillating";
    case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict Verdict::converged_to(double limit, double err) {
    Verdict v;
    v.status = VerdictStatus::Converged;
    v.limit = limit;
    v.err = err;
    return v;
}

Verdict Verdict::diverged(int sign) {
    Verdict v;
    v.status = VerdictStatus::Diverged;
    v.sign = sign;
    return v;
}

Verdict Verdict::oscillating(double lo, double hi) {
    Verdict v;
    v.status = VerdictStatus::Oscillating;
    v.band_lo = lo;
    v.band_hi = hi;
    return v;
}

Verdict Verdict::inconclusive() { return Verdict{}; }

bool tail_is_certified(TailKind k) { return k == TailKind::Rigorous; }

namespace {

constexpr int kWindow = 4;          // stabilization window
constexpr double kOctaveRamp = 1.9; // |value| growth per octave that counts as divergence

bool usable(const CurvePoint& p) {
    return p.tail != TailKind::Overflow && p.tail != TailKind::Error;
}

} // namespace

Verdict classify_curve(const std::vector<CurvePoint>& points, const ClassifyOptions& opts) {
    const std::size_t n = points.size();
    if (n == 0) {
        Verdict v = Verdict::inconclusive();
        v.diagnostics.push_back("empty curve");
        return v;
    }

    // A point certifies a Converged verdict when its tail estimate is proven
    // and small at classification resolution: a RigorousUnmet bound that is
    // still far below eps_conv (budget missed, accuracy not) stays usable;
    // the reported err folds the bound in either way.
    auto certified = [&](const CurvePoint& p) {
        if (p.tail == TailKind::Rigorous) return true;
        if (p.tail == TailKind::RigorousUnmet) return p.err_bound <= opts.eps_conv / 8.0;
        return false;
    };
    bool any_uncertified = false;
    bool any_failure = false;
    for (const auto& p : points) {
        if (!certified(p)) any_uncertified = true;
        if (!usable(p)) any_failure = true;
    }

    // Converged: last 4 means pairwise within eps_conv.
    if (n >= kWindow) {
        bool window_usable = true;
        double max_diff = 0.0, max_err = 0.0;
        for (std::size_t i = n - kWindow; i < n; ++i) {
            if (!usable(points[i])) { window_usable = false; break; }
            max_err = std::max(max_err, points[i].err_bound);
            for (std::size_t j = i + 1; j < n; ++j)
                max_diff = std::max(max_diff, std::abs(points[i].value - points[j].value));
        }
        if (window_usable && max_diff < opts.eps_conv) {
            if (any_uncertified && !opts.trust_heuristic) {
                Verdict v = Verdict::inconclusive();
                v.diagnostics.push_back(
                    "curve stabilized but tail estimates are not certified; "
                    "pass trust_heuristic to accept");
                return v;
            }
            Verdict v = Verdict::converged_to(points[n - 1].value, max_diff + max_err);
            if (any_uncertified)
                v.diagnostics.push_back("accepted on heuristic tail estimates (trust_heuristic)");
            return v;
        }
    }

    // Diverged: sign-consistent overflow run, or |value| ramping by at least
    // kOctaveRamp per octave over the last window with one consistent sign.
    if (n >= kWindow) {
        int overflow_sign = 0;
        bool overflow_run = true;
        for (std::size_t i = n - kWindow; i < n; ++i) {
            if (points[i].tail != TailKind::Overflow) { overflow_run = false; break; }
            const int s = points[i].value > 0 ? 1 : points[i].value < 0 ? -1 : 0;
            if (s == 0 || (overflow_sign != 0 && s != overflow_sign)) { overflow_run = false; break; }
            overflow_sign = s;
        }
        if (overflow_run) {
            Verdict v = Verdict::diverged(overflow_sign);
            v.diagnostics.push_back("partial means exceeded the overflow guard with consistent sign");
            return v;
        }
    }
    const std::size_t stride = static_cast<std::size_t>(opts.octave_stride);
    if (n >= kWindow * stride + 1) {
        bool ramp = true;
        int sign = 0;
        for (int step = 0; step < kWindow && ramp; ++step) {
            const std::size_t hi = n - 1 - step * stride;
            const std::size_t lo = hi - stride;
            const CurvePoint& a = points[lo];
            const CurvePoint& b = points[hi];
            if (!usable(a) || !usable(b)) { ramp = false; break; }
            const int sa = a.value > 0 ? 1 : a.value < 0 ? -1 : 0;
            const int sb = b.value > 0 ? 1 : b.value < 0 ? -1 : 0;
            if (sa == 0 || sa != sb || (sign != 0 && sb != sign)) { ramp = false; break; }
            sign = sb;
            if (std::abs(b.value) < kOctaveRamp * std::abs(a.value)) ramp = false;
        }
        if (ramp) return Verdict::diverged(sign);
    }

    // Oscillating: wide band revisited after the curve midpoint.
    {
        const std::size_t mid = n / 2;
        double lo = 0.0, hi = 0.0;
        bool have = false;
        for (std::size_t i = mid; i < n; ++i) {
            if (!usable(points[i])) continue;
            if (!have) { lo = hi = points[i].value; have = true; }
            lo = std::min(lo, points[i].value);
            hi = std::max(hi, points[i].value);
        }
        if (have && hi - lo > 4.0 * opts.eps_conv) {
            const double midline = 0.5 * (lo + hi);
            int crossings = 0;
            int prev = 0;
            for (std::size_t i = mid; i < n; ++i) {
                if (!usable(points[i])) continue;
                const double d = points[i].value - midline;
                const int s = d > 0 ? 1 : d < 0 ? -1 : 0;
                if (s != 0) {
                    if (prev != 0 && s != prev) ++crossings;
                    prev = s;
                }
            }
            if (crossings >= 2) return Verdict::oscillating(lo, hi);
        }
    }

    Verdict v = Verdict::inconclusive();
    if (any_failure) v.diagnostics.push_back("curve contains overflow or evaluation failures");
    if (any_uncertified) v.diagnostics.push_back("curve contains uncertified tail estimates");
    if (n < kWindow) v.diagnostics.push_back("curve too short for the stabilization window");
    return v;
}

} // namespace summatau
