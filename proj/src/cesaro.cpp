#include "summatau/cesaro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "summatau/abel.hpp"
#include "summatau/io.hpp"
#include "summatau/kahan.hpp"

namespace summatau {

std::vector<std::uint64_t> cesaro_index_grid(std::uint64_t n_max) {
    std::vector<std::uint64_t> grid;
    for (std::uint64_t p = 1; p <= n_max; p <<= 1) {
        grid.push_back(p);
        const std::uint64_t half_octave = p + (p >> 1); // 3 * 2^(i-1)
        if (half_octave > p && half_octave <= n_max) grid.push_back(half_octave);
        if (p > n_max / 2) break;
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

CesaroProfile cesaro_means(const Sequence& seq, const std::vector<std::uint64_t>& n_grid) {
    if (n_grid.empty()) throw std::invalid_argument("cesaro_means: empty index grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("cesaro_means: index grid must be strictly increasing");

    CesaroProfile prof;
    prof.n_grid = n_grid;
    prof.n_max = n_grid.back();
    prof.spec = seq.spec();
    prof.label = seq.label();
    prof.means.reserve(n_grid.size());

    KbnSum acc;
    std::size_t next = 0;
    seq.visit_prefix(prof.n_max + 1, [&](std::uint64_t k0, std::span<const double> chunk) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            acc.add(chunk[i]);
            const std::uint64_t n = k0 + i;
            while (next < n_grid.size() && n_grid[next] == n) {
                prof.means.push_back(acc.value() / static_cast<double>(n + 1));
                ++next;
            }
        }
        return next < n_grid.size();
    });
    if (prof.means.size() != n_grid.size())
        throw std::logic_error("cesaro_means: grid not fully consumed");
    for (double m : prof.means)
        if (!std::isfinite(m)) throw EvalError("cesaro mean is non-finite", prof.n_max);
    return prof;
}

Verdict cesaro_limit(const Sequence& seq, const ToleranceProfile& profile) {
    profile.validate();
    // Mirror the Abel grid's effective resolution: the deepest Abel point has
    // kernel scale 1/(1-x_J) = 2^J, so the index grid tops out there rather
    // than at n_max. A deeper Cesaro grid would certify slow-decay sequences
    // (sigma ~ n^(-2/3)) one octave before the Abel side can see them.
    const std::uint64_t top =
        std::min<std::uint64_t>(profile.n_max,
                                profile.grid_depth < 63 ? (std::uint64_t{1} << profile.grid_depth)
                                                        : profile.n_max);
    CesaroProfile prof = cesaro_means(seq, cesaro_index_grid(top));
    std::vector<CurvePoint> pts;
    pts.reserve(prof.means.size());
    for (double m : prof.means) pts.push_back({m, 0.0, TailKind::Rigorous});
    ClassifyOptions opts;
    opts.eps_conv = profile.eps_conv;
    opts.octave_stride = 2; // two-phase grid: n doubles every second point
    opts.trust_heuristic = profile.trust_heuristic;
    return classify_curve(pts, opts);
}

KaramataReport tauberian_karamata_check(const Sequence& seq, const ToleranceProfile& profile) {
    if (!seq.growth().is_bounded())
        throw std::invalid_argument(
            "tauberian_karamata_check requires Bounded growth (sequence '" + seq.label() + "')");
    KaramataReport rep;
    rep.abel = abel_limit(seq, profile);
    rep.cesaro = cesaro_limit(seq, profile);
    if (!rep.abel.converged()) {
        rep.status = KaramataReport::Status::VacuousAbel;
        return rep;
    }
    if (!rep.cesaro.converged()) {
        rep.status = KaramataReport::Status::CesaroUnresolved;
        return rep;
    }
    rep.limit_gap = std::abs(rep.abel.limit - rep.cesaro.limit);
    rep.status = rep.limit_gap < 10.0 * profile.eps_conv ? KaramataReport::Status::Pass
                                                         : KaramataReport::Status::Contradiction;
    return rep;
}

std::string cesaro_profile_csv(const CesaroProfile& profile) {
    std::string out = "n,sigma\n";
    for (std::size_t i = 0; i < profile.n_grid.size(); ++i) {
        out += std::to_string(profile.n_grid[i]);
        out += ',';
        out += format_double(profile.means[i]);
        out += '\n';
    }
    return out;
}

} // namespace summatau
