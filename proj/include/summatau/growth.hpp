#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace summatau {

enum class GrowthKind { Bounded, Polynomial, Unknown };

/// Declared growth envelope of a sequence. Bounded(M) means |p_k| <= M for
/// all k; Polynomial(C, d) means |p_k| <= C * max(k,1)^d. Unknown forbids
/// rigorous truncation bounds downstream (evaluation degrades to heuristic
/// mode and is flagged).
struct GrowthClass {
    GrowthKind kind = GrowthKind::Unknown;
    double coeff = 0.0; // M for Bounded, C for Polynomial
    int degree = 0;     // d for Polynomial (Bounded behaves as degree 0)

    static GrowthClass bounded(double m) { return {GrowthKind::Bounded, m, 0}; }
    static GrowthClass polynomial(double c, int d) {
        if (d <= 0) return bounded(c);
        return {GrowthKind::Polynomial, c, d};
    }
    static GrowthClass unknown() { return {GrowthKind::Unknown, 0.0, 0}; }

    bool is_bounded() const { return kind == GrowthKind::Bounded; }
    bool is_rigorous() const { return kind != GrowthKind::Unknown; }

    /// Envelope value C * max(k,1)^d (== M for Bounded).
    double envelope(std::uint64_t k) const {
        if (kind == GrowthKind::Bounded) return coeff;
        double e = coeff;
        double base = static_cast<double>(std::max<std::uint64_t>(k, 1));
        for (int i = 0; i < degree; ++i) e *= base;
        return e;
    }

    std::string describe() const;
};

/// Growth of alpha*a + beta*b, pointwise.
GrowthClass combine_growth(double alpha, const GrowthClass& a, double beta, const GrowthClass& b);

} // namespace summatau
