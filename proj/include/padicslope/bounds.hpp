#pragma once

// Boundary functions B and T of a divisor profile, the exact constant
// c(L/K) = min(n, min_i T(i)/i), the tensor-structure profile, closed-form
// constants c1, kappa and the level threshold, and the hypothesis check for
// the eigenvalue congruence.

#include "padicslope/lattice_algebra.hpp"
#include "padicslope/padic_core.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicslope {

struct BoundaryFunctions {
    long n = 0;
    long M = 0;
    std::vector<long> b;   // b_i = n - a_i, i = 1..r stored at i-1
    std::vector<long> B;   // B(0) = 0, ..., B(r)
    std::vector<long> T;   // T(j) = M + B(j-1), j = 1..r stored at j-1

    long T_at(std::size_t j) const { return T.at(j - 1); }
};

inline BoundaryFunctions boundary_functions(const DivisorProfile& profile)
{
    BoundaryFunctions bf;
    bf.n = profile.level();
    bf.M = (bf.n + 1) / 2;
    bf.B.push_back(0);
    for (long a : profile.exponents()) {
        bf.b.push_back(bf.n - a);
        bf.B.push_back(bf.B.back() + bf.b.back());
    }
    for (std::size_t j = 1; j <= profile.rank(); ++j) bf.T.push_back(bf.M + bf.B[j - 1]);
    return bf;
}

/// c(L/K) as an exact rational. argmin is the smallest i attaining the
/// minimum of T(i)/i; capped is set when n itself is strictly smaller.
struct CBound {
    Slope value;
    std::size_t argmin = 0;
    bool capped = false;
};

inline CBound c_exact(const DivisorProfile& profile)
{
    if (profile.rank() == 0) throw std::invalid_argument("c(L/K) needs a profile of positive rank");
    const auto bf = boundary_functions(profile);
    CBound best;
    for (std::size_t i = 1; i <= profile.rank(); ++i) {
        const Slope ratio(Integer(bf.T_at(i)), Integer(static_cast<unsigned long>(i)));
        if (i == 1 || ratio < best.value) {
            best.value = ratio;
            best.argmin = i;
        }
    }
    if (Slope(bf.n) < best.value) {
        best.value = Slope(bf.n);
        best.argmin = 0;
        best.capped = true;
    }
    return best;
}

/// sigma_{r+1} = ((r+1)^d - r^d) h copies of n - r, for r = 0 .. n-1.
inline DivisorProfile hilbert_profile(long d, long h, long n)
{
    if (d < 1 || h < 1 || n < 1) throw std::invalid_argument("hilbert_profile needs d, h, n >= 1");
    auto ipow = [](long base, long e) {
        long r = 1;
        for (long k = 0; k < e; ++k) {
            if (r > std::numeric_limits<long>::max() / std::max(base, 1L))
                throw std::overflow_error("hilbert_profile rank overflows");
            r *= base;
        }
        return r;
    };
    const long total = ipow(n, d) * h;
    if (total > 50'000'000) throw std::overflow_error("hilbert_profile rank too large: " + std::to_string(total));
    std::vector<long> a;
    a.reserve(static_cast<std::size_t>(total));
    for (long r = 0; r < n; ++r) {
        const long count = (ipow(r + 1, d) - ipow(r, d)) * h;
        a.insert(a.end(), static_cast<std::size_t>(count), n - r);
    }
    return DivisorProfile(n, std::move(a));
}

inline double c1_closed(long d, long h)
{
    if (d < 1 || h < 1) throw std::invalid_argument("c1 needs d, h >= 1");
    const double e = static_cast<double>(d) / static_cast<double>(d + 1);
    return std::pow(1.0 / static_cast<double>(d + 1), e) * (1.0 / std::pow(static_cast<double>(h), e) + 1.0);
}

/// Integer obtained from a floating closed form. Values within kBoundaryTolerance
/// of an integer are treated as that integer and flagged.
struct ClosedFormInteger {
    long value = 0;
    double raw = 0.0;
    bool near_boundary = false;
};

inline constexpr double kBoundaryTolerance = 1e-9;

/// floor(c1 n^{1/(d+1)} - 1 - 3 alpha)
inline ClosedFormInteger kappa_closed(long n, long alpha, long d, long h)
{
    if (n < 1 || alpha < 0) throw std::invalid_argument("kappa_closed needs n >= 1 and alpha >= 0");
    ClosedFormInteger k;
    k.raw = c1_closed(d, h) * std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d + 1)) - 1.0 -
            3.0 * static_cast<double>(alpha);
    const double nearest = std::round(k.raw);
    k.near_boundary = std::abs(k.raw - nearest) <= kBoundaryTolerance;
    k.value = static_cast<long>(k.near_boundary ? nearest : std::floor(k.raw));
    return k;
}

/// Smallest integer n with n > ((kappa + 1 + 3 alpha) / c1)^{d+1}.
inline ClosedFormInteger n_threshold(long kappa, long alpha, long d, long h)
{
    if (kappa < 0 || alpha < 0) throw std::invalid_argument("n_threshold needs kappa, alpha >= 0");
    ClosedFormInteger t;
    t.raw = std::pow((static_cast<double>(kappa) + 1.0 + 3.0 * static_cast<double>(alpha)) / c1_closed(d, h),
                     static_cast<double>(d + 1));
    const double nearest = std::round(t.raw);
    t.near_boundary = std::abs(t.raw - nearest) <= kBoundaryTolerance * std::max(1.0, std::abs(t.raw));
    t.value = static_cast<long>(t.near_boundary ? nearest : std::floor(t.raw)) + 1;
    return t;
}

struct LevelCheck {
    long nprime = 0;
    CBound c;
    bool ok = false; // alpha < c
};

struct HypothesisReport {
    long alpha = 0;
    long kappa = 0;
    bool kappa_in_range = false;   // kappa <= n - 2 alpha
    std::vector<LevelCheck> levels; // n' in (n - 2 alpha - kappa, n], clamped to n' >= 1
    bool pass = false;
    std::string reason;             // empty, "kappa-range" or "slope-bound"
};

inline HypothesisReport proposition_hypotheses(const DivisorProfile& profile, long alpha, long kappa)
{
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
    if (kappa < 1) throw std::invalid_argument("kappa must be a positive integer");
    const long n = profile.level();
    HypothesisReport rep;
    rep.alpha = alpha;
    rep.kappa = kappa;
    rep.kappa_in_range = kappa <= n - 2 * alpha;

    bool levels_ok = true;
    const long lowest = std::max(1L, n - 2 * alpha - kappa + 1);
    for (long np = lowest; np <= n; ++np) {
        LevelCheck lc;
        lc.nprime = np;
        lc.c = c_exact(profile_mod(profile, np));
        lc.ok = Slope(alpha) < lc.c.value;
        levels_ok = levels_ok && lc.ok;
        rep.levels.push_back(std::move(lc));
    }
    rep.pass = rep.kappa_in_range && levels_ok;
    if (!rep.kappa_in_range)
        rep.reason = "kappa-range";
    else if (!levels_ok)
        rep.reason = "slope-bound";
    return rep;
}

/// Largest kappa >= 1 for which the hypotheses hold, if any.
inline std::optional<long> resolve_kappa(const DivisorProfile& profile, long alpha)
{
    for (long kappa = profile.level() - 2 * alpha; kappa >= 1; --kappa)
        if (proposition_hypotheses(profile, alpha, kappa).pass) return kappa;
    return std::nullopt;
}

} // namespace padicslope
