#pragma once

// Characteristic polynomials, Newton polygons, slope multiplicities and the
// extraction of a simple integer-slope eigenvalue, its eigenvector and the
// eigenvalue of a commuting operator on that eigenvector, all modulo p^N.

#include "padicslope/int_matrix.hpp"
#include "padicslope/lattice_algebra.hpp"
#include "padicslope/padic_core.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicslope {

/// sum_{s=0}^{t} c_s X^{t-s}; c_0 is the leading coefficient.
struct CharPoly {
    IntVector c;

    std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

    Integer evaluate(const Integer& x) const
    {
        Integer acc = 0;
        for (const auto& coeff : c) acc = acc * x + coeff;
        return acc;
    }

    /// Coefficients of the derivative, same orientation.
    CharPoly derivative() const
    {
        CharPoly d;
        const std::size_t t = degree();
        for (std::size_t s = 0; s < t; ++s) d.c.push_back(c[s] * static_cast<unsigned long>(t - s));
        if (d.c.empty()) d.c.push_back(0);
        return d;
    }

    /// Product with another polynomial.
    friend CharPoly operator*(const CharPoly& a, const CharPoly& b)
    {
        CharPoly r;
        r.c.assign(a.c.size() + b.c.size() - 1, 0);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }

    friend bool operator==(const CharPoly&, const CharPoly&) = default;
};

/// det(X I - A) by the Faddeev-LeVerrier recurrence; every division by k is exact.
inline CharPoly char_poly(const IntMatrix& a)
{
    const std::size_t r = a.size();
    CharPoly cp;
    cp.c.assign(r + 1, 0);
    cp.c[0] = 1;
    IntMatrix m(r); // M_0 = 0
    for (std::size_t k = 1; k <= r; ++k) {
        IntMatrix am = a * m;
        for (std::size_t i = 0; i < r; ++i) am(i, i) += cp.c[k - 1];
        m = std::move(am); // M_k = A M_{k-1} + c_{k-1} I
        const IntMatrix prod = a * m;
        Integer trace = 0;
        for (std::size_t i = 0; i < r; ++i) trace += prod(i, i);
        mpz_divexact_ui(trace.get_mpz_t(), trace.get_mpz_t(), static_cast<unsigned long>(k));
        cp.c[k] = -trace;
    }
    return cp;
}

struct PolygonVertex {
    long index = 0;
    long valuation = 0;
    friend bool operator==(const PolygonVertex&, const PolygonVertex&) = default;
};

struct SlopeSegment {
    Slope slope;
    long length = 0;
    friend bool operator==(const SlopeSegment&, const SlopeSegment&) = default;
};

/// Lower convex hull of (i, v_p(c_i)) over the nonzero coefficients. Zero
/// trailing coefficients are zero roots and are counted by infinite_multiplicity.
struct NewtonPolygon {
    std::vector<PolygonVertex> vertices;
    std::vector<SlopeSegment> segments;
    long infinite_multiplicity = 0;

    friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

inline NewtonPolygon newton_polygon(const CharPoly& cp, const Prime& p)
{
    if (cp.c.empty() || cp.c[0] == 0) throw std::invalid_argument("leading coefficient must be nonzero");

    std::vector<PolygonVertex> hull;
    long last = 0;
    for (std::size_t i = 0; i < cp.c.size(); ++i) {
        if (cp.c[i] == 0) continue;
        const PolygonVertex pt{static_cast<long>(i), padic_valuation(cp.c[i], p).value()};
        last = pt.index;
        while (hull.size() >= 2) {
            const auto& h0 = hull[hull.size() - 2];
            const auto& h1 = hull.back();
            const long cross = (h1.index - h0.index) * (pt.valuation - h0.valuation) -
                               (h1.valuation - h0.valuation) * (pt.index - h0.index);
            if (cross > 0) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }

    NewtonPolygon np;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const long dx = hull[k + 1].index - hull[k].index;
        const long dy = hull[k + 1].valuation - hull[k].valuation;
        np.segments.push_back({Slope(Integer(dy), Integer(dx)), dx});
    }
    np.vertices = std::move(hull);
    np.infinite_multiplicity = static_cast<long>(cp.degree()) - last;
    return np;
}

inline long slope_multiplicity(const NewtonPolygon& np, const Slope& alpha)
{
    if (alpha.is_infinite()) return np.infinite_multiplicity;
    for (const auto& seg : np.segments)
        if (seg.slope == alpha) return seg.length;
    return 0;
}

/// Multiset of eigenvalue valuations of A, as (slope, multiplicity) in increasing slope.
inline std::vector<SlopeSegment> slope_census(const IntMatrix& a, const Prime& p)
{
    const NewtonPolygon np = newton_polygon(char_poly(a), p);
    std::vector<SlopeSegment> census = np.segments;
    if (np.infinite_multiplicity > 0) census.push_back({Slope::infinity(), np.infinite_multiplicity});
    return census;
}

/// A root lambda of a characteristic polynomial with v_p(lambda) = alpha,
/// accurate modulo p^precision. derivative_valuation is v_p(f'(lambda)).
struct HenselRoot {
    Integer lambda;
    long alpha = 0;
    long precision = 0;
    long derivative_valuation = 0;

    /// Precision to which any approximate root of f is unique.
    long unique_precision() const { return precision - derivative_valuation; }
};

namespace detail {

// Residual polynomial of f at slope alpha: f(p^alpha Y) / p^m with m the
// smallest valuation among the rescaled coefficients. Same orientation as f.
struct ResidualPolynomial {
    CharPoly g;
    long content = 0;  // m
    long first = 0;    // smallest index on the slope-alpha supporting line
    long last = 0;     // largest index on it
};

inline ResidualPolynomial residual_polynomial(const CharPoly& f, const Prime& p, long alpha)
{
    const long t = static_cast<long>(f.degree());
    std::optional<long> best;
    std::vector<std::optional<long>> shifted(f.c.size());
    for (long i = 0; i <= t; ++i) {
        if (f.c[i] == 0) continue;
        shifted[i] = padic_valuation(f.c[i], p).value() + alpha * (t - i);
        if (!best || *shifted[i] < *best) best = shifted[i];
    }
    ResidualPolynomial res;
    res.content = *best;
    res.first = -1;
    for (long i = 0; i <= t; ++i) {
        if (shifted[i] && *shifted[i] == res.content) {
            if (res.first < 0) res.first = i;
            res.last = i;
        }
    }
    res.g.c.resize(f.c.size());
    for (long i = 0; i <= t; ++i) {
        if (!shifted[i]) continue;
        res.g.c[i] = f.c[i] * prime_power(p, static_cast<unsigned long>(alpha * (t - i)));
        mpz_divexact(res.g.c[i].get_mpz_t(), res.g.c[i].get_mpz_t(),
                     prime_power(p, static_cast<unsigned long>(res.content)).get_mpz_t());
    }
    return res;
}

inline Integer evaluate_mod(const CharPoly& f, const Integer& x, const Integer& m)
{
    Integer acc = 0;
    for (const auto& coeff : f.c) acc = mod_floor(acc * x + coeff, m);
    return acc;
}

constexpr std::uint64_t kResidueSearchLimit = 1u << 20;

} // namespace detail

/// Lift the eigenvalue of valuation alpha to precision p^N.
///
/// The polynomial is rescaled by X = p^alpha Y and divided by its content; the
/// unit roots of the result modulo p are the residues of the slope-alpha roots.
/// A simple residue is chosen (the smallest one when the segment is longer
/// than one) and refined by Newton iteration, which converges quadratically
/// because the residual derivative is a unit there.
inline HenselRoot hensel_slope_root(const CharPoly& f, const Prime& p, long alpha, long N)
{
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
    if (N < 1) throw std::invalid_argument("precision must be >= 1");
    if (f.degree() == 0) throw std::invalid_argument("constant polynomial has no roots");

    const auto res = detail::residual_polynomial(f, p, alpha);
    const long length = res.last - res.first;
    if (length == 0) throw std::invalid_argument("no slope-" + std::to_string(alpha) + " segment");

    const Integer pz = p.as_integer();
    const CharPoly& g = res.g;
    const CharPoly dg = g.derivative();

    Integer seed;
    if (length == 1) {
        // g mod p = Y^k (u Y + w) with u, w units.
        const Integer u = mod_floor(g.c[res.first], pz);
        const Integer w = mod_floor(g.c[res.last], pz);
        seed = mod_floor(-w * inverse_mod(u, pz), pz);
    } else {
        if (p.value() > detail::kResidueSearchLimit)
            throw precision_error("residue search over a segment of length > 1 needs a small prime");
        bool found = false;
        for (unsigned long y = 1; y < p.ulong(); ++y) {
            const Integer yz(y);
            if (detail::evaluate_mod(g, yz, pz) == 0 && detail::evaluate_mod(dg, yz, pz) != 0) {
                seed = yz;
                found = true;
                break;
            }
        }
        if (!found) throw precision_error("no simple unit root of the residual polynomial modulo p");
    }

    Integer y = seed;
    long prec = 1;
    while (prec < N) {
        prec = std::min(2 * prec, N);
        const Integer mod = prime_power(p, static_cast<unsigned long>(prec));
        const Integer value = detail::evaluate_mod(g, y, mod);
        const Integer slope = detail::evaluate_mod(dg, y, mod);
        y = mod_floor(y - value * inverse_mod(slope, mod), mod);
    }

    const PrecisionContext ctx(p, N);
    HenselRoot root;
    root.alpha = alpha;
    root.precision = N;
    root.lambda = ctx.reduce(prime_power(p, static_cast<unsigned long>(alpha)) * y);
    // f'(p^a Y) = p^{m - a} g'(Y) and g'(y) is a unit.
    root.derivative_valuation = res.content - alpha;
    return root;
}

inline HenselRoot hensel_slope_root(const CharPoly& f, const Prime& p, const Slope& alpha, long N)
{
    if (!alpha.is_integer()) throw std::invalid_argument("only integer slopes can be lifted, got " + alpha.to_string());
    return hensel_slope_root(f, p, alpha.numerator().get_si(), N);
}

/// F with (A - lambda I) F = 0 mod p^modulus_exponent and F not in pL,
/// normalized so its first unit coordinate is 1. `precision` is the exponent
/// to which F agrees with a true eigenvector.
struct Eigenvector {
    IntVector F;
    long precision = 0;
};

inline Eigenvector eigenvector_mod(const IntMatrix& a, const Integer& lambda, const PrecisionContext& ctx)
{
    IntMatrix shifted = a;
    for (std::size_t i = 0; i < a.size(); ++i) shifted(i, i) -= lambda;
    const auto gens = kernel_mod(shifted, ctx);

    const long N = ctx.exponent();
    const KernelGenerator* full = nullptr;
    long other = 0;
    for (const auto& g : gens) {
        if (g.order_exponent == N) {
            if (full) throw precision_error("eigenspace modulo p^N is not one-dimensional");
            full = &g;
        } else {
            other = std::max(other, g.order_exponent);
        }
    }
    if (!full) throw precision_error("no kernel generator with a unit coordinate");

    Eigenvector ev;
    ev.F = full->direction;
    const Integer pz = ctx.prime().as_integer();
    auto unit = std::find_if(ev.F.begin(), ev.F.end(), [&](const Integer& x) {
        return !mpz_divisible_p(x.get_mpz_t(), pz.get_mpz_t());
    });
    if (unit == ev.F.end()) throw precision_error("no kernel generator with a unit coordinate");
    const Integer scale = inverse_mod(*unit, ctx.modulus());
    for (auto& x : ev.F) x = ctx.reduce(x * scale);
    ev.precision = N - other;
    return ev;
}

/// Eigenvector for a lifted root; the kernel is taken modulo p^{N - e}.
inline Eigenvector eigenvector_mod(const IntMatrix& a, const HenselRoot& root, const Prime& p)
{
    const long prec = root.unique_precision();
    if (prec < 1) throw precision_error("root precision exhausted by derivative valuation");
    return eigenvector_mod(a, root.lambda, PrecisionContext(p, prec));
}

/// a with B F = a F mod p^M, read off a unit coordinate of F and checked on all others.
inline Integer commuting_eigenvalue(const IntMatrix& b, std::span<const Integer> F, const PrecisionContext& ctx)
{
    const Integer pz = ctx.prime().as_integer();
    std::size_t unit = F.size();
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (!mpz_divisible_p(F[i].get_mpz_t(), pz.get_mpz_t())) {
            unit = i;
            break;
        }
    }
    if (unit == F.size()) throw std::invalid_argument("vector has no unit coordinate");

    const IntVector bf = b * F;
    const Integer a = ctx.reduce(bf[unit] * inverse_mod(F[unit], ctx.modulus()));
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (ctx.reduce(bf[i] - a * F[i]) != 0)
            throw precision_error("not an eigenvector modulo p^" + std::to_string(ctx.exponent()) +
                                  " (coordinate " + std::to_string(i) + ")");
    }
    return a;
}

} // namespace padicslope
