#pragma once

// Smith normal form, elementary-divisor profiles of p-power lattice quotients
// L/K, the xi(K) in p^n L column test, and kernels modulo p^N.

#include "padicslope/int_matrix.hpp"
#include "padicslope/padic_core.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicslope {

/// Exponents a_1 >= a_2 >= ... >= a_r >= 0, each at most the level n, of
/// L/K = (+) O/p^{a_i} O.
class DivisorProfile {
public:
    DivisorProfile(long level, std::vector<long> exponents) : n_(level), a_(std::move(exponents))
    {
        if (n_ < 1) throw std::invalid_argument("profile level must be >= 1");
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (a_[i] < 0 || a_[i] > n_)
                throw std::invalid_argument("profile exponent out of range [0, n]: " + std::to_string(a_[i]));
            if (i > 0 && a_[i] > a_[i - 1]) throw std::invalid_argument("profile exponents must be nonincreasing");
        }
    }

    long level() const noexcept { return n_; }
    std::size_t rank() const noexcept { return a_.size(); }
    const std::vector<long>& exponents() const noexcept { return a_; }
    long operator[](std::size_t i) const { return a_[i]; }

    /// Multiplicity of each exponent value, largest exponent first.
    std::vector<std::pair<long, std::size_t>> multiplicities() const
    {
        std::map<long, std::size_t, std::greater<>> counts;
        for (long e : a_) ++counts[e];
        return {counts.begin(), counts.end()};
    }

    /// First `max_rank` entries (the largest exponents).
    DivisorProfile truncated(std::size_t max_rank) const
    {
        if (max_rank >= a_.size()) return *this;
        return DivisorProfile(n_, std::vector<long>(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(max_rank)));
    }

    friend bool operator==(const DivisorProfile&, const DivisorProfile&) = default;

private:
    long n_;
    std::vector<long> a_;
};

/// A = U * D * V with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_r.
/// The inverses of U and V are accumulated alongside.
struct SmithDecomposition {
    IntMatrix U, D, V;
    IntMatrix U_inv, V_inv;

    IntVector divisors() const
    {
        IntVector d(D.size());
        for (std::size_t i = 0; i < D.size(); ++i) d[i] = D(i, i);
        return d;
    }
};

namespace detail {

class SmithReducer {
public:
    explicit SmithReducer(const IntMatrix& a)
        : W(a), U(IntMatrix::identity(a.size())), V(U), Uinv(U), Vinv(U) {}

    // Invariant throughout: A = U * W * V, Uinv * A * Vinv = W.
    void row_add(std::size_t dst, std::size_t src, const Integer& c)
    {
        W.add_row_multiple(dst, src, c);
        U.add_col_multiple(src, dst, -c);
        Uinv.add_row_multiple(dst, src, c);
    }
    void col_add(std::size_t dst, std::size_t src, const Integer& c)
    {
        W.add_col_multiple(dst, src, c);
        V.add_row_multiple(src, dst, -c);
        Vinv.add_col_multiple(dst, src, c);
    }
    void row_swap(std::size_t i, std::size_t j)
    {
        W.swap_rows(i, j);
        U.swap_cols(i, j);
        Uinv.swap_rows(i, j);
    }
    void col_swap(std::size_t i, std::size_t j)
    {
        W.swap_cols(i, j);
        V.swap_rows(i, j);
        Vinv.swap_cols(i, j);
    }
    void row_negate(std::size_t i)
    {
        W.negate_row(i);
        U.negate_col(i);
        Uinv.negate_row(i);
    }

    void run()
    {
        const std::size_t r = W.size();
        for (std::size_t t = 0; t < r; ++t) {
            if (!reduce_at(t)) break;
            if (W(t, t) < 0) row_negate(t);
        }
    }

    IntMatrix W, U, V, Uinv, Vinv;

private:
    // Returns false when the trailing block is entirely zero.
    bool reduce_at(std::size_t t)
    {
        const std::size_t r = W.size();
        for (;;) {
            std::size_t pi = r, pj = r;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < r; ++j) {
                    if (W(i, j) == 0) continue;
                    if (pi == r || mpz_cmpabs(W(i, j).get_mpz_t(), W(pi, pj).get_mpz_t()) < 0) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == r) return false;
            row_swap(t, pi);
            col_swap(t, pj);

            bool clean = true;
            Integer q;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (W(i, t) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), W(i, t).get_mpz_t(), W(t, t).get_mpz_t());
                row_add(i, t, -q);
                if (W(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < r; ++j) {
                if (W(t, j) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), W(t, j).get_mpz_t(), W(t, t).get_mpz_t());
                col_add(j, t, -q);
                if (W(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // Divisibility chain: fold an offending row into the pivot row.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < r && divides_all; ++i)
                for (std::size_t j = t + 1; j < r; ++j) {
                    if (!mpz_divisible_p(W(i, j).get_mpz_t(), W(t, t).get_mpz_t())) {
                        row_add(t, i, 1);
                        divides_all = false;
                        break;
                    }
                }
            if (divides_all) return true;
        }
    }
};

} // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a)
{
    detail::SmithReducer red(a);
    red.run();
    return SmithDecomposition{std::move(red.U), std::move(red.W), std::move(red.V), std::move(red.Uinv),
                              std::move(red.Vinv)};
}

/// Profile of L/K where the columns of `kgen` generate K inside Z^r.
inline DivisorProfile quotient_profile(const IntMatrix& kgen, const Prime& p, long n)
{
    const auto snf = smith_normal_form(kgen);
    std::vector<long> a;
    a.reserve(kgen.size());
    for (const Integer& d : snf.divisors()) {
        if (d == 0) throw std::invalid_argument("sublattice has infinite index (zero elementary divisor)");
        const long v = padic_valuation(d, p).value();
        if (d != prime_power(p, static_cast<unsigned long>(v)))
            throw std::invalid_argument("elementary divisor " + d.get_str() + " is not a power of p");
        if (v > n)
            throw std::invalid_argument("elementary divisor exponent " + std::to_string(v) + " exceeds level");
        a.push_back(v);
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    return DivisorProfile(n, std::move(a));
}

/// xi(K) in p^n L for K = (+) p^{a_j} Z e_j: column j of xi divisible by p^{n - a_j}.
inline bool check_xi_condition(const IntMatrix& xi, const DivisorProfile& profile, const Prime& p)
{
    if (xi.size() != profile.rank()) throw std::invalid_argument("operator dimension does not match profile rank");
    const long n = profile.level();
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const Integer modulus = prime_power(p, static_cast<unsigned long>(n - profile[j]));
        for (std::size_t i = 0; i < xi.size(); ++i)
            if (!mpz_divisible_p(xi(i, j).get_mpz_t(), modulus.get_mpz_t())) return false;
    }
    return true;
}

/// Profile of L/(K + p^{n'} L) at level n'.
inline DivisorProfile profile_mod(const DivisorProfile& profile, long nprime)
{
    if (nprime < 1 || nprime > profile.level())
        throw std::invalid_argument("n' must satisfy 1 <= n' <= n, got " + std::to_string(nprime));
    std::vector<long> a = profile.exponents();
    for (long& e : a) e = std::min(e, nprime);
    return DivisorProfile(nprime, std::move(a));
}

/// One generator of {v mod p^N : A v = 0 mod p^N}: the kernel element is
/// p^{N - order_exponent} * direction, of additive order p^{order_exponent}.
struct KernelGenerator {
    IntVector direction;
    long order_exponent = 0;

    IntVector element(const PrecisionContext& ctx) const
    {
        const Integer scale = prime_power(ctx.prime(), static_cast<unsigned long>(ctx.exponent() - order_exponent));
        IntVector v(direction.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = ctx.reduce(scale * direction[i]);
        return v;
    }
};

/// Generators of the kernel of A modulo p^N. Generators of trivial order are omitted.
inline std::vector<KernelGenerator> kernel_mod(const IntMatrix& a, const PrecisionContext& ctx)
{
    IntMatrix reduced = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) reduced(i, j) = ctx.reduce(a(i, j));
    const auto snf = smith_normal_form(reduced);
    const long N = ctx.exponent();
    std::vector<KernelGenerator> gens;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Valuation v = padic_valuation(snf.D(i, i), ctx.prime());
        const long order = v.is_infinite() ? N : std::min(v.value(), N);
        if (order == 0) continue;
        KernelGenerator g;
        g.order_exponent = order;
        g.direction = snf.V_inv.column(i);
        for (auto& x : g.direction) x = ctx.reduce(x);
        gens.push_back(std::move(g));
    }
    return gens;
}

} // namespace padicslope
