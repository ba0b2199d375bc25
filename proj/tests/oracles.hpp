#pragma once

// Test-only reference computations, deliberately independent of the library
// code paths they check.

#include "padicslope/int_matrix.hpp"
#include "padicslope/padic_core.hpp"

#include <gmpxx.h>

#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using padicslope::Integer;
using padicslope::IntMatrix;

/// v_p by repeated exact division; -1 stands for infinity.
inline long valuation(Integer x, unsigned long p)
{
    if (x == 0) return -1;
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

/// Determinant by Gaussian elimination over Q.
inline Integer rational_det(const IntMatrix& a)
{
    const std::size_t r = a.size();
    std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) m[i][j] = mpq_class(a(i, j));
    mpq_class det = 1;
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t piv = c;
        while (piv < r && m[piv][c] == 0) ++piv;
        if (piv == r) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < r; ++i) {
            const mpq_class f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < r; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det.get_num();
}

/// det(xI - A) sampled at x = 0..r and interpolated (Lagrange over Q).
/// Returned in descending orientation, leading coefficient first.
inline std::vector<Integer> interpolated_char_poly(const IntMatrix& a)
{
    const std::size_t r = a.size();
    std::vector<mpq_class> ys(r + 1);
    for (std::size_t x = 0; x <= r; ++x) {
        IntMatrix m = a * Integer(-1);
        for (std::size_t i = 0; i < r; ++i) m(i, i) += static_cast<unsigned long>(x);
        ys[x] = rational_det(m);
    }
    std::vector<mpq_class> coeffs(r + 1, 0); // ascending
    for (std::size_t k = 0; k <= r; ++k) {
        std::vector<mpq_class> basis{1};
        mpq_class denom = 1;
        for (std::size_t j = 0; j <= r; ++j) {
            if (j == k) continue;
            std::vector<mpq_class> next(basis.size() + 1, 0);
            for (std::size_t t = 0; t < basis.size(); ++t) {
                next[t + 1] += basis[t];
                next[t] -= basis[t] * static_cast<long>(j);
            }
            basis = std::move(next);
            denom *= static_cast<long>(k) - static_cast<long>(j);
        }
        for (std::size_t t = 0; t < basis.size(); ++t) coeffs[t] += ys[k] * basis[t] / denom;
    }
    std::vector<Integer> out;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        it->canonicalize();
        out.push_back(it->get_num());
    }
    return out;
}

/// Lower-hull heights at each integer abscissa 0..last, by minimizing over
/// all chords; returns the slope of each unit step, sorted.
inline std::vector<mpq_class> unit_step_slopes(const std::vector<std::pair<long, long>>& points)
{
    const long last = points.back().first;
    std::vector<mpq_class> height(static_cast<std::size_t>(last + 1));
    for (long x = 0; x <= last; ++x) {
        bool set = false;
        for (const auto& [i, vi] : points)
            for (const auto& [k, vk] : points) {
                if (i > x || k < x) continue;
                mpq_class h = (i == k) ? mpq_class(vi) : mpq_class(vi) + mpq_class(vk - vi, k - i) * (x - i);
                h.canonicalize();
                if (!set || h < height[x]) {
                    height[x] = h;
                    set = true;
                }
            }
    }
    std::vector<mpq_class> steps;
    for (long x = 0; x < last; ++x) steps.push_back(height[x + 1] - height[x]);
    return steps;
}

/// Random unimodular matrix as a product of elementary operations.
inline IntMatrix random_unimodular(std::size_t r, std::mt19937_64& rng, int ops = 12, long bound = 2)
{
    IntMatrix u = IntMatrix::identity(r);
    if (r < 2) return u;
    std::uniform_int_distribution<std::size_t> pick(0, r - 1);
    std::uniform_int_distribution<long> coef(-bound, bound);
    for (int k = 0; k < ops; ++k) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) {
            if (rng() % 4 == 0) u.negate_row(i);
            continue;
        }
        if (rng() % 5 == 0)
            u.swap_rows(i, j);
        else
            u.add_row_multiple(i, j, coef(rng));
    }
    return u;
}

/// Inverse of a unimodular matrix by Gauss-Jordan over Q.
inline IntMatrix rational_inverse(const IntMatrix& a)
{
    const std::size_t r = a.size();
    std::vector<std::vector<mpq_class>> m(r, std::vector<mpq_class>(2 * r));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) m[i][j] = mpq_class(a(i, j));
        m[i][r + i] = 1;
    }
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t piv = c;
        while (m[piv][c] == 0) ++piv;
        std::swap(m[piv], m[c]);
        const mpq_class inv = 1 / m[c][c];
        for (auto& x : m[c]) x *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == c || m[i][c] == 0) continue;
            const mpq_class f = m[i][c];
            for (std::size_t j = 0; j < 2 * r; ++j) m[i][j] -= f * m[c][j];
        }
    }
    IntMatrix out(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            m[i][r + j].canonicalize();
            out(i, j) = m[i][r + j].get_num();
        }
    return out;
}

} // namespace oracle
