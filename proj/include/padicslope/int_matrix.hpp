#pragma once

#include "padicslope/padic_core.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace padicslope {

using IntVector = std::vector<Integer>;

/// Square matrix of exact integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t r) : r_(r), data_(r * r) {}

    IntMatrix(std::initializer_list<std::initializer_list<long>> rows) : r_(rows.size()), data_(r_ * r_)
    {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != r_) throw std::invalid_argument("matrix must be square");
            std::size_t j = 0;
            for (long v : row) data_[i * r_ + j++] = v;
            ++i;
        }
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows)
    {
        IntMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t r)
    {
        IntMatrix m(r);
        for (std::size_t i = 0; i < r; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(std::span<const Integer> d)
    {
        IntMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static IntMatrix diagonal(std::initializer_list<long> d)
    {
        IntVector v(d.begin(), d.end());
        return diagonal(std::span<const Integer>(v));
    }

    std::size_t size() const noexcept { return r_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * r_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * r_ + j]; }

    IntVector row(std::size_t i) const { return IntVector(data_.begin() + i * r_, data_.begin() + (i + 1) * r_); }
    IntVector column(std::size_t j) const
    {
        IntVector c(r_);
        for (std::size_t i = 0; i < r_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
    }

    IntMatrix transpose() const
    {
        IntMatrix t(r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < r_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix& operator+=(const IntMatrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    IntMatrix& operator-=(const IntMatrix& o)
    {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    IntMatrix& operator*=(const Integer& s)
    {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) { return a += b; }
    friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) { return a -= b; }
    friend IntMatrix operator*(IntMatrix a, const Integer& s) { return a *= s; }
    friend IntMatrix operator*(const Integer& s, IntMatrix a) { return a *= s; }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        a.check_same(b);
        const std::size_t r = a.r_;
        IntMatrix c(r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < r; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend IntVector operator*(const IntMatrix& a, std::span<const Integer> v)
    {
        if (v.size() != a.r_) throw std::invalid_argument("dimension mismatch in matrix-vector product");
        IntVector out(a.r_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t j = 0; j < a.r_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) { return a.r_ == b.r_ && a.data_ == b.data_; }

    // Elementary operations; used by the normal-form code and by generators.
    void swap_rows(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t k = 0; k < r_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    /// row_dst += c * row_src
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& c)
    {
        if (c == 0) return;
        for (std::size_t k = 0; k < r_; ++k) (*this)(dst, k) += c * (*this)(src, k);
    }
    /// col_dst += c * col_src
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& c)
    {
        if (c == 0) return;
        for (std::size_t k = 0; k < r_; ++k) (*this)(k, dst) += c * (*this)(k, src);
    }
    void negate_row(std::size_t i)
    {
        for (std::size_t k = 0; k < r_; ++k) (*this)(i, k) = -(*this)(i, k);
    }
    void negate_col(std::size_t j)
    {
        for (std::size_t k = 0; k < r_; ++k) (*this)(k, j) = -(*this)(k, j);
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
    {
        os << '[';
        for (std::size_t i = 0; i < m.r_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.r_; ++j) os << (j ? ", " : "") << m(i, j);
            os << ']';
        }
        return os << ']';
    }

private:
    void check_same(const IntMatrix& o) const
    {
        if (r_ != o.r_) throw std::invalid_argument("matrix dimension mismatch");
    }

    std::size_t r_ = 0;
    std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix a)
{
    const std::size_t r = a.size();
    if (r == 0) return 1;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < r; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < r && a(piv, k) == 0) ++piv;
            if (piv == r) return 0;
            a.swap_rows(k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < r; ++i) {
            for (std::size_t j = k + 1; j < r; ++j) {
                Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(r - 1, r - 1);
}

/// q(A) for q given by ascending coefficients q_0 + q_1 X + ...
inline IntMatrix polynomial_of(const IntMatrix& a, std::span<const Integer> ascending)
{
    IntMatrix result(a.size());
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
        result = result * a;
        for (std::size_t i = 0; i < a.size(); ++i) result(i, i) += *it;
    }
    return result;
}

} // namespace padicslope
