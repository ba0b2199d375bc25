#pragma once

// Exact p-adic primitives over the rational integers: valuations, unit parts,
// congruences and reduction at a working precision p^N.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace padicslope {

using Integer = mpz_class;

/// Raised when a p-adic computation runs out of precision or meets a
/// degenerate residue (non-simple root, missing unit coordinate, ...).
class precision_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
inline bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// A rational prime, checked at construction.
class Prime {
public:
    explicit Prime(std::uint64_t value) : value_(value)
    {
        if (!is_prime_u64(value))
            throw std::invalid_argument("not a prime: " + std::to_string(value));
    }

    std::uint64_t value() const noexcept { return value_; }
    unsigned long ulong() const noexcept { return static_cast<unsigned long>(value_); }
    Integer as_integer() const { return Integer(ulong()); }

    friend bool operator==(const Prime&, const Prime&) = default;

private:
    std::uint64_t value_;
};

inline Integer prime_power(const Prime& p, unsigned long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), p.ulong(), e);
    return r;
}

/// v_p(x): a nonnegative integer, or infinity for x = 0.
class Valuation {
public:
    constexpr Valuation() = default; // infinity
    constexpr explicit Valuation(long v) : value_(v) {}

    static constexpr Valuation infinity() { return Valuation(); }

    constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
    constexpr bool is_finite() const noexcept { return value_.has_value(); }

    long value() const
    {
        if (!value_) throw std::logic_error("valuation is infinite");
        return *value_;
    }

    friend constexpr bool operator==(const Valuation&, const Valuation&) = default;

    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
            return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return *a.value_ <=> *b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Valuation& v)
    {
        if (v.is_infinite()) return os << "inf";
        return os << *v.value_;
    }

private:
    std::optional<long> value_;
};

/// Exact rational slope in lowest terms, or the distinguished infinite slope
/// carried by zero eigenvalues.
class Slope {
public:
    Slope() : Slope(0) {}
    Slope(long numerator) : value_(numerator) {}
    Slope(const Integer& numerator, const Integer& denominator = 1)
    {
        if (denominator == 0) throw std::invalid_argument("slope with zero denominator");
        value_ = mpq_class(numerator, denominator);
        value_.canonicalize();
    }
    explicit Slope(const mpq_class& q) : value_(q) { value_.canonicalize(); }

    static Slope infinity()
    {
        Slope s;
        s.infinite_ = true;
        return s;
    }

    bool is_infinite() const noexcept { return infinite_; }
    bool is_integer() const { return !infinite_ && value_.get_den() == 1; }

    Integer numerator() const { return value_.get_num(); }
    Integer denominator() const { return value_.get_den(); }
    const mpq_class& rational() const
    {
        if (infinite_) throw std::logic_error("slope is infinite");
        return value_;
    }
    double to_double() const
    {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_.get_d();
    }

    /// "num/den", or "inf".
    std::string to_string() const
    {
        if (infinite_) return "inf";
        if (value_.get_den() == 1) return value_.get_num().get_str();
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    /// Accepts "num/den", a bare integer, or "inf".
    static Slope parse(const std::string& text)
    {
        if (text == "inf") return infinity();
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Slope(Integer(text));
            return Slope(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("malformed slope: " + text);
        }
    }

    friend bool operator==(const Slope& a, const Slope& b)
    {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const Slope& a, const Slope& b)
    {
        if (a.infinite_ || b.infinite_) {
            if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
            return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Slope& s) { return os << s.to_string(); }

private:
    mpq_class value_;
    bool infinite_ = false;
};

/// Prime together with a working precision exponent N >= 1.
class PrecisionContext {
public:
    PrecisionContext(Prime p, long N) : p_(p), N_(N)
    {
        if (N < 1) throw std::invalid_argument("precision exponent must be >= 1");
        modulus_ = prime_power(p_, static_cast<unsigned long>(N_));
    }

    const Prime& prime() const noexcept { return p_; }
    long exponent() const noexcept { return N_; }
    const Integer& modulus() const noexcept { return modulus_; }

    /// Least nonnegative representative mod p^N.
    Integer reduce(const Integer& x) const
    {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t());
        return r;
    }

private:
    Prime p_;
    long N_;
    Integer modulus_;
};

inline Valuation padic_valuation(const Integer& x, const Prime& p)
{
    if (x == 0) return Valuation::infinity();
    Integer rest;
    const mp_bitcnt_t v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.as_integer().get_mpz_t());
    return Valuation(static_cast<long>(v));
}

inline Integer unit_part(const Integer& x, const Prime& p)
{
    if (x == 0) throw std::invalid_argument("unit_part of zero");
    Integer rest;
    mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.as_integer().get_mpz_t());
    return rest;
}

/// True iff p^m divides x - y.
inline bool congruent_mod_power(const Integer& x, const Integer& y, const Prime& p, unsigned long m)
{
    if (m == 0) return true;
    const Integer diff = x - y;
    return mpz_divisible_p(diff.get_mpz_t(), prime_power(p, m).get_mpz_t()) != 0;
}

inline bool divisible_by_power(const Integer& x, const Prime& p, long e)
{
    if (e <= 0) return true;
    return mpz_divisible_p(x.get_mpz_t(), prime_power(p, static_cast<unsigned long>(e)).get_mpz_t()) != 0;
}

/// Least nonnegative residue of x mod m.
inline Integer mod_floor(const Integer& x, const Integer& m)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Inverse of a p-adic unit modulo m; throws if x is not invertible.
inline Integer inverse_mod(const Integer& x, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw precision_error("element is not invertible modulo " + m.get_str());
    return r;
}

} // namespace padicslope
