#pragma once

// Randomized instances (L, K, xi, psi) and (L, K, xi', psi') with
// xi(K) in p^n L and L/K = L/K' as R[xi, psi]-modules, and the trial
// runners checking eigenvalue congruence and slope constancy on them.
//
// Seeding: trial i of an experiment draws from std::mt19937_64 seeded with
//   trial_seed(master, i) = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15)
// where splitmix64 is the standard SplitMix64 finalizer.

#include "padicslope/bounds.hpp"
#include "padicslope/int_matrix.hpp"
#include "padicslope/lattice_algebra.hpp"
#include "padicslope/newton.hpp"
#include "padicslope/padic_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace padicslope {

enum class PsiStrategy { polynomial_psi, planted };
enum class ExperimentMode { proposition, constancy };

inline std::string to_string(PsiStrategy s) { return s == PsiStrategy::planted ? "PLANTED" : "POLYNOMIAL_PSI"; }
inline std::string to_string(ExperimentMode m) { return m == ExperimentMode::constancy ? "constancy" : "prop"; }

struct HilbertSource {
    long d = 1;
    long h = 1;
    long n = 1;
    friend bool operator==(const HilbertSource&, const HilbertSource&) = default;
};

struct ExperimentConfig {
    std::uint64_t p = 3;
    std::optional<DivisorProfile> profile;  // explicit profile, or
    std::optional<HilbertSource> hilbert;   // the tensor-structure profile
    std::size_t max_rank = 8;
    long alpha = 1;
    std::optional<long> kappa;              // nullopt: auto
    long trials = 100;
    std::uint64_t master_seed = 0;
    PsiStrategy generator = PsiStrategy::polynomial_psi;
    long max_attempts = 200;
    long entry_bound = 2;
    long precision_guard = 8;
    std::optional<long> nprime;             // congruence level for constancy trials

    void validate() const
    {
        Prime check(p);
        (void)check;
        if (profile.has_value() == hilbert.has_value())
            throw std::invalid_argument("exactly one of `profile` and `hilbert` must be given");
        if (max_rank < 1) throw std::invalid_argument("max_rank must be >= 1");
        if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
        if (kappa && *kappa < 1) throw std::invalid_argument("kappa must be >= 1 or \"auto\"");
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
        if (entry_bound < 0) throw std::invalid_argument("entry_bound must be >= 0");
        if (std::log2(static_cast<double>(p)) * static_cast<double>(entry_bound) > 60.0)
            throw std::invalid_argument("p^entry_bound must fit in 60 bits");
        if (precision_guard < 0) throw std::invalid_argument("precision_guard must be >= 0");
        const DivisorProfile prof = resolved_profile();
        if (prof.rank() == 0) throw std::invalid_argument("profile has rank 0");
        if (nprime && (*nprime < 1 || *nprime > prof.level()))
            throw std::invalid_argument("nprime must satisfy 1 <= nprime <= n");
    }

    DivisorProfile resolved_profile() const
    {
        if (profile) return profile->truncated(max_rank);
        if (hilbert) return hilbert_profile(hilbert->d, hilbert->h, hilbert->n).truncated(max_rank);
        throw std::invalid_argument("no profile source");
    }
};

// ---------------------------------------------------------------------------
// Seeding and sampling

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index)
{
    return splitmix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ull);
}

using Rng = std::mt19937_64;

/// Uniform index in [0, count), by rejection so the stream is portable.
inline std::uint64_t draw_index(Rng& rng, std::uint64_t count)
{
    constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = top - top % count;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % count;
}

/// Uniform integer in [-bound, bound].
inline long draw_symmetric(Rng& rng, std::uint64_t bound)
{
    return static_cast<long>(draw_index(rng, 2 * bound + 1)) - static_cast<long>(bound);
}

namespace detail {

inline std::uint64_t entry_range(const Prime& p, long entry_bound)
{
    return prime_power(p, static_cast<unsigned long>(entry_bound)).get_ui();
}

inline long draw_unit(Rng& rng, const Prime& p, std::uint64_t bound)
{
    for (;;) {
        const long u = draw_symmetric(rng, std::max<std::uint64_t>(bound, 1));
        if (u % static_cast<long>(p.value()) != 0) return u;
    }
}

} // namespace detail

/// Inverse of a unimodular matrix, via its Smith decomposition.
inline IntMatrix unimodular_inverse(const IntMatrix& a)
{
    const auto snf = smith_normal_form(a);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (snf.D(i, i) != 1) throw std::invalid_argument("matrix is not unimodular");
    return snf.V_inv * snf.U_inv;
}

/// Entry (i, j) = p^{n - a_j} u with u uniform in [-p^entry_bound, p^entry_bound].
inline IntMatrix gen_xi(const DivisorProfile& profile, const Prime& p, long entry_bound, Rng& rng)
{
    const std::size_t r = profile.rank();
    const auto bound = detail::entry_range(p, entry_bound);
    IntMatrix xi(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            xi(i, j) = prime_power(p, static_cast<unsigned long>(profile.level() - profile[j])) *
                       Integer(draw_symmetric(rng, bound));
    return xi;
}

/// xi + Delta with Delta_{ij} divisible by p^{max(a_i, n - a_j, extra_level)}:
/// Delta maps L into K and K into p^n L, so both operators agree on L/K.
inline IntMatrix gen_congruent_pair(const IntMatrix& xi, const DivisorProfile& profile, const Prime& p,
                                    long entry_bound, Rng& rng, long extra_level = 0)
{
    const std::size_t r = profile.rank();
    const long n = profile.level();
    const auto bound = detail::entry_range(p, entry_bound);
    IntMatrix out = xi;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const long e = std::max({profile[i], n - profile[j], extra_level});
            out(i, j) += prime_power(p, static_cast<unsigned long>(e)) * Integer(draw_symmetric(rng, bound));
        }
    return out;
}

struct InstancePair {
    IntMatrix xi, xi_prime, psi, psi_prime;
    IntVector psi_polynomial;     // ascending coefficients, POLYNOMIAL_PSI only
    std::optional<std::size_t> planted_slot;
};

/// psi = q(xi), psi' = q(xi') for one random q of degree < r.
inline IntVector gen_psi_polynomial(std::size_t r, const Prime& p, long entry_bound, Rng& rng)
{
    const auto bound = detail::entry_range(p, entry_bound);
    IntVector q(std::max<std::size_t>(r, 1));
    for (auto& c : q) c = draw_symmetric(rng, bound);
    return q;
}

/// Conjugates of diagonal operators by a K-preserving unimodular U. The
/// primed pair is conjugated further by I + G, G strictly lower triangular
/// with row i divisible by p^{max(a_i, extra_level)}, and its diagonals are
/// moved by multiples of p^n (xi) and p^{a_1} (psi). Returns nullopt when no
/// column can carry an eigenvalue of valuation alpha.
inline std::optional<InstancePair> gen_planted(const DivisorProfile& profile, const Prime& p, long alpha,
                                               long entry_bound, Rng& rng, long extra_level = 0)
{
    const std::size_t r = profile.rank();
    const long n = profile.level();
    const auto bound = detail::entry_range(p, entry_bound);

    std::vector<std::size_t> eligible;
    for (std::size_t j = 0; j < r; ++j)
        if (n - profile[j] <= alpha) eligible.push_back(j);
    if (eligible.empty()) return std::nullopt;
    const std::size_t slot = eligible[draw_index(rng, eligible.size())];

    IntVector d_xi(r), d_psi(r), d_xi2(r), d_psi2(r);
    const Integer pn = prime_power(p, static_cast<unsigned long>(n));
    const Integer pa1 = prime_power(p, static_cast<unsigned long>(profile[0]));
    for (std::size_t j = 0; j < r; ++j) {
        long v = alpha;
        if (j != slot) {
            v = (n - profile[j]) + draw_symmetric(rng, 1) + 1; // b_j + {0, 1, 2}
            if (v == alpha) v = alpha + 1;
        }
        d_xi[j] = prime_power(p, static_cast<unsigned long>(v)) * Integer(detail::draw_unit(rng, p, bound));
        d_psi[j] = draw_symmetric(rng, bound);
        d_xi2[j] = d_xi[j] + pn * Integer(draw_symmetric(rng, bound));
        d_psi2[j] = d_psi[j] + pa1 * Integer(draw_symmetric(rng, bound));
    }

    IntMatrix lower = IntMatrix::identity(r), upper = IntMatrix::identity(r), g = IntMatrix::identity(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (i > j) {
                lower(i, j) = draw_symmetric(rng, bound);
                g(i, j) = prime_power(p, static_cast<unsigned long>(std::max(profile[i], extra_level))) *
                          Integer(draw_symmetric(rng, bound));
            } else if (i < j) {
                upper(i, j) = prime_power(p, static_cast<unsigned long>(profile[i] - profile[j])) *
                              Integer(draw_symmetric(rng, bound));
            }
        }
    const IntMatrix u = lower * upper;
    const IntMatrix u_inv = unimodular_inverse(u);
    const IntMatrix u2 = g * u;
    const IntMatrix u2_inv = unimodular_inverse(u2);

    InstancePair pair;
    pair.xi = u * IntMatrix::diagonal(d_xi) * u_inv;
    pair.psi = u * IntMatrix::diagonal(d_psi) * u_inv;
    pair.xi_prime = u2 * IntMatrix::diagonal(d_xi2) * u2_inv;
    pair.psi_prime = u2 * IntMatrix::diagonal(d_psi2) * u2_inv;
    pair.planted_slot = slot;
    return pair;
}

/// Operators agree on L/K: every entry of (x - y) in row i is divisible by p^{a_i}.
inline bool agree_on_quotient(const IntMatrix& x, const IntMatrix& y, const DivisorProfile& profile, const Prime& p)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!divisible_by_power(x(i, j) - y(i, j), p, profile[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Trials

enum class TrialStatus { accepted, rejected, violation };

inline std::string to_string(TrialStatus s)
{
    switch (s) {
    case TrialStatus::accepted: return "ACCEPTED";
    case TrialStatus::rejected: return "REJECTED";
    case TrialStatus::violation: return "VIOLATION";
    }
    return "?";
}

struct SlopeComparison {
    Slope slope;
    long multiplicity_xi = 0;
    long multiplicity_xi_prime = 0;
    bool below_bound = false;
};

struct TrialReport {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    TrialStatus status = TrialStatus::rejected;
    std::string reason;           // rejection reason
    long alpha = 0;
    std::optional<long> kappa;
    long attempts = 0;
    std::vector<SlopeSegment> census_xi, census_xi_prime;

    // proposition trials
    std::optional<Integer> lambda, lambda_prime, a, a_prime;
    long precision = 0;           // exponent to which a and a' are compared
    std::optional<long> congruence_margin;

    // constancy trials
    std::optional<long> nprime;
    std::optional<Slope> bound;
    std::vector<SlopeComparison> comparisons;

    std::optional<InstancePair> instance; // kept for violations
};

namespace detail {

inline long multiplicity_of(const std::vector<SlopeSegment>& census, const Slope& s)
{
    for (const auto& seg : census)
        if (seg.slope == s) return seg.length;
    return 0;
}

inline void assert_pair_invariants(const InstancePair& pair, const DivisorProfile& profile, const Prime& p)
{
    if (!check_xi_condition(pair.xi, profile, p) || !check_xi_condition(pair.xi_prime, profile, p))
        throw std::logic_error("generated operator violates xi(K) in p^n L");
    if (pair.xi * pair.psi != pair.psi * pair.xi || pair.xi_prime * pair.psi_prime != pair.psi_prime * pair.xi_prime)
        throw std::logic_error("generated operators do not commute");
    const long n = profile.level();
    for (std::size_t i = 0; i < profile.rank(); ++i)
        for (std::size_t j = 0; j < profile.rank(); ++j)
            if (!divisible_by_power(pair.xi(i, j) - pair.xi_prime(i, j), p, std::max(profile[i], n - profile[j])))
                throw std::logic_error("xi and xi' disagree on L/K");
    if (!agree_on_quotient(pair.psi, pair.psi_prime, profile, p))
        throw std::logic_error("psi and psi' disagree on L/K");
}

} // namespace detail

inline TrialReport run_proposition_trial(const ExperimentConfig& config, std::size_t trial_index)
{
    const Prime p(config.p);
    const DivisorProfile profile = config.resolved_profile();
    const long n = profile.level();

    TrialReport rep;
    rep.index = trial_index;
    rep.seed = trial_seed(config.master_seed, trial_index);
    rep.alpha = config.alpha;

    auto reject = [&](std::string why) {
        rep.status = TrialStatus::rejected;
        rep.reason = std::move(why);
        return rep;
    };

    // (1) kappa
    if (config.kappa) {
        if (!proposition_hypotheses(profile, config.alpha, *config.kappa).pass) {
            rep.kappa = config.kappa;
            return reject("hypotheses");
        }
        rep.kappa = config.kappa;
    } else {
        rep.kappa = resolve_kappa(profile, config.alpha);
        if (!rep.kappa) return reject("hypotheses");
    }
    const long kappa = *rep.kappa;

    // (2)-(3) instance with a simple slope-alpha eigenvalue on both sides
    Rng rng(rep.seed);
    const Slope alpha_slope(config.alpha);
    std::optional<InstancePair> pair;
    for (rep.attempts = 1; rep.attempts <= config.max_attempts; ++rep.attempts) {
        InstancePair cand;
        if (config.generator == PsiStrategy::planted) {
            auto planted = gen_planted(profile, p, config.alpha, config.entry_bound, rng);
            if (!planted) break;
            cand = std::move(*planted);
            if (!check_xi_condition(cand.xi, profile, p) || !check_xi_condition(cand.xi_prime, profile, p)) continue;
        } else {
            cand.xi = gen_xi(profile, p, config.entry_bound, rng);
            cand.xi_prime = gen_congruent_pair(cand.xi, profile, p, config.entry_bound, rng);
        }
        rep.census_xi = slope_census(cand.xi, p);
        rep.census_xi_prime = slope_census(cand.xi_prime, p);
        if (detail::multiplicity_of(rep.census_xi, alpha_slope) == 1 &&
            detail::multiplicity_of(rep.census_xi_prime, alpha_slope) == 1) {
            pair = std::move(cand);
            break;
        }
    }
    rep.attempts = std::min(rep.attempts, config.max_attempts);
    if (!pair) return reject(config.generator == PsiStrategy::planted ? "no-instance" : "not-simple");

    if (config.generator == PsiStrategy::polynomial_psi) {
        pair->psi_polynomial = gen_psi_polynomial(profile.rank(), p, config.entry_bound, rng);
        pair->psi = polynomial_of(pair->xi, pair->psi_polynomial);
        pair->psi_prime = polynomial_of(pair->xi_prime, pair->psi_polynomial);
    }
    detail::assert_pair_invariants(*pair, profile, p);

    // (4)-(5) lift, eigenvectors, psi-eigenvalues
    const long N = n + 2 * config.alpha + kappa + config.precision_guard;
    try {
        const HenselRoot root = hensel_slope_root(char_poly(pair->xi), p, config.alpha, N);
        const HenselRoot root2 = hensel_slope_root(char_poly(pair->xi_prime), p, config.alpha, N);
        rep.lambda = root.lambda;
        rep.lambda_prime = root2.lambda;
        const Eigenvector ev = eigenvector_mod(pair->xi, root, p);
        const Eigenvector ev2 = eigenvector_mod(pair->xi_prime, root2, p);
        rep.precision = std::min(ev.precision, ev2.precision);
        if (rep.precision < kappa) {
            rep.instance = std::move(pair);
            return reject("precision");
        }
        const PrecisionContext ctx(p, rep.precision);
        rep.a = commuting_eigenvalue(pair->psi, ev.F, ctx);
        rep.a_prime = commuting_eigenvalue(pair->psi_prime, ev2.F, ctx);
    } catch (const precision_error&) {
        return reject("precision");
    }

    // (6)
    const Valuation diff = padic_valuation(*rep.a - *rep.a_prime, p);
    rep.congruence_margin = diff.is_infinite() ? rep.precision : std::min(diff.value(), rep.precision);
    if (*rep.congruence_margin < kappa) {
        rep.status = TrialStatus::violation;
        rep.instance = std::move(pair);
    } else {
        rep.status = TrialStatus::accepted;
    }
    return rep;
}

inline TrialReport run_constancy_trial(const ExperimentConfig& config, std::size_t trial_index)
{
    const Prime p(config.p);
    const DivisorProfile profile = config.resolved_profile();
    if (!config.nprime) throw std::invalid_argument("constancy trials need `nprime`");
    const long nprime = *config.nprime;

    TrialReport rep;
    rep.index = trial_index;
    rep.seed = trial_seed(config.master_seed, trial_index);
    rep.alpha = config.alpha;
    rep.nprime = nprime;
    rep.bound = c_exact(profile_mod(profile, nprime)).value;

    Rng rng(rep.seed);
    InstancePair pair;
    if (config.generator == PsiStrategy::planted) {
        std::optional<InstancePair> planted;
        for (rep.attempts = 1; rep.attempts <= config.max_attempts && !planted; ++rep.attempts)
            planted = gen_planted(profile, p, config.alpha, config.entry_bound, rng, nprime);
        rep.attempts = std::min(rep.attempts, config.max_attempts);
        if (!planted) {
            rep.status = TrialStatus::rejected;
            rep.reason = "no-instance";
            return rep;
        }
        pair = std::move(*planted);
    } else {
        rep.attempts = 1;
        pair.xi = gen_xi(profile, p, config.entry_bound, rng);
        pair.xi_prime = gen_congruent_pair(pair.xi, profile, p, config.entry_bound, rng, nprime);
        pair.psi = IntMatrix::identity(profile.rank());
        pair.psi_prime = pair.psi;
    }
    detail::assert_pair_invariants(pair, profile, p);
    for (std::size_t i = 0; i < profile.rank(); ++i)
        for (std::size_t j = 0; j < profile.rank(); ++j)
            if (!divisible_by_power(pair.xi(i, j) - pair.xi_prime(i, j), p, nprime))
                throw std::logic_error("xi and xi' are not congruent modulo p^n'");

    rep.census_xi = slope_census(pair.xi, p);
    rep.census_xi_prime = slope_census(pair.xi_prime, p);

    std::vector<Slope> slopes;
    for (const auto& seg : rep.census_xi) slopes.push_back(seg.slope);
    for (const auto& seg : rep.census_xi_prime) slopes.push_back(seg.slope);
    std::sort(slopes.begin(), slopes.end());
    slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());

    bool violated = false;
    for (const auto& s : slopes) {
        SlopeComparison cmp{s, detail::multiplicity_of(rep.census_xi, s), detail::multiplicity_of(rep.census_xi_prime, s),
                            s < *rep.bound};
        if (cmp.below_bound && cmp.multiplicity_xi != cmp.multiplicity_xi_prime) violated = true;
        rep.comparisons.push_back(std::move(cmp));
    }
    rep.status = violated ? TrialStatus::violation : TrialStatus::accepted;
    if (violated) rep.instance = std::move(pair);
    return rep;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentSummary {
    long trials = 0;
    long accepted = 0;
    long violations = 0;
    std::map<std::string, long> rejected;   // by reason
    std::optional<long> kappa;              // resolved kappa (proposition mode)
    std::optional<long> min_congruence_margin;
    long working_precision = 0;

    long rejected_total() const
    {
        long t = 0;
        for (const auto& [_, c] : rejected) t += c;
        return t;
    }
};

struct ExperimentReport {
    ExperimentConfig config;
    ExperimentMode mode = ExperimentMode::proposition;
    ExperimentSummary summary;
    std::vector<TrialReport> trials;
};

/// Runs all trials; `jobs` > 1 spreads them over threads without changing the result.
inline ExperimentReport run_experiment(const ExperimentConfig& config, ExperimentMode mode, unsigned jobs = 1)
{
    config.validate();
    if (mode == ExperimentMode::constancy && !config.nprime)
        throw std::invalid_argument("constancy experiments need `nprime`");

    ExperimentReport report;
    report.config = config;
    report.mode = mode;
    report.trials.resize(static_cast<std::size_t>(config.trials));

    auto run_one = [&](std::size_t i) {
        report.trials[i] = mode == ExperimentMode::proposition ? run_proposition_trial(config, i)
                                                               : run_constancy_trial(config, i);
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(config.trials)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < report.trials.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < report.trials.size(); i = next++) run_one(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    auto& s = report.summary;
    s.trials = config.trials;
    const DivisorProfile profile = config.resolved_profile();
    if (mode == ExperimentMode::proposition) {
        s.kappa = config.kappa ? config.kappa : resolve_kappa(profile, config.alpha);
        if (s.kappa) s.working_precision = profile.level() + 2 * config.alpha + *s.kappa + config.precision_guard;
    }
    for (const auto& t : report.trials) {
        switch (t.status) {
        case TrialStatus::accepted: ++s.accepted; break;
        case TrialStatus::violation: ++s.violations; break;
        case TrialStatus::rejected: ++s.rejected[t.reason]; break;
        }
        if (t.status != TrialStatus::rejected && t.congruence_margin)
            s.min_congruence_margin =
                s.min_congruence_margin ? std::min(*s.min_congruence_margin, *t.congruence_margin) : *t.congruence_margin;
    }
    return report;
}

} // namespace padicslope
