#pragma once

// JSON documents shared by the library and the command-line tool: matrix
// files, polygon/SNF/bounds reports, experiment configs and reports.
//
// Integers are written as JSON numbers when they fit in a signed 64-bit
// integer and as decimal strings otherwise; both forms are accepted on input.
// Exact rationals are "num/den" strings.

#include "padicslope/bounds.hpp"
#include "padicslope/family_sim.hpp"
#include "padicslope/int_matrix.hpp"
#include "padicslope/lattice_algebra.hpp"
#include "padicslope/newton.hpp"
#include "padicslope/padic_core.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicslope {

using Json = nlohmann::ordered_json;

/// Raised on malformed or schema-violating documents.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json integer_to_json(const Integer& x)
{
    if (x.fits_slong_p()) return Json(x.get_si());
    return Json(x.get_str());
}

inline Integer integer_from_json(const Json& j)
{
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
        return Integer(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
            throw format_error("not a decimal integer: \"" + s + "\"");
        return Integer(s[0] == '+' ? s.substr(1) : s);
    }
    throw format_error("expected an integer, got " + j.dump());
}

inline Json vector_to_json(std::span<const Integer> v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(integer_to_json(x));
    return out;
}

inline Json matrix_rows_json(const IntMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(vector_to_json(m.row(i)));
    return rows;
}

/// {"rows": [[...], ...]}
inline Json matrix_to_json(const IntMatrix& m) { return Json{{"rows", matrix_rows_json(m)}}; }

inline IntMatrix matrix_from_json(const Json& doc)
{
    if (!doc.is_object() || !doc.contains("rows")) throw format_error("matrix document needs a `rows` field");
    for (const auto& [key, _] : doc.items())
        if (key != "rows") throw format_error("unknown matrix field `" + key + "`");
    const Json& rows = doc.at("rows");
    if (!rows.is_array() || rows.empty()) throw format_error("`rows` must be a nonempty list of lists");
    std::vector<IntVector> parsed;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != rows.size()) throw format_error("matrix must be square");
        IntVector r;
        for (const auto& x : row) r.push_back(integer_from_json(x));
        parsed.push_back(std::move(r));
    }
    return IntMatrix::from_rows(parsed);
}

inline Json census_to_json(const std::vector<SlopeSegment>& census)
{
    Json out = Json::array();
    for (const auto& s : census) out.push_back(Json{{"slope", s.slope.to_string()}, {"length", s.length}});
    return out;
}

inline std::vector<SlopeSegment> census_from_json(const Json& j)
{
    std::vector<SlopeSegment> out;
    for (const auto& s : j) out.push_back({Slope::parse(s.at("slope").get<std::string>()), s.at("length").get<long>()});
    return out;
}

// ---------------------------------------------------------------------------
// Polygon report

struct PolygonReport {
    std::uint64_t prime = 2;
    CharPoly char_poly;
    NewtonPolygon polygon;
    friend bool operator==(const PolygonReport&, const PolygonReport&) = default;
};

inline PolygonReport polygon_report(const IntMatrix& a, const Prime& p)
{
    PolygonReport rep;
    rep.prime = p.value();
    rep.char_poly = char_poly(a);
    rep.polygon = newton_polygon(rep.char_poly, p);
    return rep;
}

/// The infinite-slope multiplicity appears as a trailing "inf" segment.
inline Json polygon_report_to_json(const PolygonReport& rep)
{
    Json vertices = Json::array();
    for (const auto& v : rep.polygon.vertices) vertices.push_back(Json{{"index", v.index}, {"valuation", v.valuation}});
    std::vector<SlopeSegment> segs = rep.polygon.segments;
    if (rep.polygon.infinite_multiplicity > 0) segs.push_back({Slope::infinity(), rep.polygon.infinite_multiplicity});
    return Json{{"prime", rep.prime},
                {"char_poly", vector_to_json(rep.char_poly.c)},
                {"vertices", vertices},
                {"segments", census_to_json(segs)}};
}

inline PolygonReport polygon_report_from_json(const Json& j)
{
    PolygonReport rep;
    rep.prime = j.at("prime").get<std::uint64_t>();
    for (const auto& c : j.at("char_poly")) rep.char_poly.c.push_back(integer_from_json(c));
    for (const auto& v : j.at("vertices"))
        rep.polygon.vertices.push_back({v.at("index").get<long>(), v.at("valuation").get<long>()});
    for (const auto& seg : census_from_json(j.at("segments"))) {
        if (seg.slope.is_infinite())
            rep.polygon.infinite_multiplicity = seg.length;
        else
            rep.polygon.segments.push_back(seg);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Smith normal form / profiles

inline Json smith_to_json(const SmithDecomposition& snf)
{
    return Json{{"divisors", vector_to_json(snf.divisors())},
                {"U", matrix_rows_json(snf.U)},
                {"D", matrix_rows_json(snf.D)},
                {"V", matrix_rows_json(snf.V)}};
}

inline Json profile_to_json(const DivisorProfile& profile)
{
    Json sigma = Json::array();
    for (const auto& [e, count] : profile.multiplicities()) sigma.push_back(Json{{"exponent", e}, {"count", count}});
    return Json{{"n", profile.level()}, {"a", profile.exponents()}, {"rank", profile.rank()}, {"multiplicities", sigma}};
}

// ---------------------------------------------------------------------------
// Bounds

inline Json cbound_to_json(const CBound& c)
{
    return Json{{"value", c.value.to_string()}, {"argmin", c.argmin}, {"capped", c.capped}};
}

inline Json closed_to_json(const ClosedFormInteger& c)
{
    return Json{{"value", c.value}, {"raw", c.raw}, {"near_boundary", c.near_boundary}};
}

inline Json hypotheses_to_json(const HypothesisReport& rep)
{
    Json levels = Json::array();
    for (const auto& lc : rep.levels)
        levels.push_back(Json{{"nprime", lc.nprime}, {"c", lc.c.value.to_string()}, {"alpha_below_c", lc.ok}});
    Json out{{"alpha", rep.alpha},
             {"kappa", rep.kappa},
             {"kappa_in_range", rep.kappa_in_range},
             {"levels", levels},
             {"pass", rep.pass}};
    if (!rep.reason.empty()) out["reason"] = rep.reason;
    return out;
}

// ---------------------------------------------------------------------------
// Experiment configs

inline ExperimentConfig config_from_json(const Json& j)
{
    static const std::set<std::string> known{"p",           "profile",      "hilbert",     "max_rank",
                                             "alpha",       "kappa",        "trials",      "master_seed",
                                             "generator",   "max_attempts", "entry_bound", "precision_guard",
                                             "nprime"};
    if (!j.is_object()) throw format_error("config must be an object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw format_error("unknown config field `" + key + "`");
    for (const char* required : {"p", "alpha", "trials", "master_seed"})
        if (!j.contains(required)) throw format_error(std::string("missing config field `") + required + "`");

    auto get_long = [&](const char* key) {
        const Json& v = j.at(key);
        if (!v.is_number_integer()) throw format_error(std::string("`") + key + "` must be an integer");
        return v.get<long>();
    };

    ExperimentConfig c;
    try {
        if (!j.at("p").is_number_unsigned()) throw format_error("`p` must be a positive integer");
        c.p = j.at("p").get<std::uint64_t>();
        c.alpha = get_long("alpha");
        c.trials = get_long("trials");
        if (!j.at("master_seed").is_number_integer()) throw format_error("`master_seed` must be an integer");
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("profile")) {
            const Json& pj = j.at("profile");
            for (const auto& [key, _] : pj.items())
                if (key != "n" && key != "a") throw format_error("unknown profile field `" + key + "`");
            c.profile = DivisorProfile(pj.at("n").get<long>(), pj.at("a").get<std::vector<long>>());
        }
        if (j.contains("hilbert")) {
            const Json& hj = j.at("hilbert");
            for (const auto& [key, _] : hj.items())
                if (key != "d" && key != "h" && key != "n") throw format_error("unknown hilbert field `" + key + "`");
            c.hilbert = HilbertSource{hj.at("d").get<long>(), hj.at("h").get<long>(), hj.at("n").get<long>()};
        }
        if (j.contains("max_rank")) c.max_rank = static_cast<std::size_t>(get_long("max_rank"));
        if (j.contains("kappa")) {
            const Json& k = j.at("kappa");
            if (k.is_string()) {
                if (k.get<std::string>() != "auto") throw format_error("`kappa` must be \"auto\" or an integer");
            } else {
                c.kappa = get_long("kappa");
            }
        }
        if (j.contains("generator")) {
            const auto g = j.at("generator").get<std::string>();
            if (g == "POLYNOMIAL_PSI")
                c.generator = PsiStrategy::polynomial_psi;
            else if (g == "PLANTED")
                c.generator = PsiStrategy::planted;
            else
                throw format_error("unknown generator `" + g + "`");
        }
        if (j.contains("max_attempts")) c.max_attempts = get_long("max_attempts");
        if (j.contains("entry_bound")) c.entry_bound = get_long("entry_bound");
        if (j.contains("precision_guard")) c.precision_guard = get_long("precision_guard");
        if (j.contains("nprime")) c.nprime = get_long("nprime");
    } catch (const nlohmann::json::exception& e) {
        throw format_error(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

inline Json config_to_json(const ExperimentConfig& c)
{
    Json j{{"p", c.p}};
    if (c.profile) j["profile"] = Json{{"n", c.profile->level()}, {"a", c.profile->exponents()}};
    if (c.hilbert) j["hilbert"] = Json{{"d", c.hilbert->d}, {"h", c.hilbert->h}, {"n", c.hilbert->n}};
    j["max_rank"] = c.max_rank;
    j["alpha"] = c.alpha;
    j["kappa"] = c.kappa ? Json(*c.kappa) : Json("auto");
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["generator"] = to_string(c.generator);
    j["max_attempts"] = c.max_attempts;
    j["entry_bound"] = c.entry_bound;
    j["precision_guard"] = c.precision_guard;
    if (c.nprime) j["nprime"] = *c.nprime;
    return j;
}

// ---------------------------------------------------------------------------
// Experiment reports

inline Json trial_to_json(const TrialReport& t)
{
    Json j{{"index", t.index}, {"seed", t.seed}, {"status", to_string(t.status)}};
    if (!t.reason.empty()) j["reason"] = t.reason;
    j["alpha"] = t.alpha;
    if (t.kappa) j["kappa"] = *t.kappa;
    j["attempts"] = t.attempts;
    j["census_xi"] = census_to_json(t.census_xi);
    j["census_xi_prime"] = census_to_json(t.census_xi_prime);
    if (t.lambda) j["lambda"] = integer_to_json(*t.lambda);
    if (t.lambda_prime) j["lambda_prime"] = integer_to_json(*t.lambda_prime);
    if (t.a) j["a"] = integer_to_json(*t.a);
    if (t.a_prime) j["a_prime"] = integer_to_json(*t.a_prime);
    if (t.a) j["precision"] = t.precision;
    if (t.congruence_margin) j["congruence_margin"] = *t.congruence_margin;
    if (t.nprime) j["nprime"] = *t.nprime;
    if (t.bound) j["bound"] = t.bound->to_string();
    if (!t.comparisons.empty()) {
        Json cmp = Json::array();
        for (const auto& c : t.comparisons)
            cmp.push_back(Json{{"slope", c.slope.to_string()},
                               {"multiplicity_xi", c.multiplicity_xi},
                               {"multiplicity_xi_prime", c.multiplicity_xi_prime},
                               {"below_bound", c.below_bound}});
        j["comparisons"] = cmp;
    }
    if (t.status == TrialStatus::violation && t.instance) {
        Json inst{{"xi", matrix_rows_json(t.instance->xi)},
                  {"xi_prime", matrix_rows_json(t.instance->xi_prime)},
                  {"psi", matrix_rows_json(t.instance->psi)},
                  {"psi_prime", matrix_rows_json(t.instance->psi_prime)}};
        if (!t.instance->psi_polynomial.empty()) inst["psi_polynomial"] = vector_to_json(t.instance->psi_polynomial);
        j["instance"] = inst;
    }
    return j;
}

inline Json summary_to_json(const ExperimentSummary& s)
{
    Json rejected = Json::object();
    for (const auto& [reason, count] : s.rejected) rejected[reason] = count;
    Json j{{"trials", s.trials}, {"accepted", s.accepted}, {"rejected", rejected}, {"violations", s.violations}};
    j["kappa"] = s.kappa ? Json(*s.kappa) : Json(nullptr);
    j["working_precision"] = s.working_precision;
    j["min_congruence_margin"] = s.min_congruence_margin ? Json(*s.min_congruence_margin) : Json(nullptr);
    return j;
}

inline Json experiment_to_json(const ExperimentReport& rep)
{
    Json trials = Json::array();
    for (const auto& t : rep.trials) trials.push_back(trial_to_json(t));
    return Json{{"mode", to_string(rep.mode)},
                {"config", config_to_json(rep.config)},
                {"summary", summary_to_json(rep.summary)},
                {"trials", trials}};
}

} // namespace padicslope
