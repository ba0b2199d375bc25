// padicslope: Newton polygons, lattice quotients and slope-family experiments.
//
// Exit codes: 0 success, 1 a verification run found a violation, 2 invalid
// input (arguments, matrix files or configs).

#include "padicslope/padicslope.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ps = padicslope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

ps::Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ps::format_error("cannot open " + path);
    try {
        return ps::Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ps::format_error(path + ": " + e.what());
    }
}

void emit(const ps::Json& doc, const std::string& output)
{
    const std::string text = doc.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out) throw ps::format_error("cannot write " + output);
    out << text;
}

ps::Json bounds_report(long d, long h, long n, long alpha, const std::string& kappa_arg)
{
    const ps::DivisorProfile profile = ps::hilbert_profile(d, h, n);
    const auto bf = ps::boundary_functions(profile);

    ps::Json table = ps::Json::array();
    for (std::size_t i = 1; i <= profile.rank(); ++i) {
        const ps::Slope ratio(ps::Integer(bf.T_at(i)), ps::Integer(static_cast<unsigned long>(i)));
        table.push_back(ps::Json{{"i", i}, {"T", bf.T_at(i)}, {"ratio", ratio.to_string()}});
    }

    const auto kc = ps::kappa_closed(n, alpha, d, h);
    ps::Json doc{{"inputs", ps::Json{{"d", d}, {"h", h}, {"n", n}, {"alpha", alpha}, {"kappa", kappa_arg}}},
                 {"profile", ps::profile_to_json(profile)},
                 {"M", bf.M},
                 {"T", table},
                 {"c_exact", ps::cbound_to_json(ps::c_exact(profile))},
                 {"c1", ps::c1_closed(d, h)},
                 {"kappa_closed", ps::closed_to_json(kc)}};
    doc["n_threshold"] = kc.value >= 0 ? ps::closed_to_json(ps::n_threshold(kc.value, alpha, d, h)) : ps::Json(nullptr);

    long kappa = 1;
    if (kappa_arg == "auto") {
        const auto resolved = ps::resolve_kappa(profile, alpha);
        doc["kappa_resolved"] = resolved ? ps::Json(*resolved) : ps::Json(nullptr);
        if (resolved) kappa = *resolved;
    } else {
        std::size_t used = 0;
        try {
            kappa = std::stol(kappa_arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != kappa_arg.size() || kappa < 1)
            throw std::invalid_argument("--kappa must be \"auto\" or a positive integer");
    }
    doc["hypotheses"] = ps::hypotheses_to_json(ps::proposition_hypotheses(profile, alpha, kappa));
    return doc;
}

ps::Json compare_c_report(const std::vector<long>& ds, const std::vector<long>& hs, long n_max)
{
    ps::Json rows = ps::Json::array();
    for (long d : ds)
        for (long h : hs)
            for (long n = 1; n <= n_max; ++n) {
                const auto exact = ps::c_exact(ps::hilbert_profile(d, h, n));
                const double closed =
                    ps::c1_closed(d, h) * std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d + 1)) - 1.0;
                const double exact_d = exact.value.to_double();
                rows.push_back(ps::Json{{"d", d},
                                        {"h", h},
                                        {"n", n},
                                        {"exact", exact.value.to_string()},
                                        {"exact_decimal", exact_d},
                                        {"closed", closed},
                                        {"difference", exact_d - closed},
                                        {"closed_exceeds_exact", closed > exact_d}});
            }
    return ps::Json{{"rows", rows}};
}

int run_verify(const std::string& config_path, ps::ExperimentMode mode, unsigned jobs, const std::string& output)
{
    const ps::ExperimentConfig config = ps::config_from_json(read_json_file(config_path));
    const ps::ExperimentReport report = ps::run_experiment(config, mode, jobs);
    emit(ps::experiment_to_json(report), output);
    for (const auto& [reason, count] : report.summary.rejected)
        std::cerr << "warning: " << count << " trial(s) rejected (" << reason << ")\n";
    if (report.summary.violations > 0) {
        std::cerr << "error: " << report.summary.violations << " violation(s)\n";
        return kExitViolation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Newton polygons, lattice quotients and p-adic slope-family experiments"};
    app.require_subcommand(1);

    std::string input, output, config_path, mode = "prop", kappa_arg = "auto";
    std::uint64_t prime = 0;
    long level = 0, d = 1, h = 1, n = 1, alpha = 0, n_max = 0;
    unsigned jobs = 1;
    std::vector<long> d_list, h_list;

    auto* polygon = app.add_subcommand("polygon", "Characteristic polynomial and Newton polygon of a matrix");
    polygon->add_option("--prime", prime, "Prime p")->required();
    polygon->add_option("--input", input, "Matrix file")->required();
    polygon->add_option("--output", output, "Write the report here instead of stdout");

    auto* snf = app.add_subcommand("snf", "Smith normal form U D V of a matrix");
    snf->add_option("--input", input, "Matrix file")->required();
    snf->add_option("--output", output, "Write the report here instead of stdout");

    auto* profile = app.add_subcommand("profile", "Elementary-divisor profile of L/K for K spanned by matrix columns");
    profile->add_option("--prime", prime, "Prime p")->required();
    profile->add_option("--level", level, "Level n bounding every exponent")->required();
    profile->add_option("--input", input, "Matrix file whose columns generate K")->required();
    profile->add_option("--output", output, "Write the report here instead of stdout");

    auto* bounds = app.add_subcommand("bounds", "Boundary functions, c(L/K) and closed-form constants");
    bounds->set_help_flag("--help", "Print this help message and exit"); // frees -h for --h
    bounds->add_option("--d", d, "Tensor degree d")->required();
    bounds->add_option("--h", h, "Multiplicity h")->required();
    bounds->add_option("--n", n, "Level n")->required();
    bounds->add_option("--alpha", alpha, "Slope alpha")->default_val(0);
    bounds->add_option("--kappa", kappa_arg, "auto or a positive integer")->default_val("auto");
    bounds->add_option("--output", output, "Write the report here instead of stdout");

    auto add_verify_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Experiment config file")->required();
        cmd->add_option("--jobs", jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
        cmd->add_option("--output", output, "Write the report here instead of stdout");
    };
    auto* verify = app.add_subcommand("verify", "Run an experiment config");
    add_verify_options(verify);
    verify->add_option("--mode", mode, "prop or constancy")->check(CLI::IsMember({"prop", "constancy"}));
    auto* verify_prop = app.add_subcommand("verify-prop", "Eigenvalue congruence experiment");
    add_verify_options(verify_prop);
    auto* verify_constancy = app.add_subcommand("verify-constancy", "Slope constancy experiment");
    add_verify_options(verify_constancy);

    auto* compare = app.add_subcommand("compare-c", "Exact c(L/K) against the closed form over a grid");
    compare->add_option("--d-list", d_list, "Comma-separated d values")->delimiter(',')->required();
    compare->add_option("--h-list", h_list, "Comma-separated h values")->delimiter(',')->required();
    compare->add_option("--n-max", n_max, "Largest level n")->required();
    compare->add_option("--output", output, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*polygon) {
            const ps::Prime p(prime);
            emit(ps::polygon_report_to_json(ps::polygon_report(ps::matrix_from_json(read_json_file(input)), p)), output);
        } else if (*snf) {
            emit(ps::smith_to_json(ps::smith_normal_form(ps::matrix_from_json(read_json_file(input)))), output);
        } else if (*profile) {
            const ps::Prime p(prime);
            const auto prof = ps::quotient_profile(ps::matrix_from_json(read_json_file(input)), p, level);
            emit(ps::profile_to_json(prof), output);
        } else if (*bounds) {
            emit(bounds_report(d, h, n, alpha, kappa_arg), output);
        } else if (*verify) {
            return run_verify(config_path,
                              mode == "constancy" ? ps::ExperimentMode::constancy : ps::ExperimentMode::proposition,
                              jobs, output);
        } else if (*verify_prop) {
            return run_verify(config_path, ps::ExperimentMode::proposition, jobs, output);
        } else if (*verify_constancy) {
            return run_verify(config_path, ps::ExperimentMode::constancy, jobs, output);
        } else if (*compare) {
            if (d_list.empty() || h_list.empty() || n_max < 1)
                throw std::invalid_argument("--d-list and --h-list must be nonempty and --n-max >= 1");
            emit(compare_c_report(d_list, h_list, n_max), output);
        }
    } catch (const ps::format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
