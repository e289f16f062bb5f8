#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "visnf/half_map.hpp"
#include "visnf/json_io.hpp"
#include "visnf/normal_form.hpp"
#include "visnf/problem.hpp"
#include "visnf/selftest.hpp"

namespace visnf {

namespace cli_detail {

struct CliOptions {
    std::string task;
    std::string problem_path;
    std::string out_path;
    std::optional<int> order_override;
    std::optional<std::string> mode_override;
    std::optional<int> kmax;
    std::uint64_t seed = 0;
    bool selftest = false;
};

inline void emit(const json& j, const std::string& out_path, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw input_error("cannot open output file: " + out_path);
    f << text;
    if (!f)
        throw input_error("failed while writing output file: " + out_path);
}

inline double worst_abs(const std::vector<double>& by_degree) {
    double worst = 0.0;
    for (double v : by_degree)
        worst = std::max(worst, v);
    return worst;
}

template <class S>
double residual_ceiling(const NormalFormResult<S>& nf) {
    double worst = 0.0;
    for (int i = 0; i < nf.residual_field.ncomps(); ++i)
        worst = std::max(worst, worst_abs(nf.residual_field.comp(i).max_abs_by_degree()));
    worst = std::max(worst, worst_abs(nf.residual_surface.max_abs_by_degree()));
    return worst;
}

template <class S>
int run_task(const ProblemSpec& spec, const CliOptions& opts, std::ostream& out,
             std::ostream& err) {
    const ProblemJets<S> pj = build_problem<S>(spec);
    const int m = static_cast<int>(spec.variables.size());
    const int n = spec.order;
    std::ostringstream summary;

    if (opts.task == "classify") {
        const int k_max = opts.kmax ? *opts.kmax : m - 1;
        if (k_max < 0)
            throw input_error("k_max must be nonnegative");
        const ContactReport<S> rep = contact_order(pj.field, pj.surface, k_max);
        emit(contact_to_json(rep), opts.out_path, out);
        summary << "contact order k = " << rep.k << (rep.simple ? " (simple)" : " (not simple)")
                << "; gradient rank " << rep.rank;
    } else if (opts.task == "normal-form") {
        const NormalFormResult<S> nf = vishik_normal_form(pj.field, pj.surface, n);
        emit(normal_form_to_json(nf), opts.out_path, out);
        summary << "k = " << nf.k << " contact in dimension " << m << "; chart computed to order "
                << n << "; largest residual coefficient "
                << std::scientific << std::setprecision(3) << residual_ceiling(nf);
    } else if (opts.task == "half-map") {
        const NormalFormResult<S> nf = vishik_normal_form(pj.field, pj.surface, n);
        const HalfMapResult<S> hm = pullback_half_map(nf);
        emit(half_map_to_json(hm), opts.out_path, out);
        summary << "fold return map computed to order " << n
                << "; largest involution defect coefficient "
                << std::scientific << std::setprecision(3)
                << scalar_traits<S>::to_double(hm.involution_max);
    } else if (opts.task == "verify") {
        const NormalFormResult<S> nf = vishik_normal_form(pj.field, pj.surface, n);
        const VerifyReport rep = verify(nf, pj.field, pj.surface);
        emit(verify_to_json(rep), opts.out_path, out);
        summary << "field residual zero: " << (rep.field_zero ? "yes" : "no")
                << "; surface residual zero: " << (rep.surface_zero ? "yes" : "no");
    } else {
        throw input_error("unknown task: " + opts.task);
    }

    err << summary.str() << "\n";
    return 0;
}

inline int run_selftest_task(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    const selftest::Report report = selftest::run(opts.seed);
    json j;
    j["seed"] = opts.seed;
    json arr = json::array();
    for (const auto& c : report.criteria) {
        json cj;
        cj["index"] = c.index;
        cj["label"] = c.label;
        cj["passed"] = c.passed;
        cj["cases"] = c.cases;
        cj["failures"] = c.failures;
        arr.push_back(std::move(cj));
    }
    j["criteria"] = std::move(arr);
    j["all_passed"] = report.all_passed();
    emit(j, opts.out_path, out);
    selftest::print(report, err);
    return report.all_passed() ? 0 : 3;
}

}  // namespace cli_detail

// Full command-line front end; returns the process exit code.  Streams
// are injected so tests can drive it in process.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    cli_detail::CliOptions opts;

    CLI::App app{"jet-level contact classification, flattening charts and fold return maps "
                 "for polynomial vector fields"};
    app.add_option("--task", opts.task, "one of: classify, normal-form, half-map, verify")
        ->check(CLI::IsMember({"classify", "normal-form", "half-map", "verify"}));
    app.add_option("problem", opts.problem_path, "problem file (JSON)");
    app.add_option("--order", opts.order_override, "truncation order override");
    app.add_option("--mode", opts.mode_override, "arithmetic override: exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--kmax", opts.kmax, "largest contact order the classifier will consider");
    app.add_option("--out", opts.out_path, "write the JSON report to this file");
    app.add_option("--seed", opts.seed, "seed for the randomized verification suites");
    app.add_flag("--selftest", opts.selftest, "run the seeded verification suites (task verify)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (opts.task.empty())
            throw input_error("--task is required (classify, normal-form, half-map or verify)");
        if (opts.selftest) {
            if (opts.task != "verify")
                throw input_error("--selftest runs under --task verify");
            return cli_detail::run_selftest_task(opts, out, err);
        }
        if (opts.problem_path.empty())
            throw input_error("a problem file is required unless running verify --selftest");

        std::ifstream f(opts.problem_path, std::ios::binary);
        if (!f)
            throw input_error("cannot read problem file: " + opts.problem_path);
        std::ostringstream buf;
        buf << f.rdbuf();

        ProblemSpec spec = parse_problem(buf.str());
        if (opts.order_override) {
            if (*opts.order_override < 1)
                throw input_error("truncation order must be positive");
            spec.order = *opts.order_override;
        }
        if (opts.mode_override)
            spec.mode = *opts.mode_override;

        if (spec.mode == "exact")
            return cli_detail::run_task<Rational>(spec, opts, out, err);
        return cli_detail::run_task<double>(spec, opts, out, err);
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const precondition_error& e) {
        err << "precondition not met: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace visnf
