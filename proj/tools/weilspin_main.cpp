// Command-line driver: builds the CM context from a JSON config and runs
// the dimension ledger, the secant/criterion/hodge reports, or the
// invariant suites.  Exit codes: 0 pass, 1 check failure, 2 config error,
// 3 degenerate instance.

#include <omp.h>

#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weilspin/report.hpp"

using namespace weilspin;

namespace {

int run(const std::string& cmd, const JobConfig& cfg, uint64_t seed, int cases,
        const std::string& format) {
    auto started = std::chrono::steady_clock::now();
    RMData rm = cfg.theta_darboux
                    ? RMData::standard(cfg.field, cfg.rank_d)
                    : RMData::from_f_matrix(cfg.field, cfg.rank_d, cfg.theta_matrix);
    Session session(cfg.field, cfg.rank_d, cfg.unit_f, &rm);

    auto emit = [&](const std::string& title, const std::string& payload) {
        if (format == "md")
            std::cout << render_markdown(title, payload);
        else
            std::cout << payload << "\n";
    };

    bool fail = false, degenerate = false;
    if (cmd == "dims") {
        emit("dims", dims_report(session));
    } else if (cmd == "secant") {
        emit("secant", secant_report(session, cfg));
    } else if (cmd == "criterion") {
        Multivector chf1 = resolve_class(session, cfg, true);
        Multivector chf2 = resolve_class(session, cfg, false);
        auto rep = criterion_check(session.octx(), session.secant(), chf1, chf2);
        emit("criterion", criterion_report_json(session, rep));
        degenerate = rep.zero_rank;
        fail = !rep.verdict && !degenerate;
    } else if (cmd == "hodge") {
        std::string payload = hodge_report(session);
        emit("hodge", payload);
        fail = payload.find("\"member\":false") != std::string::npos;
    } else if (cmd == "suite") {
        auto results = run_suites(session, cfg.checks, seed, cases);
        emit("suite", suite_report(results));
        for (const auto& r : results) fail |= !r.pass;
    } else if (cmd == "report") {
        auto results = run_suites(session, cfg.checks, seed, cases);
        Multivector chf1 = resolve_class(session, cfg, true);
        Multivector chf2 = resolve_class(session, cfg, false);
        auto rep = criterion_check(session.octx(), session.secant(), chf1, chf2);
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::ostringstream agg;
        agg << "{\"dims\":" << dims_report(session)
            << ",\"secant\":" << secant_report(session, cfg)
            << ",\"criterion\":" << criterion_report_json(session, rep)
            << ",\"hodge\":" << hodge_report(session)
            << ",\"suites\":" << suite_report(results) << ",\"elapsed_seconds\":" << elapsed
            << "}";
        emit("report", agg.str());
        for (const auto& r : results) fail |= !r.pass;
        degenerate = rep.zero_rank;
        fail |= !rep.verdict && !degenerate;
    } else {
        std::cerr << "unknown command: " << cmd << "\n";
        return 2;
    }
    if (degenerate) return 3;
    return fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact CM / secant-spinor verification engine"};

    std::string config_path, format = "json";
    uint64_t seed = 0;
    int cases = 0;

    std::string cmd;
    app.add_option("command", cmd, "dims | secant | criterion | hodge | suite | report")
        ->required();
    app.add_option("--config", config_path, "path to the JSON job config")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    auto* cases_opt = app.add_option("--cases", cases, "override the config case count");
    app.add_option("--format", format, "json | md")->check(CLI::IsMember({"json", "md"}));

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("WEILSPIN_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) omp_set_num_threads(v);
    }

    try {
        JobConfig cfg = load_config_file(config_path);
        return run(cmd, cfg, seed_opt->count() ? seed : cfg.seed,
                   cases_opt->count() ? cases : cfg.case_count, format);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroRank&) {
        std::cerr << "degenerate instance: zero rank\n";
        return 3;
    } catch (const DegenerateW& e) {
        std::cerr << "degenerate instance: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
