// psteady command-line front end. Talks to the library only through psteady.h.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "psteady/psteady.h"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Options {
    std::string config;
    std::string out = ".";
    int workers = 0;
    std::string method;
};

int report(psteady_status status) {
    std::fprintf(stderr, "psteady: %s: %s\n", psteady_status_name(status), psteady_last_error());
    return kExitError;
}

// Loads the config and applies command-line overrides.
psteady_status open_experiment(const Options& opt, psteady_experiment** exp) {
    psteady_status s = psteady_experiment_load(opt.config.c_str(), exp);
    if (s != PSTEADY_OK) return s;
    if (opt.workers > 0 && (s = psteady_experiment_set_workers(*exp, opt.workers)) != PSTEADY_OK) return s;
    if (!opt.method.empty() && (s = psteady_experiment_set_method(*exp, opt.method.c_str())) != PSTEADY_OK) return s;
    return PSTEADY_OK;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const Options& opt) {
    psteady_experiment* exp = nullptr;
    psteady_status s = open_experiment(opt, &exp);
    if (s != PSTEADY_OK) {
        psteady_experiment_destroy(exp);
        return report(s);
    }
    const auto start = std::chrono::steady_clock::now();
    int converged = 0;
    s = psteady_experiment_run(exp, opt.out.c_str(), &converged);
    psteady_experiment_destroy(exp);
    if (s != PSTEADY_OK) return report(s);
    std::printf("%s; outputs in %s (%.3f s wall)\n", converged ? "converged" : "not converged", opt.out.c_str(),
                seconds_since(start));
    return converged ? kExitConverged : kExitNotConverged;
}

int cmd_compare(const Options& opt) {
    psteady_experiment* exp = nullptr;
    psteady_status s = open_experiment(opt, &exp);
    if (s != PSTEADY_OK) {
        psteady_experiment_destroy(exp);
        return report(s);
    }
    const auto start = std::chrono::steady_clock::now();
    size_t rows = 0;
    s = psteady_experiment_compare(exp, opt.out.c_str(), &rows);
    psteady_experiment_destroy(exp);
    if (s != PSTEADY_OK) return report(s);
    std::printf("compared %zu methods; outputs in %s (%.3f s wall)\n", rows, opt.out.c_str(), seconds_since(start));
    return kExitConverged;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config, "experiment JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "output directory (created if missing)");
    cmd->add_option("--workers", opt.workers, "worker threads for the fine solves")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic steady states by parallel-in-time and corrected time stepping"};
    app.set_version_flag("--version", std::string(psteady_version()));
    app.require_subcommand(1);

    Options opt;
    CLI::App* run = app.add_subcommand("run", "run one method and write trajectory, convergence and cost CSVs");
    add_common(run, opt);
    run->add_option("--method", opt.method, "sequential, parareal, ppic or tpeec");
    CLI::App* compare = app.add_subcommand("compare", "run every listed method and write the comparison CSV");
    add_common(compare, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    return run->parsed() ? cmd_run(opt) : cmd_compare(opt);
}
