#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "psteady/csv.hpp"
#include "psteady/experiment.hpp"
#include "support.hpp"

using namespace psteady;
namespace fs = std::filesystem;

namespace {

const char* kRlPpic = R"({
  "model": {"type": "rl_circuit", "inductance": 0.01},
  "method": "ppic",
  "window": {"period": 0.02},
  "fine_dt": 1e-4,
  "subintervals": 4,
  "tol": 1e-8
})";

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("psteady_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string config_error(const std::string& text) {
    try {
        (void)parse_experiment(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("method names") {
    for (Method m : {Method::sequential, Method::parareal, Method::ppic, Method::tpeec}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK(display_name(Method::ppic) == "PP-IC");
    CHECK(display_name(Method::tpeec) == "simplified TP-EEC");
    CHECK(display_name(Method::sequential) == "Sequential");
    CHECK(display_name(Method::parareal) == "Parareal");
    CHECK_FALSE(parse_method("newton").has_value());
}

TEST_CASE("parsing a complete config") {
    const ExperimentConfig c = parse_experiment(R"({
      "model": {"type": "toy_machine", "sat_alpha": 0.2, "prescribed_speed": 3.0},
      "methods": ["sequential", "tpeec"],
      "window": {"t_start": 0.1, "period": 0.02, "count": 3},
      "fine_dt": 1e-4, "coarse_dt": 1e-3, "tol": 1e-6, "epsilon": 1e-4,
      "max_iter": 7, "max_periods": 9, "workers": 3,
      "initial_state": [0.1, 0.2, 0.3], "observable": "field",
      "newton": {"abs_tol": 1e-11, "max_iter": 12},
      "tpeec_correction": false,
      "outputs": {"trajectory": "t.csv"}
    })");
    CHECK(c.model.kind == ModelKind::toy_machine);
    CHECK(c.model.toy.sat_alpha == 0.2);
    CHECK(c.model.toy.prescribed_speed == 3.0);
    CHECK(c.methods == std::vector<Method>{Method::sequential, Method::tpeec});
    CHECK_FALSE(c.method.has_value());
    CHECK(c.t_start == 0.1);
    CHECK(c.t_end == doctest::Approx(0.16));
    CHECK(c.steady_period() == 0.02);
    CHECK(c.coarse_dt == 1e-3);
    CHECK(c.max_iter == 7);
    CHECK(c.max_periods == 9);
    CHECK(c.workers == 3);
    CHECK(c.initial_state == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(c.observable == "field");
    CHECK(c.newton.abs_tol == 1e-11);
    CHECK(c.newton.max_iter == 12);
    CHECK(c.newton.rel_tol == NewtonConfig{}.rel_tol);
    CHECK_FALSE(c.tpeec_correction);
    CHECK(c.outputs.trajectory == "t.csv");
    CHECK(c.outputs.cost == "cost.csv");
}

TEST_CASE("config errors") {
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit"}, "window": {"period": 0.02}, "fine_dt": 1e-4,
                                    "finedt": 1})"),
                   "unknown key field 'finedt'"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit", "inductanse": 1}, "window": {"period": 0.02},
                                    "fine_dt": 1e-4})"),
                   "unknown key field 'model.inductanse'"));
    CHECK(contains(config_error(R"({"window": {"period": 0.02}, "fine_dt": 1e-4})"), "field 'model' is required"));
    CHECK(contains(config_error("{\n  \"model\": {\"type\": \"rl_circuit\"},\n  \"fine_dt\": 1e-4,,\n}"),
                   "config line 3"));
    CHECK(contains(config_error(R"({"model": {"type": "motor"}, "window": {"period": 0.02}, "fine_dt": 1e-4})"),
                   "model.type"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit"}, "method": "rk4", "window": {"period": 0.02},
                                    "fine_dt": 1e-4})"),
                   "unknown method 'rk4'"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit"}, "window": {"count": 2}, "fine_dt": 1e-4})"),
                   "window.count"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit"}, "window": {"period": 0.02}})"), "fine_dt"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit", "inductance": "big"},
                                    "window": {"period": 0.02}, "fine_dt": 1e-4})"),
                   "model.inductance"));
    CHECK(contains(config_error(R"({"model": {"type": "rl_circuit"}, "window": {"period": 0.02}, "fine_dt": 1e-4,
                                    "workers": 0})"),
                   "workers"));
    CHECK_THROWS_AS((void)parse_experiment("[1, 2]"), ConfigError);
    CHECK_THROWS_AS((void)load_experiment("/nonexistent/psteady.json"), IoError);
}

TEST_CASE("subinterval resolution") {
    ExperimentConfig c = parse_experiment(kRlPpic);
    CHECK(resolve_subintervals(c, 0.02) == 4);
    c.subintervals.reset();
    c.coarse_dt = 2.5e-3;
    CHECK(resolve_subintervals(c, 0.02) == 8);
    c.coarse_dt = 3e-3;
    CHECK_THROWS_AS((void)resolve_subintervals(c, 0.02), ConfigError);
    c.coarse_dt.reset();
    CHECK_THROWS_AS(c.require_for(Method::ppic), ConfigError);
    CHECK_NOTHROW(c.require_for(Method::sequential));
}

TEST_CASE("initial state") {
    ExperimentConfig c = parse_experiment(kRlPpic);
    const SystemPtr sys = c.model.build();
    CHECK(initial_state(c, *sys) == Vector::Zero(1));
    c.initial_state = std::vector<double>{1, 2};
    CHECK_THROWS_AS((void)initial_state(c, *sys), ConfigError);
}

TEST_CASE("real formatting round-trips") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(2.0) == "2");
    for (int i = 0; i < 200; ++i) {
        const double x = std::ldexp(testing::uniform(-1, 1), static_cast<int>(testing::uniform(-300, 300)));
        CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("csv writers") {
    Trajectory t;
    t.observable_names = {"current", "source"};
    t.times = {0.0, 0.5};
    t.states = {testing::vec({1.0}), testing::vec({NAN})};
    t.observables = {{1.0, 0.0}, {2.0, 1.0}};
    CHECK(trajectory_csv(t) == "time,state_0,current,source\n0,1,1,0\nerror,non-finite value\n");

    PinTResult p;
    p.jump_norms = {0.5, 0.25};
    p.subintervals = 4;
    p.fine_steps_per_subinterval = 10;
    CHECK(pint_convergence_csv(p) == "iteration,jump_norm,effective_steps_so_far\n1,0.5,14\n2,0.25,28\n");

    SteadyStateResult s;
    s.err_history = {0.5};
    s.steps_per_period = 200;
    CHECK(steady_convergence_csv(s) == "period,err,total_steps\n1,0.5,200\n");

    CostReport c;
    c.method = "PP-IC";
    c.effective_steps = 1968;
    c.iterations = 12;
    c.subintervals = 80;
    c.fine_steps_per_subinterval = 84;
    c.sequential_steps = 56160;
    c.speedup = 56160.0 / 1968.0;
    CHECK(cost_csv(c) ==
          "method,effective_steps,iterations,subintervals,fine_steps_per_subinterval,sequential_steps,speedup,"
          "converged\nPP-IC,1968,12,80,84,56160,28.54,true\n");

    const std::vector<ComparisonRow> rows{{"Sequential", 56160, true, 1.0},
                                          {"PP-IC", 1968, true, 56160.0 / 1968.0},
                                          {"simplified TP-EEC", 0, false, std::nullopt}};
    CHECK(comparison_csv(rows) ==
          "method,solves,converged,speedup\nSequential,56160,true,1.00\nPP-IC,1968,true,28.54\n"
          "simplified TP-EEC,not applicable,false,\n");
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.csv", "x"), IoError);
}

TEST_CASE("run writes the three outputs") {
    const fs::path dir = scratch("run");
    const ExperimentConfig c = parse_experiment(kRlPpic);
    const RunOutcome out = run_experiment(c, dir / "nested");
    CHECK(out.converged);
    REQUIRE(out.files.size() == 3);
    const std::string traj = read_file(dir / "nested" / "trajectory.csv");
    const std::string conv = read_file(dir / "nested" / "convergence.csv");
    const std::string cost = read_file(dir / "nested" / "cost.csv");
    CHECK(traj.rfind("time,state_0,current,source\n", 0) == 0);
    CHECK(std::count(traj.begin(), traj.end(), '\n') == 202);
    CHECK(conv.rfind("iteration,jump_norm,effective_steps_so_far\n", 0) == 0);
    CHECK(contains(cost, "\nPP-IC,"));
    CHECK(contains(cost, ",4,50,"));

    SUBCASE("byte identical for any worker count") {
        ExperimentConfig w = c;
        w.workers = 3;
        (void)run_experiment(w, dir / "w3");
        CHECK(read_file(dir / "w3" / "trajectory.csv") == traj);
        CHECK(read_file(dir / "w3" / "convergence.csv") == conv);
        CHECK(read_file(dir / "w3" / "cost.csv") == cost);
    }
    SUBCASE("non-convergence is an outcome") {
        ExperimentConfig n = c;
        n.method = Method::sequential;
        n.epsilon = 1e-300;
        n.max_periods = 3;
        const RunOutcome r = run_experiment(n, dir / "seq");
        CHECK_FALSE(r.converged);
        CHECK(contains(read_file(dir / "seq" / "cost.csv"), "\nSequential,600,3,1,200,,,false\n"));
    }
    SUBCASE("a method is required") {
        ExperimentConfig n = c;
        n.method.reset();
        CHECK_THROWS_AS((void)run_experiment(n, dir / "none"), ConfigError);
    }
    fs::remove_all(dir);
}

TEST_CASE("compare") {
    const fs::path dir = scratch("compare");
    ExperimentConfig c = parse_experiment(kRlPpic);
    c.method.reset();
    c.methods = {Method::sequential, Method::ppic, Method::tpeec};
    const CompareOutcome out = compare_experiment(c, dir);
    REQUIRE(out.rows.size() == 3);
    CHECK(out.rows[0].method == "Sequential");
    CHECK(out.rows[1].method == "PP-IC");
    CHECK(out.rows[2].method == "simplified TP-EEC");
    for (const auto& r : out.rows) CHECK(r.converged);
    CHECK(*out.rows[0].speedup == 1.0);
    CHECK(*out.rows[1].speedup == doctest::Approx(static_cast<double>(out.rows[0].solves) / out.rows[1].solves));
    const std::string csv = read_file(out.file);
    CHECK(csv.rfind("method,solves,converged,speedup\nSequential,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    SUBCASE("needs two methods") {
        c.methods = {Method::ppic};
        CHECK_THROWS_AS((void)compare_experiment(c, dir), InvalidArgument);
    }
    SUBCASE("biased source") {
        c.model.rl.inductance = 0.1;
        c.model.rl.source_offset = 1.0;
        c.methods = {Method::sequential, Method::tpeec};
        c.max_periods = 200;
        const CompareOutcome b = compare_experiment(c, dir / "bias");
        CHECK(b.rows[0].converged);
        CHECK_FALSE(b.rows[1].converged);
        CHECK(contains(read_file(b.file), "\nsimplified TP-EEC,not applicable,false,\n"));
    }
    fs::remove_all(dir);
}
