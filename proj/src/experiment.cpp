#include "psteady/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psteady/csv.hpp"

namespace psteady {

using nlohmann::json;

std::string_view to_string(Method m) {
    switch (m) {
        case Method::sequential: return "sequential";
        case Method::parareal: return "parareal";
        case Method::ppic: return "ppic";
        case Method::tpeec: return "tpeec";
    }
    return "unknown";
}

std::string_view display_name(Method m) {
    switch (m) {
        case Method::sequential: return "Sequential";
        case Method::parareal: return "Parareal";
        case Method::ppic: return "PP-IC";
        case Method::tpeec: return "simplified TP-EEC";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::sequential, Method::parareal, Method::ppic, Method::tpeec}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

SystemPtr ModelConfig::build() const {
    switch (kind) {
        case ModelKind::rl_circuit: return rl_circuit(rl);
        case ModelKind::toy_machine: return toy_machine(toy);
        case ModelKind::index1_dae: return index1_dae(dae);
    }
    throw ConfigError("unknown model kind");
}

namespace {

/// Reads one JSON object, remembering which keys were consumed so leftovers can be rejected.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(field(key) + ": must be finite");
        }
    }

    void number(const std::string& key, std::optional<double>& out) {
        if (has(key)) {
            double v = 0.0;
            number(key, v);
            out = v;
        } else {
            seen_.insert(key);
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
            out = static_cast<Int>(v->get<long long>());
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key) + ": expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
            out = v->get<std::string>();
        }
    }

    std::string field(const std::string& key) const {
        return "field '" + (path_.empty() ? key : path_ + "." + key) + "'";
    }
    std::string where() const { return path_.empty() ? "config" : "field '" + path_ + "'"; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown key " + field(it.key()));
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

Method method_value(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a method name");
    const auto m = parse_method(v.get<std::string>());
    if (!m) {
        throw ConfigError(where + ": unknown method '" + v.get<std::string>() +
                          "' (expected sequential, parareal, ppic or tpeec)");
    }
    return *m;
}

ModelConfig parse_model(const json& v) {
    Reader r(v, "model");
    std::string type;
    r.string("type", type);
    ModelConfig model;
    if (type == "rl_circuit") {
        model.kind = ModelKind::rl_circuit;
        r.number("inductance", model.rl.inductance);
        r.number("resistance", model.rl.resistance);
        r.number("source_amplitude", model.rl.source_amplitude);
        r.number("source_frequency", model.rl.source_frequency);
        r.number("source_offset", model.rl.source_offset);
    } else if (type == "toy_machine") {
        model.kind = ModelKind::toy_machine;
        r.number("sigma_mass", model.toy.sigma_mass);
        r.number("nu0", model.toy.nu0);
        r.number("sat_alpha", model.toy.sat_alpha);
        r.number("inertia", model.toy.inertia);
        r.number("friction", model.toy.friction);
        r.number("torque_coeff", model.toy.torque_coeff);
        r.number("source_amplitude", model.toy.source_amplitude);
        r.number("source_frequency", model.toy.source_frequency);
        r.number("prescribed_speed", model.toy.prescribed_speed);
    } else if (type == "index1_dae") {
        model.kind = ModelKind::index1_dae;
        r.number("k11", model.dae.k11);
        r.number("k12", model.dae.k12);
        r.number("k21", model.dae.k21);
        r.number("k22", model.dae.k22);
        r.number("source_amplitude", model.dae.source_amplitude);
        r.number("source_frequency", model.dae.source_frequency);
    } else if (type.empty()) {
        throw ConfigError("field 'model.type' is required (rl_circuit, toy_machine or index1_dae)");
    } else {
        throw ConfigError("field 'model.type': unknown model '" + type + "'");
    }
    r.finish();
    return model;
}

void parse_window(const json& v, ExperimentConfig& cfg) {
    Reader r(v, "window");
    r.number("t_start", cfg.t_start);
    std::optional<double> t_end;
    std::optional<long long> count;
    r.number("t_end", t_end);
    r.number("period", cfg.period);
    if (r.has("count")) {
        long long c = 0;
        r.integer("count", c);
        count = c;
    } else {
        r.get("count");
    }
    r.finish();

    if (t_end && count) throw ConfigError("field 'window': give either t_end or period with count, not both");
    if (count) {
        if (!cfg.period) throw ConfigError("field 'window.count' needs 'window.period'");
        if (*count < 1) throw ConfigError("field 'window.count': must be at least 1");
        cfg.t_end = cfg.t_start + static_cast<double>(*count) * *cfg.period;
    } else if (t_end) {
        cfg.t_end = *t_end;
    } else if (cfg.period) {
        cfg.t_end = cfg.t_start + *cfg.period;
    } else {
        throw ConfigError("field 'window': needs t_end or period");
    }
    if (!(cfg.t_end > cfg.t_start)) throw ConfigError("field 'window': t_end must exceed t_start");
    if (cfg.period && !(*cfg.period > 0)) throw ConfigError("field 'window.period': must be positive");
}

void parse_newton(const json& v, NewtonConfig& n) {
    Reader r(v, "newton");
    r.number("abs_tol", n.abs_tol);
    r.number("rel_tol", n.rel_tol);
    r.integer("max_iter", n.max_iter);
    r.number("fd_epsilon", n.fd_epsilon);
    r.finish();
    try {
        n.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("field 'newton': ") + e.what());
    }
}

void parse_outputs(const json& v, OutputPaths& out) {
    Reader r(v, "outputs");
    r.string("trajectory", out.trajectory);
    r.string("convergence", out.convergence);
    r.string("cost", out.cost);
    r.string("comparison", out.comparison);
    r.finish();
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

bool divides(double window, double step) {
    const double ratio = window / step;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << "config line " << line_of(json_text, e.byte > 0 ? e.byte - 1 : 0) << ": malformed JSON ("
            << e.what() << ")";
        throw ConfigError(msg.str());
    }

    ExperimentConfig cfg;
    Reader r(doc, "");
    const json* model = r.get("model");
    if (model == nullptr) throw ConfigError("field 'model' is required");
    cfg.model = parse_model(*model);

    if (const json* m = r.get("method")) cfg.method = method_value(*m, "field 'method'");
    if (const json* ms = r.get("methods")) {
        if (!ms->is_array()) throw ConfigError("field 'methods': expected an array of method names");
        for (std::size_t i = 0; i < ms->size(); ++i) {
            cfg.methods.push_back(method_value((*ms)[i], "field 'methods[" + std::to_string(i) + "]'"));
        }
    }

    const json* window = r.get("window");
    if (window == nullptr) throw ConfigError("field 'window' is required");
    parse_window(*window, cfg);

    r.number("fine_dt", cfg.fine_dt);
    r.number("coarse_dt", cfg.coarse_dt);
    if (r.has("subintervals")) {
        long long n = 0;
        r.integer("subintervals", n);
        if (n < 1) throw ConfigError("field 'subintervals': must be at least 1");
        cfg.subintervals = n;
    } else {
        r.get("subintervals");
    }
    r.number("tol", cfg.tol);
    r.number("epsilon", cfg.epsilon);
    r.integer("max_iter", cfg.max_iter);
    r.integer("max_periods", cfg.max_periods);
    r.integer("workers", cfg.workers);
    if (const json* u = r.get("initial_state")) {
        if (!u->is_array()) throw ConfigError("field 'initial_state': expected an array of numbers");
        std::vector<double> values;
        for (const auto& x : *u) {
            if (!x.is_number()) throw ConfigError("field 'initial_state': expected an array of numbers");
            values.push_back(x.get<double>());
        }
        cfg.initial_state = std::move(values);
    }
    r.string("observable", cfg.observable);
    if (const json* n = r.get("newton")) parse_newton(*n, cfg.newton);
    r.boolean("tpeec_correction", cfg.tpeec_correction);
    if (const json* o = r.get("outputs")) parse_outputs(*o, cfg.outputs);
    r.finish();

    if (!(cfg.fine_dt > 0)) throw ConfigError("field 'fine_dt' is required and must be positive");
    if (cfg.coarse_dt && !(*cfg.coarse_dt > 0)) throw ConfigError("field 'coarse_dt': must be positive");
    if (cfg.coarse_dt && *cfg.coarse_dt < cfg.fine_dt) throw ConfigError("field 'coarse_dt': must not be below fine_dt");
    if (!(cfg.tol > 0)) throw ConfigError("field 'tol': must be positive");
    if (!(cfg.epsilon > 0)) throw ConfigError("field 'epsilon': must be positive");
    if (cfg.max_iter < 1) throw ConfigError("field 'max_iter': must be at least 1");
    if (cfg.max_periods < 1) throw ConfigError("field 'max_periods': must be at least 1");
    if (cfg.workers < 1) throw ConfigError("field 'workers': must be at least 1");
    return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    try {
        return parse_experiment(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void ExperimentConfig::require_for(Method m) const {
    const double T = steady_period();
    if (!(fine_dt > 0)) throw ConfigError("field 'fine_dt' is required");
    if (fine_dt > T) throw ConfigError("field 'fine_dt': exceeds the period");
    if (m == Method::parareal || m == Method::ppic) {
        if (!subintervals && !coarse_dt) {
            throw ConfigError(std::string(to_string(m)) + " needs 'subintervals' or 'coarse_dt'");
        }
        (void)resolve_subintervals(*this, m == Method::ppic ? T : t_end - t_start);
    }
}

long long resolve_subintervals(const ExperimentConfig& cfg, double window) {
    if (cfg.subintervals) {
        if (cfg.coarse_dt && *cfg.coarse_dt > window / static_cast<double>(*cfg.subintervals) * (1 + 1e-9)) {
            throw ConfigError("field 'coarse_dt': longer than one subinterval");
        }
        return *cfg.subintervals;
    }
    if (!cfg.coarse_dt) throw ConfigError("needs 'subintervals' or 'coarse_dt'");
    if (!divides(window, *cfg.coarse_dt)) {
        throw ConfigError("field 'coarse_dt': does not divide the window evenly");
    }
    return std::max(1LL, std::llround(window / *cfg.coarse_dt));
}

StateVector initial_state(const ExperimentConfig& cfg, const DynamicalSystem& sys) {
    const auto m = static_cast<Eigen::Index>(sys.dimension());
    if (!cfg.initial_state) return StateVector::Zero(m);
    if (static_cast<Eigen::Index>(cfg.initial_state->size()) != m) {
        throw ConfigError("field 'initial_state': expected " + std::to_string(m) + " entries");
    }
    return Eigen::Map<const Vector>(cfg.initial_state->data(), m);
}

namespace {

PinTConfig pint_config(const ExperimentConfig& cfg, double window, long long n) {
    PinTConfig p;
    p.fine = PropagatorSpec{cfg.fine_dt, cfg.newton, false};
    p.coarse = PropagatorSpec{cfg.coarse_dt.value_or(window / static_cast<double>(n)), cfg.newton, false};
    p.tol = cfg.tol;
    p.max_iter = cfg.max_iter;
    p.workers = cfg.workers;
    return p;
}

SteadyStateConfig steady_config(const ExperimentConfig& cfg, bool correction) {
    SteadyStateConfig s;
    s.t_start = cfg.t_start;
    s.period = cfg.steady_period();
    s.dt = cfg.fine_dt;
    s.epsilon = cfg.epsilon;
    s.max_periods = cfg.max_periods;
    s.observable = cfg.observable;
    s.newton = cfg.newton;
    s.correction = correction;
    return s;
}

std::filesystem::path output_path(const std::filesystem::path& dir, const std::string& name) {
    const std::filesystem::path p(name);
    return p.is_absolute() ? p : dir / p;
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

MethodRun run_method(const ExperimentConfig& cfg, Method m) {
    cfg.require_for(m);
    const SystemPtr sys = cfg.model.build();
    const StateVector u0 = initial_state(cfg, *sys);
    const std::string label(display_name(m));

    MethodRun run;
    run.method = m;
    switch (m) {
        case Method::sequential:
        case Method::tpeec: {
            const SteadyStateConfig s = steady_config(cfg, cfg.tpeec_correction);
            run.steady = m == Method::sequential ? sequential_steady_state(*sys, u0, s) : tpeec_steady_state(*sys, u0, s);
            run.converged = run.steady->converged;
            run.cost = convergence_report(label, *run.steady);
            break;
        }
        case Method::parareal: {
            const double window = cfg.t_end - cfg.t_start;
            const long long n = resolve_subintervals(cfg, window);
            const TimePartition part = make_partition(cfg.t_start, cfg.t_end, n);
            run.pint = parareal(*sys, part, u0, pint_config(cfg, window, n));
            run.converged = run.pint->converged;
            run.cost = convergence_report(label, *run.pint);
            break;
        }
        case Method::ppic: {
            const double window = cfg.steady_period();
            const long long n = resolve_subintervals(cfg, window);
            const TimePartition part = make_partition(cfg.t_start, cfg.t_start + window, n);
            run.pint = ppic(*sys, part, u0, pint_config(cfg, window, n));
            run.converged = run.pint->converged;
            run.cost = convergence_report(label, *run.pint);
            break;
        }
    }
    return run;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    if (!cfg.method) throw ConfigError("field 'method' is required for run");
    const MethodRun run = run_method(cfg, *cfg.method);

    prepare_dir(out_dir);
    RunOutcome outcome;
    outcome.converged = run.converged;
    auto emit = [&](const std::string& name, const std::string& contents) {
        const auto path = output_path(out_dir, name);
        write_text_file(path, contents);
        outcome.files.push_back(path);
    };
    if (run.pint) {
        emit(cfg.outputs.trajectory, trajectory_csv(run.pint->final_trajectory));
        emit(cfg.outputs.convergence, pint_convergence_csv(*run.pint));
    } else {
        emit(cfg.outputs.trajectory, trajectory_csv(run.steady->final_period_trajectory));
        emit(cfg.outputs.convergence, steady_convergence_csv(*run.steady));
    }
    emit(cfg.outputs.cost, cost_csv(run.cost));
    return outcome;
}

CompareOutcome compare_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.methods.size() < 2) throw InvalidArgument("compare needs at least two entries in 'methods'");
    for (Method m : cfg.methods) cfg.require_for(m);

    std::vector<MethodRun> runs;
    runs.reserve(cfg.methods.size());
    for (Method m : cfg.methods) runs.push_back(run_method(cfg, m));

    const SteadyStateResult* baseline = nullptr;
    for (const auto& r : runs) {
        if (r.method == Method::sequential && r.converged) baseline = &*r.steady;
    }

    CompareOutcome outcome;
    for (const auto& r : runs) {
        ComparisonRow row;
        row.method = std::string(display_name(r.method));
        row.converged = r.converged;
        row.solves = r.cost.effective_steps;
        if (baseline && r.converged) row.speedup = speedup_estimate(baseline->total_steps, row.solves);
        outcome.rows.push_back(std::move(row));
    }

    prepare_dir(out_dir);
    outcome.file = output_path(out_dir, cfg.outputs.comparison);
    write_text_file(outcome.file, comparison_csv(outcome.rows));
    return outcome;
}

}  // namespace psteady
