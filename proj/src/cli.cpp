#include "preypred/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "preypred/analysis.hpp"
#include "preypred/errors.hpp"
#include "preypred/io.hpp"
#include "preypred/jump.hpp"
#include "preypred/ode.hpp"
#include "preypred/rng.hpp"

namespace preypred::cli {

namespace {

// Owns the output stream; '-' means stdout (not owned).
struct Sink {
    explicit Sink(const std::string& path) {
        if (path == "-" || path.empty()) {
            stream = &std::cout;
        } else {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw IoError("cannot open output file: " + path);
            stream = file.get();
        }
    }
    std::ostream& out() { return *stream; }
    std::unique_ptr<std::ofstream> file;
    std::ostream* stream = nullptr;
};

std::string header_line(const std::string& cmd, const RunConfig& cfg) {
    std::ostringstream os;
    os << "preypred " << cmd << " | " << params_summary(cfg.params) << " | dt="
       << format_g17(cfg.dt) << " horizon=" << format_g17(cfg.horizon)
       << " stride=" << format_g17(cfg.sample_stride) << " seed=" << cfg.seed
       << " n_runs=" << cfg.n_runs << " init=(" << format_g17(cfg.init_x) << ","
       << format_g17(cfg.init_y) << ")"
       << " | run i uses substream_seed = master_seed XOR splitmix64(i)";
    return os.str();
}

void write_jsonl(const std::string& path, const std::vector<std::string>& records) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open JSON-lines file: " + path);
    for (const auto& r : records) out << r << "\n";
}

} // namespace

int run_simulate(const RunConfig& cfg) {
    cfg.params.validate();
    Trajectory traj;
    RngStream rng(cfg.seed);
    if (cfg.integrator == "ode") {
        traj = simulate_ode(cfg.params, cfg.init(), cfg.horizon, cfg.dt, cfg.sample_stride);
    } else if (cfg.integrator == "diffusion") {
        traj = simulate_diffusion(cfg.params, cfg.diffusion(), cfg.init(), cfg.horizon,
                                  cfg.sample_stride, rng);
    } else if (cfg.integrator == "hybrid") {
        auto dcfg = cfg.diffusion();
        if (!dcfg.hybrid_threshold)
            throw ValidationError("hybrid integrator needs --threshold");
        traj = simulate_hybrid(cfg.params, dcfg, cfg.init(), cfg.horizon, cfg.sample_stride, rng);
    } else if (cfg.integrator == "jump") {
        JumpConfig jcfg{cfg.event_budget};
        traj = simulate_jump(cfg.params, cfg.init(), cfg.horizon, cfg.sample_stride, rng, jcfg);
    } else {
        throw ValidationError("unknown integrator '" + cfg.integrator +
                              "' (expected jump | diffusion | hybrid | ode)");
    }

    Sink sink(cfg.out);
    write_trajectory_csv(sink.out(), cfg.params,
                         traj, header_line("simulate " + cfg.integrator, cfg));
    return 0;
}

int run_table1(const RunConfig& cfg, const std::vector<double>& omegas) {
    if (omegas.empty()) throw ValidationError("table1: omega list must not be empty");
    std::vector<ExtinctionStats> rows;
    std::vector<std::string> records;
    for (double omega : omegas) {
        ModelParams p = cfg.params;
        p.omega = omega;
        const auto stats =
            ensemble_extinction(p, cfg.diffusion(), cfg.init(), cfg.n_runs, cfg.horizon, cfg.seed);
        rows.push_back(stats);
        records.push_back(extinction_stats_jsonl(stats));
    }
    Sink sink(cfg.out);
    write_table1_csv(sink.out(), rows, header_line("table1", cfg));
    write_jsonl(cfg.jsonl_out, records);
    return 0;
}

int run_table2(const RunConfig& cfg, const std::vector<double>& omegas) {
    if (omegas.empty()) throw ValidationError("table2: omega list must not be empty");
    std::vector<Table2Row> rows;
    std::vector<std::string> records;
    for (double omega : omegas) {
        Table2Row row;
        row.omega = omega;
        try {
            row.report = funnel_width(cfg.params, omega);
            row.ok = true;
            records.push_back(funnel_report_jsonl(row.report));
        } catch (const ValidationError& e) {
            row.error = e.what();
            std::cerr << "warning: omega=" << format_g17(omega) << ": " << e.what() << "\n";
        }
        rows.push_back(row);
    }
    Sink sink(cfg.out);
    // The sigma columns are the per-step amplitudes at the closest approach.
    // The reference table's sigma_x entry at omega=1e9 breaks the 1/sqrt(omega)
    // scaling of its own column and is not reproduced here.
    write_table2_csv(sink.out(), rows, header_line("table2", cfg));
    write_jsonl(cfg.jsonl_out, records);
    return 0;
}

int run_canard(const RunConfig& cfg, double m_lo, double m_hi) {
    const auto search = find_canard_m(cfg.params, m_lo, m_hi);
    Sink sink(cfg.out);
    sink.out() << "# " << header_line("canard", cfg) << "\n";
    for (const auto& step : search.history) {
        nlohmann::json j;
        j["record"] = "canard_step";
        j["lo"] = step.lo;
        j["hi"] = step.hi;
        j["mid"] = step.mid;
        j["mid_cycle"] = step.mid_large ? "large" : "small";
        sink.out() << j.dump() << "\n";
    }
    nlohmann::json j;
    j["record"] = "canard_result";
    j["m_star"] = search.m_star;
    j["bracket_lo"] = search.bracket_lo;
    j["bracket_hi"] = search.bracket_hi;
    j["bracket_width"] = search.bracket_hi - search.bracket_lo;
    sink.out() << j.dump() << "\n";
    return 0;
}

int run_compare(const RunConfig& cfg, const std::vector<double>& omegas,
                const std::vector<double>& checkpoints) {
    if (omegas.empty()) throw ValidationError("compare: omega list must not be empty");
    const auto rows = compare_processes(cfg.params, omegas, cfg.n_runs, cfg.init(), cfg.horizon,
                                        checkpoints, cfg.seed, cfg.diffusion());
    Sink sink(cfg.out);
    write_compare_csv(sink.out(), rows, header_line("compare", cfg));
    return 0;
}

int run_seasonal(const RunConfig& cfg, const std::vector<double>& omegas) {
    if (omegas.empty()) throw ValidationError("seasonal: omega list must not be empty");
    ModelParams p = cfg.params;
    if (p.mortality.is_constant()) {
        // Default seasonal forcing: m(t) = 0.6645 - 0.047*(1 - cos(0.1 t)),
        // i.e. a0 = 0.6175, b0 = 0.047, rate = 0.1.
        p.mortality = MortalitySchedule::cosine(0.6175, 0.047, 0.1);
    }
    p.validate();

    for (double omega : omegas) {
        ModelParams pw = p;
        pw.omega = omega;
        const auto ode = simulate_ode(pw, cfg.init(), cfg.horizon, cfg.dt, cfg.sample_stride);
        RngStream rng(cfg.seed);
        const auto diff = simulate_diffusion(pw, cfg.diffusion(), cfg.init(), cfg.horizon,
                                             cfg.sample_stride, rng);

        std::string path = cfg.out;
        if (path != "-" && !path.empty()) {
            const auto dot = path.rfind(".csv");
            const std::string tag = "_omega" + std::to_string(static_cast<long long>(omega));
            path = dot == std::string::npos ? path + tag : path.substr(0, dot) + tag + ".csv";
        }
        Sink sink(path);
        RunConfig hdr = cfg;
        hdr.params = pw;
        sink.out() << "# " << header_line("seasonal", hdr) << "\n";
        sink.out() << "t,x_ode,y_ode,x_diff,y_diff\n";
        const std::size_t n = std::max(ode.samples.size(), diff.samples.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (i < ode.samples.size()) {
                const auto& s = ode.samples[i];
                sink.out() << format_g(s.t, 10) << ',' << format_g(s.x, 10) << ','
                           << format_g(s.y, 10) << ',';
            } else if (i < diff.samples.size()) {
                sink.out() << format_g(diff.samples[i].t, 10) << ",,,";
            }
            if (i < diff.samples.size()) {
                const auto& s = diff.samples[i];
                sink.out() << format_g(s.x, 10) << ',' << format_g(s.y, 10);
            } else {
                sink.out() << ',';
            }
            sink.out() << '\n';
        }
        nlohmann::json j;
        j["record"] = "seasonal_footer";
        j["omega"] = omega;
        j["ode_termination"] = to_string(ode.termination);
        j["diffusion_termination"] = to_string(diff.termination);
        if (diff.extinction_time) j["diffusion_extinction_time"] = *diff.extinction_time;
        sink.out() << "# " << j.dump() << "\n";
    }
    return 0;
}

} // namespace preypred::cli
