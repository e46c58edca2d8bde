#include "preypred/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace preypred {

std::string format_g(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string format_g17(double v) { return format_g(v, 17); }

std::string params_summary(const ModelParams& p) {
    std::ostringstream os;
    os << "r=" << format_g17(p.r) << " K=" << format_g17(p.K) << " a=" << format_g17(p.a)
       << " eps=" << format_g17(p.eps) << " omega=" << format_g17(p.omega);
    if (p.mortality.is_constant()) {
        os << " m=" << format_g17(p.mortality.constant_value());
    } else {
        os << " m_a0=" << format_g17(p.mortality.a0()) << " m_b0=" << format_g17(p.mortality.b0())
           << " m_rate=" << format_g17(p.mortality.rate());
    }
    return os.str();
}

namespace {

nlohmann::json footer_json(const Trajectory& traj) {
    nlohmann::json j;
    j["record"] = "run_footer";
    j["termination"] = to_string(traj.termination);
    if (traj.extinction_time) j["extinction_time"] = *traj.extinction_time;
    if (traj.absorption_time) j["absorption_time"] = *traj.absorption_time;
    if (traj.event_count) j["event_count"] = traj.event_count;
    if (traj.capture_count) j["capture_count"] = traj.capture_count;
    if (traj.clamp_count) j["clamp_count"] = traj.clamp_count;
    j["samples"] = traj.samples.size();
    return j;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const ModelParams& p, const Trajectory& traj,
                          const std::string& header_comment) {
    out << "# " << header_comment << "\n";
    out << "t,x,y,xi\n";
    for (const State& s : traj.samples) {
        out << format_g(s.t, 10) << ',' << format_g(s.x, 10) << ',' << format_g(s.y, 10) << ',';
        if (s.x > 0.0) out << format_g(p.eps * std::log(s.x), 10);
        out << '\n';
    }
    out << "# " << footer_json(traj).dump() << "\n";
}

std::string extinction_stats_jsonl(const ExtinctionStats& s) {
    nlohmann::json j;
    j["record"] = "extinction_stats";
    j["omega"] = s.omega;
    j["n_runs"] = s.n_runs;
    j["n_extinct"] = s.n_extinct;
    j["p_ext"] = s.p_ext;
    j["mean_T"] = std::isnan(s.mean_T) ? nlohmann::json() : nlohmann::json(s.mean_T);
    j["std_T"] = std::isnan(s.std_T) ? nlohmann::json() : nlohmann::json(s.std_T);
    j["horizon"] = s.horizon;
    return j.dump();
}

std::string funnel_report_jsonl(const FunnelReport& r) {
    nlohmann::json j;
    j["record"] = "funnel_report";
    j["omega"] = r.omega;
    j["alpha"] = r.alpha;
    j["y0_star"] = r.y0_star;
    j["rho"] = r.rho;
    j["sigma_x_local"] = r.sigma_x_local;
    j["sigma_y_local"] = r.sigma_y_local;
    return j.dump();
}

void write_table1_csv(std::ostream& out, std::span<const ExtinctionStats> rows,
                      const std::string& header_comment) {
    out << "# " << header_comment << "\n";
    out << "omega,n_runs,p_ext,mean_T,std_T\n";
    for (const auto& s : rows) {
        out << format_g17(s.omega) << ',' << s.n_runs << ',' << format_g17(s.p_ext) << ','
            << format_g17(s.mean_T) << ',' << format_g17(s.std_T) << '\n';
    }
}

void write_table2_csv(std::ostream& out, std::span<const Table2Row> rows,
                      const std::string& header_comment) {
    out << "# " << header_comment << "\n";
    out << "omega,alpha,y0_star,rho,sigma_x,sigma_y\n";
    for (const auto& row : rows) {
        if (row.ok) {
            const auto& r = row.report;
            out << format_g17(r.omega) << ',' << format_g17(r.alpha) << ','
                << format_g17(r.y0_star) << ',' << format_g17(r.rho) << ','
                << format_g17(r.sigma_x_local) << ',' << format_g17(r.sigma_y_local) << '\n';
        } else {
            out << format_g17(row.omega) << ",error,error,error,error,error\n";
        }
    }
}

void write_compare_csv(std::ostream& out, std::span<const CheckpointRow> rows,
                       const std::string& header_comment) {
    out << "# " << header_comment << "\n";
    out << "omega,t,mean_x_jump,sd_x_jump,mean_x_diff,sd_x_diff,z_x,"
           "mean_y_jump,sd_y_jump,mean_y_diff,sd_y_diff,z_y\n";
    for (const auto& r : rows) {
        out << format_g17(r.omega) << ',' << format_g17(r.t) << ',' << format_g17(r.mean_x_jump)
            << ',' << format_g17(r.sd_x_jump) << ',' << format_g17(r.mean_x_diff) << ','
            << format_g17(r.sd_x_diff) << ',' << format_g17(r.z_x) << ','
            << format_g17(r.mean_y_jump) << ',' << format_g17(r.sd_y_jump) << ','
            << format_g17(r.mean_y_diff) << ',' << format_g17(r.sd_y_diff) << ','
            << format_g17(r.z_y) << '\n';
    }
}

} // namespace preypred
