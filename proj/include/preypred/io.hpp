#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "preypred/analysis.hpp"
#include "preypred/model.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

// Deterministic float formatting (no locale, fixed precision) so repeated
// runs produce byte-identical files.
std::string format_g17(double v);
std::string format_g(double v, int precision);

// One-line summary of the resolved model parameters for output headers.
std::string params_summary(const ModelParams& p);

// Trajectory CSV: '#' header comment, `t,x,y,xi` rows (xi = eps*ln x, empty
// when x = 0), and a '#'-prefixed JSON footer record with the termination.
void write_trajectory_csv(std::ostream& out, const ModelParams& p, const Trajectory& traj,
                          const std::string& header_comment);

// Single JSON-lines records.
std::string extinction_stats_jsonl(const ExtinctionStats& s);
std::string funnel_report_jsonl(const FunnelReport& r);

// Extinction table: one row per omega.
void write_table1_csv(std::ostream& out, std::span<const ExtinctionStats> rows,
                      const std::string& header_comment);

// Funnel table row; `error` is set when the omega could not be processed.
struct Table2Row {
    double omega = 0.0;
    bool ok = false;
    FunnelReport report;
    std::string error;
};

void write_table2_csv(std::ostream& out, std::span<const Table2Row> rows,
                      const std::string& header_comment);

void write_compare_csv(std::ostream& out, std::span<const CheckpointRow> rows,
                       const std::string& header_comment);

} // namespace preypred
