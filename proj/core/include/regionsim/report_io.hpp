#pragma once

// CSV and text outputs. Ordering and number formatting are fixed so that
// equal reports produce byte-identical files.

#include <filesystem>
#include <iosfwd>
#include <span>

#include "regionsim/simulator.hpp"

namespace regionsim {

void write_summary_csv(std::ostream& out, const RunReport& report);   // time_s,metric,value
void write_sessions_csv(std::ostream& out, const RunReport& report);
void write_ledger_csv(std::ostream& out, const RunReport& report);
void write_flood_trace_csv(std::ostream& out, const RunReport& report);
void write_report_txt(std::ostream& out, const RunReport& report);
void write_batch_summary_csv(std::ostream& out, const BatchReport& batch);  // metric,mean,std,runs

/// summary.csv, sessions.csv, ledger.csv, report.txt and, when requested,
/// flood_trace.csv. Creates `dir` if needed; throws Error(Io) with the path.
void emit_outputs(const RunReport& report, const std::filesystem::path& dir, bool flood_trace = false);

/// batch_summary.csv and report.txt in `dir`, plus emit_outputs() per run in run_<seed>/.
void emit_batch_outputs(const BatchReport& batch, const std::filesystem::path& dir, bool flood_trace = false);

/// comparison.csv (protocol,metric,mean,std) and report.txt with savings
/// relative to each comparator, plus emit_batch_outputs() per protocol.
void emit_comparison(std::span<const BatchReport> batches, const std::filesystem::path& dir);

}  // namespace regionsim
