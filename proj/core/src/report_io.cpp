#include "regionsim/report_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "regionsim/error.hpp"

namespace regionsim {

namespace {

namespace fs = std::filesystem;

// Shortest round-trip representation: stable and lossless.
std::string num(double v) { return fmt::format("{}", v); }

template <typename T>
std::string opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

const MetricStat* find_metric(const BatchReport& b, std::string_view name) {
  for (const auto& m : b.metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

}  // namespace

void write_summary_csv(std::ostream& out, const RunReport& report) {
  out << "time_s,metric,value\n";
  for (const auto& ir : report.intervals) {
    const std::string t = num(ir.time_s);
    auto row = [&](std::string_view metric, const std::string& value) {
      out << t << ',' << metric << ',' << value << '\n';
    };
    row("coverage_pct", num(ir.coverage_pct));
    for (std::size_t m = 0; m < kEnergyModes; ++m) {
      row(fmt::format("energy_{}_j", to_string(static_cast<EnergyMode>(m))), num(ir.energy_j[m]));
    }
    row("energy_total_j", num(ir.total_energy_j));
    row("alive_nodes", fmt::format("{}", ir.alive));
    row("packets_generated", fmt::format("{}", ir.generated));
    row("packets_delivered", fmt::format("{}", ir.delivered));
  }
}

void write_sessions_csv(std::ostream& out, const RunReport& report) {
  out << "session,source_id,setup_hops,setup_energy_per_packet_j,generated,delivered,dropped,energy_j\n";
  for (const auto& s : report.sessions) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", s.index, s.source, opt(s.setup_hops),
                       opt(s.setup_energy_per_packet_j), s.generated, s.delivered, s.dropped, num(s.energy_j));
  }
}

void write_ledger_csv(std::ostream& out, const RunReport& report) {
  out << "time_s,node_id,tx_J,rx_J,sense_J,sleep_J,remaining_J\n";
  for (const auto& r : report.ledger_rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", num(r.time_s), r.node, num(r.spent_j[0]), num(r.spent_j[1]),
                       num(r.spent_j[2]), num(r.spent_j[3]), num(r.remaining_j));
  }
}

void write_flood_trace_csv(std::ostream& out, const RunReport& report) {
  out << "round,sender,receiver,region,f_m,action\n";
  for (const auto& t : report.flood_trace) {
    out << fmt::format("{},{},{},{},{},{}\n", t.round, t.sender, t.receiver, t.region, t.hop, to_string(t.action));
  }
}

void write_report_txt(std::ostream& out, const RunReport& report) {
  out << fmt::format("protocol            {}\n", to_string(report.protocol));
  out << fmt::format("seed                {}\n", report.seed);
  out << fmt::format("sensors             {}\n", report.node_count);
  out << fmt::format("duration_s          {}\n", num(report.duration_s));
  out << fmt::format("total_energy_j      {:.6f}\n", report.total_energy_j);
  for (std::size_t m = 0; m < kEnergyModes; ++m) {
    out << fmt::format("  {:<17} {:.6f}\n", to_string(static_cast<EnergyMode>(m)), report.energy_j[m]);
  }
  out << fmt::format("mean_node_energy_j  {:.6f}\n", report.mean_node_energy_j);
  out << fmt::format("conservation_err_j  {:.3e}\n", report.conservation_error_j);
  out << fmt::format("packets             {} generated, {} delivered (ratio {:.4f})\n", report.generated,
                     report.delivered, report.delivery_ratio);
  out << fmt::format("deaths              {}\n", report.deaths);
  out << fmt::format("lifetime_s          {}\n", num(report.lifetime_s));
  out << fmt::format("setups              {}\n", report.setups);
  out << fmt::format("flood               {} tx, {} rx, {} discarded, {} broadcasts\n", report.flood.tx,
                     report.flood.rx, report.flood.discards, report.flood.broadcasts);
  if (report.protocol == Protocol::Merr) {
    out << fmt::format("merr_hop_length_m   {:.3f}\n", report.merr_distance_m);
  }
  out << "coverage_pct       ";
  for (const auto& [t, c] : coverage_series(report)) out << fmt::format(" {}:{:.2f}", num(t), c);
  out << '\n';
  out << fmt::format("events              {}\n", report.event_count);
  out << fmt::format("digest              {:016x}\n", report.digest);
}

void write_batch_summary_csv(std::ostream& out, const BatchReport& batch) {
  out << "metric,mean,std,runs\n";
  for (const auto& m : batch.metrics) {
    out << fmt::format("{},{},{},{}\n", m.name, num(m.mean), num(m.stddev), batch.runs.size());
  }
}

void emit_outputs(const RunReport& report, const fs::path& dir, bool flood_trace) {
  ensure_dir(dir);
  write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); });
  write_file(dir / "sessions.csv", [&](std::ostream& o) { write_sessions_csv(o, report); });
  write_file(dir / "ledger.csv", [&](std::ostream& o) { write_ledger_csv(o, report); });
  if (flood_trace) {
    write_file(dir / "flood_trace.csv", [&](std::ostream& o) { write_flood_trace_csv(o, report); });
  }
  write_file(dir / "report.txt", [&](std::ostream& o) { write_report_txt(o, report); });
}

void emit_batch_outputs(const BatchReport& batch, const fs::path& dir, bool flood_trace) {
  ensure_dir(dir);
  write_file(dir / "batch_summary.csv", [&](std::ostream& o) { write_batch_summary_csv(o, batch); });
  write_file(dir / "report.txt", [&](std::ostream& o) {
    o << fmt::format("protocol  {}\nruns      {}\nseeds     {}..{}\n", to_string(batch.protocol), batch.runs.size(),
                     batch.base_seed, batch.base_seed + batch.runs.size() - (batch.runs.empty() ? 0 : 1));
    for (const auto& m : batch.metrics) o << fmt::format("{:<20} {:>14.6f} +- {:.6f}\n", m.name, m.mean, m.stddev);
  });
  for (const auto& r : batch.runs) emit_outputs(r, dir / fmt::format("run_{}", r.seed), flood_trace);
}

void emit_comparison(std::span<const BatchReport> batches, const fs::path& dir) {
  ensure_dir(dir);
  write_file(dir / "comparison.csv", [&](std::ostream& o) {
    o << "protocol,metric,mean,std\n";
    for (const auto& b : batches) {
      for (const auto& m : b.metrics) {
        o << fmt::format("{},{},{},{}\n", to_string(b.protocol), m.name, num(m.mean), num(m.stddev));
      }
    }
  });
  write_file(dir / "report.txt", [&](std::ostream& o) {
    o << "mean total network energy (J)\n";
    for (const auto& b : batches) {
      const MetricStat* e = find_metric(b, "total_energy_j");
      const MetricStat* d = find_metric(b, "delivery_ratio");
      o << fmt::format("  {:<5} {:>14.3f} +- {:<10.3f} delivery {:.4f}\n", to_string(b.protocol), e->mean, e->stddev,
                       d->mean);
    }
    const BatchReport* res = nullptr;
    for (const auto& b : batches) {
      if (b.protocol == Protocol::Res) res = &b;
    }
    if (res != nullptr) {
      o << "RES savings relative to\n";
      const double mine = find_metric(*res, "total_energy_j")->mean;
      for (const auto& b : batches) {
        if (&b == res) continue;
        const double theirs = find_metric(b, "total_energy_j")->mean;
        o << fmt::format("  {:<5} {:>8.2f} %\n", to_string(b.protocol),
                         theirs > 0.0 ? energy_savings(mine, theirs) : 0.0);
      }
    }
  });
  for (const auto& b : batches) emit_batch_outputs(b, dir / std::string(to_string(b.protocol)));
}

}  // namespace regionsim
