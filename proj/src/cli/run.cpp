#include "qisim/cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qisim/error_analysis.hpp"
#include "qisim/homodyne.hpp"
#include "qisim/receiver.hpp"

namespace qisim::cli {

namespace {

namespace fs = std::filesystem;

constexpr Hypothesis kHypotheses[] = {Hypothesis::H1, Hypothesis::H0};

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Report {
 public:
  void add(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << '\n';
  }
  void add(const std::string& key, double value) { add(key, format_number(value)); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

ProtocolParams at_gain(const ProtocolParams& base, double gain) {
  ProtocolParams p = base;
  p.beamsplitter_g.reset();
  p.gain = gain;
  return p;
}

void write_file(const fs::path& path, const std::string& content, RunResult& result) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  result.written.push_back(path.string());
}

std::string curves_csv(const RunConfig& config) {
  Csv csv({"receiver", "loss_mode", "G", "K", "R_Q", "pe_bound", "pe_exact"});
  const std::vector<double> grid = config.k_grid();
  for (double gain : config.effective_gains()) {
    for (const ErrorCurve& c : sweep(config.receivers, at_gain(config.params, gain), grid)) {
      for (const ErrorPoint& p : c.points)
        csv.row({to_string(c.receiver), to_string(c.loss_mode), format_number(gain),
                 format_number(p.probes), format_number(c.exponent), format_number(p.pe_bound),
                 format_number(p.pe_exact)});
    }
  }
  return csv.str();
}

std::string noise_budget_csv(const RunConfig& config) {
  Csv csv({"hypothesis", "G", "quadrature", "bath", "memory", "cross", "ancilla",
           "feedforward_vacuum", "split_vacuum", "total", "internal_added_photons"});
  for (double gain : config.effective_gains()) {
    for (Hypothesis h : kHypotheses) {
      const NoiseBudget b = practical_noise_budget(at_gain(config.params, gain), h);
      for (const BudgetEntry& e : b.entries)
        csv.row({to_string(h), format_number(gain), e.quadrature, format_number(e.bath),
                 format_number(e.memory), format_number(e.cross), format_number(e.ancilla),
                 format_number(e.feedforward_vacuum), format_number(e.split_vacuum),
                 format_number(e.total), format_number(b.internal_added_photons)});
    }
  }
  return csv.str();
}

struct MomentRow {
  HypothesisMoments analytic;
  bool has_mc = false;
  double delta = 0.0;
  double stderr_ = 0.0;
};

const char* const kQuadNames[] = {"xr2", "yr2", "xm2", "ym2"};

void check(double value, double expected, double se, const std::string& what, Report& report,
           RunResult& result) {
  const double z = se > 0.0 ? (value - expected) / se : (value == expected ? 0.0 : INFINITY);
  report.add(what + ".z", z);
  if (!(std::abs(z) <= kMonteCarloThreshold)) {
    result.failures.push_back(what + ": Monte Carlo " + format_number(value) + " vs analytic " +
                              format_number(expected) + " (" + format_number(z) + " SE)");
  }
}

std::vector<MomentRow> moment_rows(const RunConfig& config, bool with_mc, Report& report,
                                   RunResult& result) {
  std::vector<MomentRow> rows;
  for (double gain : config.effective_gains()) {
    const ProtocolParams p = at_gain(config.params, gain);
    for (Hypothesis h : kHypotheses) {
      MomentRow row{ideal_moments(p, h)};
      if (with_mc) {
        const MonteCarloMoments mc =
            monte_carlo_moments(p, h, config.monte_carlo.n_samples, config.monte_carlo.seed);
        const auto analytic = row.analytic.measured();
        const auto sampled = mc.moments.measured();
        double worst = -1.0;
        for (std::size_t k = 0; k < 4; ++k) {
          const double d = sampled[k] - analytic[k];
          const double se = mc.standard_errors[k];
          check(sampled[k], analytic[k], se,
                "mc.moments.G_" + label(gain) + "." + to_string(h) + "." + kQuadNames[k], report,
                result);
          const double z = std::abs(d) / se;
          if (z > worst) {
            worst = z;
            row.delta = d;
            row.stderr_ = se;
          }
        }
        row.has_mc = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string moments_csv(const std::vector<MomentRow>& rows, bool with_mc) {
  std::vector<std::string> header{"hypothesis", "G", "xr2", "yr2", "xm2", "ym2", "I"};
  if (with_mc) {
    header.push_back("analytic_vs_mc_delta");
    header.push_back("mc_stderr");
  }
  Csv csv(header);
  for (const MomentRow& r : rows) {
    const HypothesisMoments& m = r.analytic;
    std::vector<std::string> cells{to_string(m.hypothesis), format_number(m.gain),
                                   format_number(m.xr2),    format_number(m.yr2),
                                   format_number(m.xm2),    format_number(m.ym2),
                                   format_number(m.receiver_output)};
    if (with_mc) {
      cells.push_back(format_number(r.delta));
      cells.push_back(format_number(r.stderr_));
    }
    csv.row(cells);
  }
  return csv.str();
}

void decision_checks(const RunConfig& config, Report& report, RunResult& result) {
  DecisionOptions options;
  options.lo_amplitude = config.monte_carlo.lo_amplitude;
  for (double gain : config.effective_gains()) {
    const ProtocolParams p = at_gain(config.params, gain);
    const PairedStatistic s =
        paired_decision_statistic(p, config.monte_carlo.n_trials, config.monte_carlo.seed, options);
    const std::string prefix = "mc.statistic.G_" + label(gain);
    const HypothesisMoments m1 = ideal_moments(p, Hypothesis::H1);
    const HypothesisMoments m0 = ideal_moments(p, Hypothesis::H0);
    report.add(prefix + ".H1.mean", s.h1.mean);
    report.add(prefix + ".H0.mean", s.h0.mean);
    report.add(prefix + ".H0.variance", s.h0.variance);
    report.add(prefix + ".difference", s.mean_difference);
    report.add(prefix + ".difference_se", s.difference_se);
    check(s.h1.mean, m1.measured_power, s.h1.mean_se, prefix + ".H1.mean", report, result);
    check(s.h0.mean, m0.measured_power, s.h0.mean_se, prefix + ".H0.mean", report, result);
    check(s.mean_difference, m1.measured_power - m0.measured_power, s.difference_se,
          prefix + ".difference", report, result);
  }
}

void analytic_report(const RunConfig& config, Report& report) {
  const ProtocolParams& p = config.params;
  report.add("params.eta", p.eta);
  report.add("params.T", p.memory_transmissivity);
  report.add("params.N_S", p.signal_photons);
  report.add("params.N_B", p.bath_photons);
  report.add("params.r_A", p.squeezing_a);
  report.add("params.r_B", p.squeezing_b);
  report.add("params.gamma", p.homodyne_efficiency);
  report.add("params.K", p.probes());
  report.add("params.ci_factor", p.ci_factor);
  for (ReceiverKind r : {ReceiverKind::OPA, ReceiverKind::PC, ReceiverKind::SFG,
                         ReceiverKind::ClassicalCI})
    for (LossMode m : kAllLossModes)
      report.add(std::string("exponent.") + to_string(r) + "." + to_string(m), exponent(r, m, p));
  report.add("crossover_gain", crossover_gain(p));
  for (double gain : config.effective_gains()) {
    const ProtocolParams pg = at_gain(p, gain);
    const std::string prefix = "G_" + label(gain);
    report.add(prefix + ".gain", gain);
    report.add(prefix + ".beamsplitter_g", pg.resolved_g());
    for (LossMode m : kAllLossModes)
      report.add(prefix + ".exponent.CNOT." + to_string(m), exponent(ReceiverKind::CNOT, m, pg));
    report.add(prefix + ".snr_cnot", snr_cnot(pg));
    report.add(prefix + ".noise_power", noise_power(pg));
    report.add(prefix + ".noise_photons_nominal", nominal_added_photons(pg));
    report.add(prefix + ".noise_photons_discrepancy", nominal_added_photons(pg) - noise_power(pg));
    report.add(prefix + ".effective_signal_power", effective_signal_power(pg));
    report.add(prefix + ".exact_signal_power", exact_signal_power(pg));
    report.add(prefix + ".low_brightness_correction", low_brightness_correction(pg));
    const NoiseBudget b0 = practical_noise_budget(pg, Hypothesis::H0);
    report.add(prefix + ".internal_added_photons", b0.internal_added_photons);
    report.add(prefix + ".bath_share.H0", b0.bath_share());
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

RunResult run(const RunConfig& config, RunMode mode) {
  config.validate();
  RunResult result;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");

  const bool analytic = mode != RunMode::Verify;
  const bool with_mc =
      mode == RunMode::Verify || (mode == RunMode::Full && config.monte_carlo.enabled);

  Report report;
  report.add("mode", mode == RunMode::Full ? "run" : mode == RunMode::Verify ? "verify" : "curves");
  report.add("monte_carlo", with_mc ? "enabled" : "disabled");
  if (with_mc) {
    report.add("monte_carlo.seed", std::to_string(config.monte_carlo.seed));
    report.add("monte_carlo.n_samples", std::to_string(config.monte_carlo.n_samples));
    report.add("monte_carlo.n_trials", std::to_string(config.monte_carlo.n_trials));
  }
  if (analytic) analytic_report(config, report);

  if (analytic && config.emit.curves_csv) write_file(dir / "curves.csv", curves_csv(config), result);

  const std::vector<MomentRow> rows = moment_rows(config, with_mc, report, result);
  if (config.emit.moments_csv) write_file(dir / "moments.csv", moments_csv(rows, with_mc), result);
  if (with_mc) decision_checks(config, report, result);

  if (analytic && config.emit.noise_budget_csv)
    write_file(dir / "noise_budget.csv", noise_budget_csv(config), result);

  result.exit_status = result.failures.empty() ? 0 : 1;
  report.add("verification", with_mc ? (result.failures.empty() ? "pass" : "fail") : "skipped");
  for (std::size_t i = 0; i < result.failures.size(); ++i)
    report.add("failure." + std::to_string(i), result.failures[i]);
  if (config.emit.report) write_file(dir / "report.txt", report.str(), result);
  return result;
}

}  // namespace qisim::cli
