// xpharq: outage / throughput queries, sweeps, hbar tables, self checks.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "xpharq/errors.hpp"

namespace {

using namespace xpharq;
using namespace xpharq::cli;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

Scheme scheme_arg(const std::string& s) {
  try {
    return parse_scheme(s);
  } catch (const std::exception&) {
    throw UsageError("unknown scheme '" + s + "' (expected xp or inr)");
  }
}

std::vector<double> list_arg(const std::string& s, const char* flag) {
  try {
    auto v = parse_number_list(s);
    if (v.empty()) throw std::invalid_argument("empty");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot parse ") + flag + " '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XP-HARQ / HARQ-IR outage and throughput over Rayleigh block fading"};
  app.require_subcommand(1);

  // outage
  auto* outage = app.add_subcommand("outage", "single-point outage probability");
  std::string o_scheme = "xp", o_method = "exact", o_rates, o_snr;
  double o_tol = 1e-10;
  std::uint64_t o_trials = 1'000'000;
  std::optional<std::uint64_t> o_seed;
  unsigned o_workers = 1;
  outage->add_option("--scheme", o_scheme, "xp | inr")->capture_default_str();
  outage->add_option("--method", o_method,
                     "exact | asymptotic | lower | upper | mc | oracle | foxh")
      ->capture_default_str();
  outage->add_option("--rates", o_rates, "R_1,...,R_K in bits/channel use")->required();
  outage->add_option("--snr-db", o_snr, "average SNR in dB, one value or one per round")
      ->required();
  outage->add_option("--tol", o_tol, "quadrature tolerance")->capture_default_str();
  outage->add_option("--trials", o_trials, "Monte Carlo trials")->capture_default_str();
  outage->add_option("--seed", o_seed, "Monte Carlo seed (default $XPHARQ_SEED or 0)");
  outage->add_option("--workers", o_workers, "Monte Carlo threads")->capture_default_str();

  // throughput
  auto* thr = app.add_subcommand("throughput", "long-run throughput");
  std::string t_scheme = "xp", t_method = "analytical", t_rates, t_snr;
  std::uint64_t t_trials = 100'000;
  std::optional<std::uint64_t> t_seed;
  unsigned t_workers = 1;
  bool t_csv = false;
  thr->add_option("--scheme", t_scheme, "xp | inr")->capture_default_str();
  thr->add_option("--method", t_method, "analytical | mc")->capture_default_str();
  thr->add_option("--rates", t_rates, "R_1,...,R_K")->required();
  thr->add_option("--snr-db", t_snr, "average SNR in dB")->required();
  thr->add_option("--trials", t_trials, "Monte Carlo HARQ cycles")->capture_default_str();
  thr->add_option("--seed", t_seed, "Monte Carlo seed");
  thr->add_option("--workers", t_workers, "Monte Carlo threads")->capture_default_str();
  thr->add_flag("--csv", t_csv, "print a CSV header and row instead of a record");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "config-driven sweep to CSV");
  std::string s_config, s_out, s_gnuplot;
  unsigned s_workers = 1;
  std::optional<std::uint64_t> s_seed;
  sweep->add_option("--config", s_config, "sweep config file")->required()->check(
      CLI::ExistingFile);
  sweep->add_option("--out", s_out, "CSV output path (default stdout)");
  sweep->add_option("--workers", s_workers, "parallel jobs")->capture_default_str();
  sweep->add_option("--seed", s_seed, "overrides config seed and $XPHARQ_SEED");
  sweep->add_option("--gnuplot", s_gnuplot, "also write a gnuplot script here");

  // hbar
  auto* hbar = app.add_subcommand("hbar", "dump the high-SNR coefficient table");
  std::string h_rates;
  hbar->add_option("--rates", h_rates, "R_1,...,R_K with K >= 2")->required();

  auto* selftest = app.add_subcommand("selftest", "run oracle cross-checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*outage) {
      OutageQuery q;
      q.scheme = scheme_arg(o_scheme);
      q.method = o_method;
      q.rates = list_arg(o_rates, "--rates");
      q.snr_db = list_arg(o_snr, "--snr-db");
      q.tol = o_tol;
      q.trials = o_trials;
      q.seed = o_seed ? *o_seed : default_seed();
      q.workers = o_workers;
      const auto t0 = std::chrono::steady_clock::now();
      const OutageAnswer a = evaluate_outage(q);
      std::cout << format_outage_record(q, a, ms_since(t0)) << "\n";
      if (a.observed_failures && *a.observed_failures < kRareEventFailures)
        std::cerr << "warning: only " << *a.observed_failures
                  << " outages observed; estimate is unreliable (rare-event regime), "
                     "consider --method asymptotic or more --trials\n";
      return 0;
    }
    if (*thr) {
      ThroughputQuery q;
      q.scheme = scheme_arg(t_scheme);
      q.method = t_method;
      q.rates = list_arg(t_rates, "--rates");
      q.snr_db = list_arg(t_snr, "--snr-db");
      q.trials = t_trials;
      q.seed = t_seed ? *t_seed : default_seed();
      q.workers = t_workers;
      const auto t0 = std::chrono::steady_clock::now();
      const ThroughputAnswer a = evaluate_throughput(q);
      if (t_csv) {
        std::string r;
        for (std::size_t i = 0; i < q.rates.size(); ++i)
          r += (i ? ";" : "") + format9(q.rates[i]);
        std::cout << kCsvHeader << "\n"
                  << format9(q.snr_db.front()) << ',' << q.rates.size() << ',' << r << ','
                  << to_string(q.scheme) << ",throughput-" << q.method << ','
                  << format9(a.value) << ',' << format9(a.uncertainty) << ',' << q.seed
                  << "\n";
      } else {
        std::cout << format_throughput_record(q, a, ms_since(t0)) << "\n";
      }
      return 0;
    }
    if (*sweep) {
      std::ifstream in(s_config);
      std::stringstream text;
      text << in.rdbuf();
      const SweepConfig cfg = parse_sweep_config(text.str());
      const std::uint64_t seed = s_seed ? *s_seed : cfg.seed ? *cfg.seed : default_seed();
      std::vector<std::string> notes;
      const std::string csv = run_sweep(cfg, seed, s_workers, &notes);
      for (const auto& n : notes) std::cerr << "note: " << n << "\n";
      if (s_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(s_out, std::ios::binary);
        out << csv;
        if (!out) throw std::runtime_error("cannot write " + s_out);
      }
      if (!s_gnuplot.empty()) {
        std::ofstream gp(s_gnuplot);
        gp << gnuplot_script(cfg, s_out.empty() ? "sweep.csv" : s_out);
        if (!gp) throw std::runtime_error("cannot write " + s_gnuplot);
      }
      return 0;
    }
    if (*hbar) {
      std::cout << hbar_report(list_arg(h_rates, "--rates"));
      return 0;
    }
    if (*selftest) {
      const int failures = run_selftest(std::cout);
      return failures == 0 ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "config error: " << s_config << ": " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
