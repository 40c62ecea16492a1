#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep_config.hpp"
#include "xpharq/harq_core.hpp"
#include "xpharq/monte_carlo.hpp"

namespace xpharq::cli {

/// Bad combination of user inputs (method/K, method/scheme).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// XPHARQ_SEED if set and numeric, else 0.
std::uint64_t default_seed();

struct OutageQuery {
  Scheme scheme = Scheme::xp;
  std::string method = "exact";
  std::vector<double> rates;
  std::vector<double> snr_db;  // one per round, or one value for all rounds
  double tol = 1e-10;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct OutageAnswer {
  OutageEstimate estimate;
  std::optional<double> lower;  // set for the upper bound, with the gap
  std::optional<double> gap;
  std::optional<std::uint64_t> observed_failures;  // MC only
};

OutageAnswer evaluate_outage(const OutageQuery& q);
/// Throws UsageError when `method` cannot serve (scheme, K).
void check_outage_method(Scheme scheme, const std::string& method, std::size_t K);

std::string format_outage_record(const OutageQuery& q, const OutageAnswer& a,
                                 double elapsed_ms);

struct ThroughputQuery {
  Scheme scheme = Scheme::xp;
  std::string method = "analytical";  // analytical | mc
  std::vector<double> rates;
  std::vector<double> snr_db;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct ThroughputAnswer {
  double value = 0.0;
  double uncertainty = 0.0;          // 95% half-width for mc, 0 for analytical
  std::vector<double> chain;         // analytical: P_out,1..K
  std::vector<std::string> sources;  // analytical: method per chain entry
};

ThroughputAnswer evaluate_throughput(const ThroughputQuery& q);
void check_throughput_method(const std::string& method, std::size_t K);

std::string format_throughput_record(const ThroughputQuery& q,
                                     const ThroughputAnswer& a, double elapsed_ms);

inline constexpr const char* kCsvHeader =
    "snr_db,K,R_csv,scheme,method,value,uncertainty,seed";

/// Runs every (axis point x scheme x method) job and returns the CSV text.
/// Rows come out in axis order whatever the worker count. Non-fatal notes
/// (skipped combinations, rare-event MC points) are appended to `notes`.
std::string run_sweep(const SweepConfig& cfg, std::uint64_t seed, unsigned workers,
                      std::vector<std::string>* notes = nullptr);

/// gnuplot script that plots `csv_path` one series per (scheme, method).
std::string gnuplot_script(const SweepConfig& cfg, const std::string& csv_path);

/// Human-readable dump of the hbar coefficient table.
std::string hbar_report(const std::vector<double>& rates);

/// Oracle cross-checks; prints one PASS/FAIL line each, returns failures.
int run_selftest(std::ostream& out);

}  // namespace xpharq::cli
