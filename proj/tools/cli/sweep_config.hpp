#pragma once

// Sweep configuration: flat UTF-8 `key = value` lines, `#` starts a comment,
// lists are comma-separated.
//
//   quantity = outage          # outage | throughput
//   axis     = snr_db          # snr_db | r1
//   start    = 0
//   stop     = 40
//   step     = 5
//   rates    = 1,1,1           # R_1..R_K; R_1 is overwritten on the r1 axis
//   snr_db   = 20              # fixed SNR for the r1 axis
//   methods  = exact,asymptotic,mc
//   schemes  = xp,inr
//   seed     = 1
//   trials   = 100000

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xpharq/monte_carlo.hpp"

namespace xpharq::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class Quantity { outage, throughput };
enum class Axis { snr_db, r1 };

struct SweepConfig {
  Quantity quantity = Quantity::outage;
  Axis axis = Axis::snr_db;
  double start = 0.0;
  double stop = 40.0;
  double step = 5.0;
  std::vector<double> rates;
  double snr_db = 20.0;
  std::vector<std::string> methods;
  std::vector<Scheme> schemes{Scheme::xp};
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 100'000;

  bool operator==(const SweepConfig&) const = default;

  /// Axis values start, start+step, ..., up to stop inclusive.
  std::vector<double> axis_points() const;
};

SweepConfig parse_sweep_config(std::string_view text);
std::string emit_sweep_config(const SweepConfig& cfg);

std::vector<double> parse_number_list(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

/// Shortest decimal form that reads back to the same double.
std::string format_exact(double v);
/// Nine significant digits, the CSV number format.
std::string format9(double v);

std::string_view to_string(Quantity q);
std::string_view to_string(Axis a);

}  // namespace xpharq::cli
