#include "sweep_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace xpharq::cli {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  const std::string_view t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument("expected a nonnegative integer, got '" + std::string(t) + "'");
  return v;
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(item));
  return out;
}

std::string format_exact(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

std::string format9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string_view to_string(Quantity q) {
  return q == Quantity::outage ? "outage" : "throughput";
}

std::string_view to_string(Axis a) { return a == Axis::snr_db ? "snr_db" : "r1"; }

std::vector<double> SweepConfig::axis_points() const {
  std::vector<double> pts;
  const long n = std::lround(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) pts.push_back(start + static_cast<double>(i) * step);
  return pts;
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");

    try {
      if (key == "quantity") {
        if (value == "outage") cfg.quantity = Quantity::outage;
        else if (value == "throughput") cfg.quantity = Quantity::throughput;
        else throw std::invalid_argument("quantity must be outage or throughput");
      } else if (key == "axis") {
        if (value == "snr_db") cfg.axis = Axis::snr_db;
        else if (value == "r1") cfg.axis = Axis::r1;
        else throw std::invalid_argument("axis must be snr_db or r1");
      } else if (key == "start") {
        cfg.start = parse_double(value);
      } else if (key == "stop") {
        cfg.stop = parse_double(value);
      } else if (key == "step") {
        cfg.step = parse_double(value);
        if (!(cfg.step > 0.0)) throw std::invalid_argument("step must be positive");
      } else if (key == "rates") {
        cfg.rates = parse_number_list(value);
      } else if (key == "snr_db") {
        cfg.snr_db = parse_double(value);
      } else if (key == "methods") {
        cfg.methods = split_list(value);
      } else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& s : split_list(value)) cfg.schemes.push_back(parse_scheme(s));
      } else if (key == "seed") {
        cfg.seed = parse_u64(value);
      } else if (key == "trials") {
        cfg.trials = parse_u64(value);
        if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (cfg.rates.empty()) throw ParseError(line_no, "missing required key 'rates'");
  if (cfg.methods.empty()) throw ParseError(line_no, "missing required key 'methods'");
  if (cfg.schemes.empty()) throw ParseError(line_no, "schemes list is empty");
  if (cfg.stop < cfg.start) throw ParseError(line_no, "stop must be >= start");
  return cfg;
}

std::string emit_sweep_config(const SweepConfig& cfg) {
  auto join_numbers = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_exact(v[i]);
    return s;
  };
  std::ostringstream os;
  os << "quantity = " << to_string(cfg.quantity) << "\n"
     << "axis = " << to_string(cfg.axis) << "\n"
     << "start = " << format_exact(cfg.start) << "\n"
     << "stop = " << format_exact(cfg.stop) << "\n"
     << "step = " << format_exact(cfg.step) << "\n"
     << "rates = " << join_numbers(cfg.rates) << "\n"
     << "snr_db = " << format_exact(cfg.snr_db) << "\n"
     << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) os << (i ? "," : "") << cfg.methods[i];
  os << "\nschemes = ";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    os << (i ? "," : "") << to_string(cfg.schemes[i]);
  os << "\n";
  if (cfg.seed) os << "seed = " << *cfg.seed << "\n";
  os << "trials = " << cfg.trials << "\n";
  return os.str();
}

}  // namespace xpharq::cli
