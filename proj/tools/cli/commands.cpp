#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "xpharq/errors.hpp"
#include "xpharq/outage_asymptotic.hpp"
#include "xpharq/outage_bounds.hpp"
#include "xpharq/outage_exact.hpp"
#include "xpharq/quadrature.hpp"
#include "xpharq/special_functions.hpp"
#include "xpharq/throughput.hpp"

namespace xpharq::cli {

std::uint64_t default_seed() {
  const char* env = std::getenv("XPHARQ_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') return 0;
  return v;
}

namespace {

PowerProfile powers_for(std::size_t K, const std::vector<double>& snr_db) {
  if (snr_db.size() == 1) return PowerProfile::uniform(K, db_to_linear(snr_db[0]));
  if (snr_db.size() != K) {
    std::ostringstream os;
    os << "--snr-db needs 1 or " << K << " values, got " << snr_db.size();
    throw UsageError(os.str());
  }
  return PowerProfile::from_db(snr_db);
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format9(v[i]);
  }
  return s;
}

bool is_ir_quadrature_method(const std::string& m) {
  return m == "exact" || m == "oracle" || m == "upper";
}

}  // namespace

void check_outage_method(Scheme scheme, const std::string& method, std::size_t K) {
  std::ostringstream os;
  if (scheme == Scheme::inr) {
    if (method == "mc") return;
    if (is_ir_quadrature_method(method)) {
      if (K > kOracleMaxRounds) {
        os << "method '" << method << "' for inr uses quadrature, which supports K <= "
           << kOracleMaxRounds << " (got K=" << K << "); use --method mc";
        throw UsageError(os.str());
      }
      return;
    }
    os << "method '" << method << "' is not defined for scheme inr "
       << "(available: exact, oracle, upper, mc)";
    throw UsageError(os.str());
  }
  if (method == "exact") {
    if (K > 2) {
      os << "method 'exact' requires K <= 2 (got K=" << K
         << "); use 'oracle' (K <= 4), 'lower'/'upper' bounds or 'mc'";
      throw UsageError(os.str());
    }
  } else if (method == "foxh") {
    if (K != 2) throw UsageError("method 'foxh' requires K = 2");
  } else if (method == "oracle" || method == "upper") {
    if (K > kOracleMaxRounds) {
      os << "method '" << method << "' requires K <= " << kOracleMaxRounds
         << " (got K=" << K << "); use 'mc'";
      throw UsageError(os.str());
    }
  } else if (method != "asymptotic" && method != "lower" && method != "mc") {
    os << "unknown method '" << method
       << "' (expected exact, asymptotic, lower, upper, mc, oracle or foxh)";
    throw UsageError(os.str());
  }
}

OutageAnswer evaluate_outage(const OutageQuery& q) {
  const RateSchedule rates(q.rates);
  const std::size_t K = rates.rounds();
  const PowerProfile powers = powers_for(K, q.snr_db);
  check_outage_method(q.scheme, q.method, K);

  OutageAnswer a;
  if (q.method == "mc") {
    const SimConfig cfg{q.scheme, rates, powers, q.trials, q.seed, q.workers};
    a.estimate = estimate_outage(cfg);
    a.observed_failures =
        static_cast<std::uint64_t>(std::llround(a.estimate.value * static_cast<double>(q.trials)));
    return a;
  }
  if (q.scheme == Scheme::inr) {
    a.estimate = ir_outage_quadrature(powers, rates.total());
    return a;
  }
  if (q.method == "exact") {
    if (K == 1)
      a.estimate = {outage_k1(rates.rate(1), powers.snr_bar(1)), Method::closed_form, 0.0};
    else
      a.estimate = outage_k2_exact(rates, powers, q.tol);
  } else if (q.method == "foxh") {
    a.estimate = outage_k2_foxh(rates, powers);
  } else if (q.method == "asymptotic") {
    const double v = K == 1 ? std::expm1(rates.rate(1) * std::numbers::ln2) / powers.snr_bar(1)
                            : outage_asymptotic_general(rates, powers);
    a.estimate = {v, Method::asymptotic, 0.0};
  } else if (q.method == "lower") {
    a.estimate = {outage_lower(rates, powers), Method::lower_bound, 0.0};
  } else if (q.method == "upper") {
    a.estimate = outage_upper_ir(rates, powers);
    a.lower = outage_lower(rates, powers);
    a.gap = bound_gap(*a.lower, a.estimate.value);
  } else if (q.method == "oracle") {
    a.estimate = xp_outage_quadrature(rates, powers, std::max(q.tol, 1e-14));
  }
  return a;
}

std::string format_outage_record(const OutageQuery& q, const OutageAnswer& a,
                                 double elapsed_ms) {
  std::ostringstream os;
  os << "scheme=" << to_string(q.scheme) << " method=" << q.method
     << " K=" << q.rates.size() << " rates=" << join(q.rates, ',')
     << " snr_db=" << join(q.snr_db, ',') << " value=" << format9(a.estimate.value)
     << " uncertainty=" << format9(a.estimate.uncertainty);
  if (a.lower) os << " lower=" << format9(*a.lower);
  if (a.gap) os << " gap=" << format9(*a.gap);
  if (q.method == "mc") os << " trials=" << q.trials << " seed=" << q.seed;
  os << " time_ms=" << format9(elapsed_ms);
  return os.str();
}

void check_throughput_method(const std::string& method, std::size_t K) {
  if (method == "mc") return;
  if (method != "analytical")
    throw UsageError("unknown throughput method '" + method + "' (expected analytical or mc)");
  if (K > kOracleMaxRounds) {
    std::ostringstream os;
    os << "analytical throughput needs outage chains up to K=" << K
       << " but quadrature supports K <= " << kOracleMaxRounds << "; use --method mc";
    throw UsageError(os.str());
  }
}

ThroughputAnswer evaluate_throughput(const ThroughputQuery& q) {
  const RateSchedule rates(q.rates);
  const std::size_t K = rates.rounds();
  const PowerProfile powers = powers_for(K, q.snr_db);
  check_throughput_method(q.method, K);

  ThroughputAnswer a;
  if (q.method == "mc") {
    const ThroughputEstimate t =
        estimate_throughput(SimConfig{q.scheme, rates, powers, q.trials, q.seed, q.workers});
    a.value = t.value;
    a.uncertainty = t.ci_half_width;
    return a;
  }
  if (q.scheme == Scheme::xp) {
    a.chain = xp_outage_chain(rates, powers);
    for (std::size_t k = 1; k <= K; ++k)
      a.sources.push_back(k == 1 ? "closed-form" : k == 2 ? "exact" : "oracle");
  } else {
    a.chain = inr_outage_chain(rates, powers);
    a.sources.assign(K, "ir-quadrature");
  }
  a.value = throughput_analytical(q.scheme, rates, a.chain);
  return a;
}

std::string format_throughput_record(const ThroughputQuery& q,
                                     const ThroughputAnswer& a, double elapsed_ms) {
  std::ostringstream os;
  os << "scheme=" << to_string(q.scheme) << " method=" << q.method
     << " K=" << q.rates.size() << " rates=" << join(q.rates, ',')
     << " snr_db=" << join(q.snr_db, ',') << " throughput=" << format9(a.value)
     << " uncertainty=" << format9(a.uncertainty);
  if (!a.chain.empty()) {
    os << " chain=";
    for (std::size_t k = 0; k < a.chain.size(); ++k)
      os << (k ? ";" : "") << "P" << k + 1 << ":" << a.sources[k] << "="
         << format9(a.chain[k]);
  }
  if (q.method == "mc") os << " trials=" << q.trials << " seed=" << q.seed;
  os << " time_ms=" << format9(elapsed_ms);
  return os.str();
}

namespace {

struct SweepJob {
  double snr_db;
  std::vector<double> rates;
  Scheme scheme;
  std::string method;
};

std::string csv_row(const SweepJob& job, double value, double uncertainty,
                    const std::string& method_label, std::uint64_t seed) {
  std::ostringstream os;
  os << format9(job.snr_db) << ',' << job.rates.size() << ',' << join(job.rates, ';')
     << ',' << to_string(job.scheme) << ',' << method_label << ',' << format9(value)
     << ',' << format9(uncertainty) << ',' << seed;
  return os.str();
}

}  // namespace

std::string run_sweep(const SweepConfig& cfg, std::uint64_t seed, unsigned workers,
                      std::vector<std::string>* notes) {
  if (workers < 1) throw UsageError("--workers must be >= 1");
  const std::size_t K = cfg.rates.size();
  RateSchedule(cfg.rates);  // validates

  // Decide the (scheme, method) pairs up front so bad configs fail before work.
  std::vector<std::pair<Scheme, std::string>> pairs;
  for (Scheme s : cfg.schemes) {
    for (const auto& m : cfg.methods) {
      if (cfg.quantity == Quantity::throughput) {
        check_throughput_method(m, K);
        pairs.emplace_back(s, m);
        continue;
      }
      try {
        check_outage_method(s, m, K);
        pairs.emplace_back(s, m);
      } catch (const UsageError& e) {
        // A method that only makes sense for XP is skipped for INR rows.
        bool serves_xp = true;
        try {
          check_outage_method(Scheme::xp, m, K);
        } catch (const UsageError&) {
          serves_xp = false;
        }
        if (s == Scheme::inr && serves_xp) {
          if (notes) notes->push_back("skipping method '" + m + "' for scheme inr");
        } else {
          throw;
        }
      }
    }
  }

  std::vector<SweepJob> jobs;
  for (double x : cfg.axis_points()) {
    SweepJob base{cfg.snr_db, cfg.rates, Scheme::xp, {}};
    if (cfg.axis == Axis::snr_db) base.snr_db = x;
    else base.rates[0] = x;
    for (const auto& [s, m] : pairs) {
      SweepJob job = base;
      job.scheme = s;
      job.method = m;
      jobs.push_back(std::move(job));
    }
  }

  std::vector<std::string> rows(jobs.size());
  std::vector<std::string> job_notes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const SweepJob& job = jobs[i];
      try {
        if (cfg.quantity == Quantity::outage) {
          OutageQuery q{job.scheme, job.method, job.rates, {job.snr_db}, 1e-10,
                        cfg.trials, seed, 1};
          const OutageAnswer a = evaluate_outage(q);
          rows[i] = csv_row(job, a.estimate.value, a.estimate.uncertainty, job.method, seed);
          if (a.observed_failures && *a.observed_failures < kRareEventFailures)
            job_notes[i] = "rare-event regime at snr_db=" + format9(job.snr_db) + " (" +
                           std::to_string(*a.observed_failures) + " outages in " +
                           std::to_string(cfg.trials) + " trials)";
        } else {
          ThroughputQuery q{job.scheme, job.method, job.rates, {job.snr_db},
                            cfg.trials, seed, 1};
          const ThroughputAnswer a = evaluate_throughput(q);
          rows[i] = csv_row(job, a.value, a.uncertainty, "throughput-" + job.method, seed);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string out = std::string(kCsvHeader) + "\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out += rows[i];
    out += '\n';
    if (notes && !job_notes[i].empty()) notes->push_back(job_notes[i]);
  }
  return out;
}

std::string gnuplot_script(const SweepConfig& cfg, const std::string& csv_path) {
  std::ostringstream os;
  const bool snr_axis = cfg.axis == Axis::snr_db;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set grid\n"
     << "set xlabel '" << (snr_axis ? "average SNR (dB)" : "R_1 (bits/channel use)") << "'\n";
  if (cfg.quantity == Quantity::outage)
    os << "set logscale y\nset format y '10^{%L}'\nset ylabel 'outage probability'\n";
  else
    os << "set ylabel 'throughput (bits/channel use)'\n";
  // R_csv holds ';'-joined rates; real() reads its leading number, R_1.
  const std::string xcol = snr_axis ? "1" : "(real(strcol(3)))";
  os << "plot";
  bool first = true;
  for (Scheme s : cfg.schemes) {
    for (const auto& m : cfg.methods) {
      if (cfg.quantity == Quantity::outage) {
        try {
          check_outage_method(s, m, cfg.rates.size());
        } catch (const UsageError&) {
          continue;  // skipped by run_sweep too
        }
      }
      const std::string label =
          cfg.quantity == Quantity::outage ? m : "throughput-" + m;
      os << (first ? " " : ", \\\n     ") << "'" << csv_path << "' using " << xcol
         << ":(strcol(4) eq '" << to_string(s) << "' && strcol(5) eq '" << label
         << "' ? $6 : 1/0) with linespoints title '" << to_string(s) << " " << m << "'";
      first = false;
    }
  }
  os << "\n";
  return os.str();
}

std::string hbar_report(const std::vector<double>& rates_in) {
  const RateSchedule rates(rates_in);
  const HbarTable table = build_hbar_table(rates);
  const std::size_t K = rates.rounds();
  std::ostringstream os;
  os << "# K=" << K << " rates=" << join(rates_in, ',') << "\n";
  os << "k,i,c_ki\n";
  for (std::size_t k = 1; k <= K; ++k)
    for (std::size_t i = 0; i <= K - k; ++i)
      os << k << ',' << i << ',' << format9(table.coeff(k, i)) << "\n";
  os << "# hbar_{K,1}(1) = " << format9(hbar_eval(table, 1, 1.0))
     << "  (P_out,K ~ hbar / prod snr_bar_k)\n";
  return os.str();
}

int run_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!ok) ++failures;
  };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

  try {
    const double g = upper_incomplete_gamma(1.0, 0.7).real();
    check("gamma(1,x)=exp(-x)", rel(g, std::exp(-0.7)) < 1e-12, format9(g));

    const double h = incomplete_h11(1.0, 0.0);
    const double bessel = 2.0 * std::cyl_bessel_k(1.0, 2.0);
    check("fox-h b=0 vs 2 sqrt(z) K1", rel(h, bessel) < 1e-6,
          format9(h) + " vs " + format9(bessel));

    const RateSchedule r2{1.0, 1.0};
    const PowerProfile g2 = PowerProfile::uniform(2, 10.0);
    const double exact = outage_k2_exact(r2, g2).value;
    const double foxh = outage_k2_foxh(r2, g2).value;
    const double oracle = xp_outage_quadrature(r2, g2).value;
    check("K=2 exact vs fox-h", rel(foxh, exact) < 1e-6, format9(exact) + " " + format9(foxh));
    check("K=2 exact vs nested oracle", rel(oracle, exact) < 1e-8, format9(oracle));

    const OutageEstimate mc = estimate_outage(SimConfig{Scheme::xp, r2, g2, 200'000, 1, 1});
    const double sigma = std::sqrt(exact * (1 - exact) / 200'000.0);
    check("K=2 exact vs Monte Carlo (3 sigma)", std::abs(mc.value - exact) <= 3 * sigma,
          format9(mc.value));

    const RateSchedule r3{1.0, 1.0, 1.0};
    const double table = hbar_eval(build_hbar_table(r3), 1, 1.0);
    const double nested = hbar_nested_quadrature(r3, 1, 1.0).value;
    check("hbar_{3,1}(1) recursion vs nested quadrature", rel(table, nested) < 1e-8,
          format9(table) + " vs " + format9(nested));

    const PowerProfile g3 = PowerProfile::uniform(3, 10.0);
    const double lo = outage_lower(r3, g3);
    const double xp = xp_outage_quadrature(r3, g3).value;
    const double up = outage_upper_ir(r3, g3).value;
    check("K=3 lower <= exact <= upper", lo <= xp && xp <= up,
          format9(lo) + " <= " + format9(xp) + " <= " + format9(up));
  } catch (const std::exception& e) {
    check("selftest aborted", false, e.what());
  }
  return failures;
}

}  // namespace xpharq::cli
