#pragma once

// Result rows and their CSV rendering.

#include <anf/kernels.hpp>
#include <anf/stats.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anf {

inline constexpr const char* kCsvHeader =
    "experiment,kernel1,kernel2,R,rho,level,h,replicates,successes,p_hat,ci_low,ci_high,"
    "closed_form_reference,master_seed";

struct ResultRow {
  std::string experiment;
  std::string kernel1;
  std::string kernel2;
  double R = 0.0;
  double rho = 1.0;
  double level = 0.0;
  std::optional<double> h;
  std::size_t replicates = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::optional<double> closed_form_reference;
  std::uint64_t master_seed = 0;
};

/// Fills the frequency columns from a success count.
inline ResultRow make_row(std::string experiment, std::string kernel1, std::string kernel2,
                          double R, double rho, double level, std::optional<double> h,
                          std::size_t successes, std::size_t replicates,
                          std::optional<double> reference, std::uint64_t seed) {
  ResultRow row{std::move(experiment), std::move(kernel1), std::move(kernel2), R, rho, level, h,
                replicates, successes};
  row.p_hat = static_cast<double>(successes) / static_cast<double>(replicates);
  const auto ci = wilson_interval(successes, replicates);
  row.ci_low = ci.low;
  row.ci_high = ci.high;
  row.closed_form_reference = reference;
  row.master_seed = seed;
  return row;
}

inline std::string to_csv_line(const ResultRow& r) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  std::string line = r.experiment;
  line += ',' + r.kernel1 + ',' + r.kernel2;
  line += ',' + format_real(r.R) + ',' + format_real(r.rho) + ',' + format_real(r.level);
  line += ',' + opt(r.h);
  line += ',' + std::to_string(r.replicates) + ',' + std::to_string(r.successes);
  line += ',' + format_real(r.p_hat) + ',' + format_real(r.ci_low) + ',' + format_real(r.ci_high);
  line += ',' + opt(r.closed_form_reference);
  line += ',' + std::to_string(r.master_seed);
  return line;
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) out += to_csv_line(r) + "\n";
  return out;
}

}  // namespace anf
