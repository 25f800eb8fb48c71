#pragma once

// Line-oriented experiment configuration: `section.key=value`, sections
// kernel1, kernel2, kernel3, grid, experiment. Unknown keys are errors.

#include <anf/error.hpp>
#include <anf/kernels.hpp>

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace anf {

enum class ExperimentKind {
  Sample,
  CrossingScan,
  WindowScan,
  GumbelStudy,
  BlockingStudy,
  Slice3D,
  Render,
  ExtremesStudy,  // alias of GumbelStudy: the extremes checks run inside it
};

inline std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sample: return "sample";
    case ExperimentKind::CrossingScan: return "cross";
    case ExperimentKind::WindowScan: return "window";
    case ExperimentKind::GumbelStudy: return "gumbel";
    case ExperimentKind::BlockingStudy: return "blocking";
    case ExperimentKind::Slice3D: return "slice3d";
    case ExperimentKind::Render: return "render";
    case ExperimentKind::ExtremesStudy: return "extremes";
  }
  return "unknown";
}

inline ExperimentKind parse_experiment(std::string_view name) {
  for (auto k : {ExperimentKind::Sample, ExperimentKind::CrossingScan, ExperimentKind::WindowScan,
                 ExperimentKind::GumbelStudy, ExperimentKind::BlockingStudy, ExperimentKind::Slice3D,
                 ExperimentKind::Render, ExperimentKind::ExtremesStudy})
    if (experiment_name(k) == name) return k;
  throw Error(ErrorKind::ConfigError, "unknown experiment '" + std::string(name) + "'");
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CrossingScan;
  KernelSpec kernel1 = KernelSpec::gaussian();
  KernelSpec kernel2 = KernelSpec::gaussian();
  std::optional<KernelSpec> kernel3;
  std::optional<double> eps;  // default 0.25 * kernel1.scale
  std::vector<double> sizes;
  std::vector<double> levels{0.0};
  std::vector<double> h_values{0.0, 1.0, 2.0, 3.0};
  double rho = 1.0;
  bool rescaled = false;  // crossing scan: also Cross_0(R, rho R^{K1(0)/K2(0)})
  std::size_t replicates = 100;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  double search_length = 1e4;  // slice3d
  double theta = 0.5;          // gumbel: exp-variance ratio
  std::vector<double> tail_x{1.0, 2.0, 4.0};
  std::vector<double> gumbel_x{-1.0, 0.0, 1.0, 2.0};
  std::size_t window = 1024;  // render: cells per side

  double grid_eps() const { return eps ? *eps : 0.25 * kernel1.scale; }

  void validate() const {
    try {
      kernel1.validate();
      kernel2.validate();
      if (kernel3) kernel3->validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
    if (!(grid_eps() > 0.0)) throw Error(ErrorKind::ConfigError, "grid.eps must be > 0");
    if (replicates < 1) throw Error(ErrorKind::ConfigError, "experiment.replicates must be >= 1");
    if (workers < 1) throw Error(ErrorKind::ConfigError, "experiment.workers must be >= 1");
    for (std::size_t i = 1; i < sizes.size(); ++i)
      if (!(sizes[i] > sizes[i - 1]))
        throw Error(ErrorKind::ConfigError, "experiment.sizes must be strictly increasing");
    for (double s : sizes)
      if (!(s > 1.0)) throw Error(ErrorKind::ConfigError, "experiment.sizes must be > 1");
    if (!(rho > 0.0)) throw Error(ErrorKind::ConfigError, "experiment.rho must be > 0");
    if (window < 2) throw Error(ErrorKind::ConfigError, "experiment.window must be >= 2");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!item.empty()) out.push_back(parse_real(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::uint64_t parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::ConfigError, "not an unsigned integer: '" + std::string(text) + "'");
  return value;
}

inline bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorKind::ConfigError, "not a boolean: '" + std::string(text) + "'");
}

}  // namespace detail

/// Applies one `section.key=value` setting.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos)
    throw Error(ErrorKind::ConfigError, "key without section: '" + std::string(key) + "'");
  const auto section = key.substr(0, dot);
  const auto field = key.substr(dot + 1);
  const auto unknown = [&] {
    return Error(ErrorKind::ConfigError, "unknown key '" + std::string(key) + "'");
  };

  if (section == "kernel1" || section == "kernel2" || section == "kernel3") {
    KernelSpec* spec = &cfg.kernel1;
    if (section == "kernel2") spec = &cfg.kernel2;
    if (section == "kernel3") {
      if (!cfg.kernel3) cfg.kernel3 = KernelSpec::gaussian();
      spec = &*cfg.kernel3;
    }
    if (!set_kernel_field(*spec, field, value)) throw unknown();
    return;
  }
  if (section == "grid") {
    if (field == "eps") cfg.eps = parse_real(value);
    else throw unknown();
    return;
  }
  if (section != "experiment") throw Error(ErrorKind::ConfigError, "unknown section '" + std::string(section) + "'");

  if (field == "type") cfg.experiment = parse_experiment(value);
  else if (field == "sizes") cfg.sizes = detail::parse_list(value);
  else if (field == "levels") cfg.levels = detail::parse_list(value);
  else if (field == "h_values") cfg.h_values = detail::parse_list(value);
  else if (field == "rho") cfg.rho = parse_real(value);
  else if (field == "rescaled") cfg.rescaled = detail::parse_bool(value);
  else if (field == "replicates") cfg.replicates = detail::parse_unsigned(value);
  else if (field == "seed") cfg.master_seed = detail::parse_unsigned(value);
  else if (field == "workers") cfg.workers = detail::parse_unsigned(value);
  else if (field == "search_length") cfg.search_length = parse_real(value);
  else if (field == "theta") cfg.theta = parse_real(value);
  else if (field == "tail_x") cfg.tail_x = detail::parse_list(value);
  else if (field == "gumbel_x") cfg.gumbel_x = detail::parse_list(value);
  else if (field == "window") cfg.window = detail::parse_unsigned(value);
  else throw unknown();
}

/// Parses a config file body; blank lines and lines starting with '#' are skipped.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError,
                  "line " + std::to_string(lineno) + ": expected section.key=value");
    apply_setting(cfg, detail::trim(std::string_view(body).substr(0, eq)),
                  detail::trim(std::string_view(body).substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

}  // namespace anf
