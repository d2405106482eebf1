#ifndef CATLAB_TOOLS_TABLE_IO_HPP
#define CATLAB_TOOLS_TABLE_IO_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace catlab_cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> cells) { rows.push_back(std::move(cells)); }
};

/// Doubles at 17 significant digits ('.' decimal separator), enough to
/// round-trip any binary double through text.
std::string format_double(double v);

/// CSV artifact: header row, LF line endings, cells per format_double.
/// Byte-identical for identical inputs.
std::string to_csv(const Table& table);

/// JSON artifact: {"meta": ..., "columns": [...], "rows": [[...], ...]}.
std::string to_json(const nlohmann::ordered_json& meta, const Table& table);

/// Writes content to path; throws std::runtime_error on IO failure.
void write_file(const std::string& path, const std::string& content);

/// Key/value run configuration mirroring the flag grammar. Unknown keys or
/// wrong value types raise ConfigError with the offending key path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  double gamma = 0.2;
  double alpha = 2.0;
  double temp = 0.25;
  double tmin = 0.0;
  double tmax = 0.5;
  double tstep = 0.005;
  double x0 = 0.999;
  double eps0 = 0.0;
  std::uint64_t seed = 42;
  std::string mode = "minimal";
  double margin = 0.05;
  double delta = 0.1;
  std::int64_t steps = 10000;
  std::string out;
  std::string format = "csv";
};

/// Loads a JSON config file into cfg (missing keys keep their defaults).
void load_config(const std::string& path, RunConfig* cfg);

/// Resolved-config echo for the artifact meta block.
nlohmann::ordered_json config_meta(const std::string& subcommand, const RunConfig& cfg);

}  // namespace catlab_cli

#endif  // CATLAB_TOOLS_TABLE_IO_HPP
