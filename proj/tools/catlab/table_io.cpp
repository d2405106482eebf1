#include "table_io.hpp"

#include <cstdio>
#include <fstream>

#include "catlab/version.hpp"

namespace catlab_cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* b = std::get_if<bool>(&cell)) return *b;
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const nlohmann::ordered_json& meta, const Table& table) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) jrow.push_back(cell_json(cell));
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("out: cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("out: write to '" + path + "' failed");
}

namespace {

double want_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config: " + key + ": expected a number");
  return v.get<double>();
}

std::int64_t want_integer(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config: " + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string want_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config: " + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

void load_config(const std::string& path, RunConfig* cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  for (const auto& [key, value] : doc.items()) {
    if (key == "gamma") cfg->gamma = want_number(value, key);
    else if (key == "alpha") cfg->alpha = want_number(value, key);
    else if (key == "temp") cfg->temp = want_number(value, key);
    else if (key == "tmin") cfg->tmin = want_number(value, key);
    else if (key == "tmax") cfg->tmax = want_number(value, key);
    else if (key == "tstep") cfg->tstep = want_number(value, key);
    else if (key == "x0") cfg->x0 = want_number(value, key);
    else if (key == "eps0") cfg->eps0 = want_number(value, key);
    else if (key == "seed") cfg->seed = static_cast<std::uint64_t>(want_integer(value, key));
    else if (key == "mode") cfg->mode = want_string(value, key);
    else if (key == "margin") cfg->margin = want_number(value, key);
    else if (key == "delta") cfg->delta = want_number(value, key);
    else if (key == "steps") cfg->steps = want_integer(value, key);
    else if (key == "out") cfg->out = want_string(value, key);
    else if (key == "format") cfg->format = want_string(value, key);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
}

nlohmann::ordered_json config_meta(const std::string& subcommand, const RunConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["tool"] = "catlab";
  meta["version"] = catlab::kVersion;
  meta["subcommand"] = subcommand;
  meta["gamma"] = cfg.gamma;
  meta["alpha"] = cfg.alpha;
  meta["temp"] = cfg.temp;
  meta["tmin"] = cfg.tmin;
  meta["tmax"] = cfg.tmax;
  meta["tstep"] = cfg.tstep;
  meta["x0"] = cfg.x0;
  meta["eps0"] = cfg.eps0;
  meta["seed"] = cfg.seed;
  meta["mode"] = cfg.mode;
  meta["margin"] = cfg.margin;
  meta["delta"] = cfg.delta;
  meta["steps"] = cfg.steps;
  meta["format"] = cfg.format;
  return meta;
}

}  // namespace catlab_cli
