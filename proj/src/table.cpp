#include "stochdiss/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stochdiss {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hexfloat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("table: bad number '" + s + "'");
  return v;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name || columns[i].rfind(name + "[", 0) == 0) return i;
  throw std::out_of_range("table: no column '" + name + "'");
}

std::vector<double> Table::values(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

std::vector<std::string> provenance_comments(const RunConfig& cfg, const std::string& table_name) {
  return {kVersionTag,
          "table: " + table_name,
          "config_hash: " + config_hash(cfg),
          "master_seed: " + std::to_string(cfg.master_seed),
          "config: " + provenance_text(cfg)};
}

void write_table(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "\t" : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("table: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_table_file(const std::string& path, const Table& table) {
  // Write then rename, so an interrupted run never leaves a truncated table.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    write_table(out, table);
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot rename " + tmp);
}

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    auto fields = split(line, '\t');
    if (!have_header) {
      t.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size()) throw std::runtime_error("table: ragged row");
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_number(f));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("table: missing column header");
  return t;
}

Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_table(in);
}

CellCache::CellCache(std::string path, std::string config_hash) : path_(std::move(path)) {
  const std::string stamp = "# cache " + config_hash;
  {
    std::ifstream in(path_);
    std::string line;
    if (in && std::getline(in, line) && line == stamp) {
      while (std::getline(in, line)) {
        // Complete lines end in a lone '.'; anything else is a torn write.
        const auto fields = split(line, ' ');
        if (fields.size() < 3 || fields.back() != ".") continue;
        std::vector<double> values;
        try {
          for (std::size_t i = 1; i + 1 < fields.size(); ++i) values.push_back(parse_number(fields[i]));
        } catch (const std::runtime_error&) {
          continue;
        }
        entries_[fields[0]] = std::move(values);
      }
      return;
    }
  }
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write cache " + path_);
  out << stamp << '\n';
}

std::optional<std::vector<double>> CellCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CellCache::store(const std::string& key, const std::vector<double>& values) {
  if (key.find_first_of(" \n") != std::string::npos) throw std::invalid_argument("cache key with whitespace");
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  out << key;
  for (double v : values) out << ' ' << hexfloat(v);
  out << " .\n";
  out.flush();
  entries_[key] = values;
}

std::size_t CellCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace stochdiss
