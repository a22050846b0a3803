#ifndef STOCHDISS_TABLE_HPP
#define STOCHDISS_TABLE_HPP

#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stochdiss/config.hpp"

namespace stochdiss {

/// Tab-separated table. Comment lines start with '#'; the first non-comment
/// line names the columns (with units in brackets), one row per line follows.
struct Table {
  std::vector<std::string> comments;  ///< without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of the column whose name is `name` or starts with `name[`.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

/// Provenance comments: version tag, table name, config hash, master seed
/// and the resolved configuration on one line.
std::vector<std::string> provenance_comments(const RunConfig& cfg, const std::string& table_name);

/// Numbers are written with 17 significant digits, so the text is a pure
/// function of the values.
void write_table(std::ostream& out, const Table& table);
void write_table_file(const std::string& path, const Table& table);

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

/// Append-only store of finished ensembles keyed by cell, values kept as
/// hexfloats so a resumed sweep reproduces the original bits. A file written
/// under a different config hash is discarded.
class CellCache {
 public:
  CellCache(std::string path, std::string config_hash);

  std::optional<std::vector<double>> find(const std::string& key) const;
  void store(const std::string& key, const std::vector<double>& values);
  std::size_t size() const;

 private:
  std::string path_;
  std::map<std::string, std::vector<double>> entries_;
  mutable std::mutex mutex_;
};

}  // namespace stochdiss

#endif  // STOCHDISS_TABLE_HPP
