// tsv.hpp
// Line-oriented TSV reading and writing. All corpus files are UTF-8,
// tab-separated, "\n" line endings, no header row.

#pragma once

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rankins/errors.hpp"
#include "rankins/util.hpp"

namespace rankins {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Calls row_fn(fields, line_number) for every non-empty line. Enforces the
// expected column count, naming file and line on violation.
inline void read_tsv(const std::string& path, std::size_t n_cols,
                     const std::function<void(const std::vector<std::string>&,
                                              std::size_t)>& row_fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != n_cols) {
      throw IngestError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(n_cols) + " columns, got " +
                        std::to_string(fields.size()));
    }
    row_fn(fields, line_no);
  }
}

class TsvWriter {
 public:
  explicit TsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IngestError("cannot open file for writing: " + path);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << '\t';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
};

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string file_digest(const std::string& path) {
  return to_hex(fnv1a64(read_file_bytes(path)));
}

}  // namespace rankins
