#pragma once

// Minimal CSV reading used by the report and CLI tests: comment-aware, section-aware.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace csv_util {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> comments;  // "# key=value" lines

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

/// Parses the leading table of a qproots CSV file. A second "# <name>" section marker
/// (e.g. "# predictions") switches tables; `section` selects which one to return
/// (empty string = the first).
inline Table parse_csv(const std::string& text, const std::string& section = "") {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::string current_section;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        table.comments[body.substr(0, eq)] = body.substr(eq + 1);
      } else if (body.find(' ') == std::string::npos) {
        // single-word comment = section marker (e.g. "# predictions")
        current_section = body;
        if (current_section == section) header_seen = false;
      }
      continue;
    }
    if (current_section != section) continue;
    if (!header_seen) {
      table.header = split_csv_line(line);
      header_seen = true;
    } else {
      table.rows.push_back(split_csv_line(line));
    }
  }
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace csv_util
