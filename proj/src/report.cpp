#include "report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "model_file.hpp"

namespace vjm::cli {

namespace {

constexpr int kColumnWidth = 25;

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> numbers(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < row.size(); ++i) out.push_back(format_number(row(i)));
  return out;
}

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::optional<double> parse_double(const std::string& token) {
  if (token.empty()) return std::nullopt;
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) return std::nullopt;
  return x;
}

std::optional<std::vector<double>> numeric_row(const std::string& line, Format format) {
  std::vector<std::string> tokens;
  if (format == Format::csv) {
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) tokens.push_back(trim(field));
  } else {
    std::istringstream in(line);
    for (std::string t; in >> t;) tokens.push_back(t);
  }
  if (tokens.empty()) return std::nullopt;
  std::vector<double> row;
  for (const auto& t : tokens) {
    const auto x = parse_double(t);
    if (!x) return std::nullopt;
    row.push_back(*x);
  }
  return row;
}

bool is_header(const std::string& line, std::string_view key, Format format) {
  const std::string t = trim(line);
  if (format == Format::csv) return t == "# " + std::string(key);
  return t.rfind(std::string(key) + " (", 0) == 0 || t == std::string(key) + ":";
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw SchemaError("matrix", "no numeric rows found");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw SchemaError("matrix[" + std::to_string(r) + "]", "row length differs from the first row");
    }
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

Eigen::MatrixXd parse_text_matrix(std::string_view text, Format format, std::string_view key) {
  const auto lines = lines_of(text);
  std::size_t start = 0;
  bool found = false;
  for (std::size_t i = 0; i < lines.size() && !found; ++i) {
    if (is_header(lines[i], key, format)) {
      start = i + 1;
      found = true;
    }
  }
  // Pretty vectors sit on their header line: "name: a  b  c".
  const std::string inline_prefix = std::string(key) + ": ";
  for (std::size_t i = 0; i < lines.size() && !found && format == Format::pretty; ++i) {
    const std::string t = trim(lines[i]);
    if (t.rfind(inline_prefix, 0) != 0) continue;
    if (auto row = numeric_row(t.substr(inline_prefix.size()), format)) return to_matrix({*row});
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty() || (format == Format::csv && t.front() == '#' && rows.empty() && !found)) continue;
    auto row = numeric_row(t, format);
    if (row) {
      rows.push_back(std::move(*row));
    } else if (!rows.empty() || found) {
      break;
    }
  }
  return to_matrix(rows);
}

Eigen::MatrixXd parse_json_matrix(std::string_view text, std::string_view key) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  std::string path = "";
  if (j.is_object()) {
    path = std::string(key);
    if (!j.contains(path)) throw SchemaError(path, "missing required field");
    j = j[path];
  }
  if (!j.is_array()) throw SchemaError(path, "expected a list of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) throw SchemaError(row_path, "expected a list of numbers");
    std::vector<double> row;
    for (const auto& x : j[r]) {
      if (!x.is_number()) throw SchemaError(row_path, "expected a list of numbers");
      row.push_back(x.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return to_matrix(rows);
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) {
  if (name == "pretty") return Format::pretty;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  return std::nullopt;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Report::add(std::string name, Eigen::MatrixXd value) { sections_.emplace_back(std::move(name), std::move(value)); }
void Report::add(std::string name, Eigen::VectorXd value) { sections_.emplace_back(std::move(name), std::move(value)); }
void Report::add(std::string name, double value) { sections_.emplace_back(std::move(name), value); }
void Report::add(std::string name, int value) { sections_.emplace_back(std::move(name), value); }
void Report::add(std::string name, std::string value) { sections_.emplace_back(std::move(name), std::move(value)); }
void Report::add(std::string name, Table value) { sections_.emplace_back(std::move(name), std::move(value)); }

std::string Report::render(Format format) const {
  std::ostringstream out;
  if (format == Format::json) out << "{\n";

  for (std::size_t s = 0; s < sections_.size(); ++s) {
    const auto& [name, value] = sections_[s];
    const bool last = s + 1 == sections_.size();

    if (const auto* m = std::get_if<Eigen::MatrixXd>(&value)) {
      if (format == Format::pretty) {
        out << name << " (" << m->rows() << " x " << m->cols() << "):\n";
        if (m->rows() == 0 || m->cols() == 0) out << "  (none)\n";
        for (Eigen::Index r = 0; r < m->rows() && m->cols() > 0; ++r) {
          out << ' ';
          for (const auto& x : numbers(m->row(r))) out << padded(x, kColumnWidth);
          out << '\n';
        }
      } else if (format == Format::csv) {
        out << "# " << name << '\n';
        for (Eigen::Index r = 0; r < m->rows() && m->cols() > 0; ++r) out << join(numbers(m->row(r)), ",") << '\n';
      } else {
        out << "  " << json_string(name) << ": [";
        for (Eigen::Index r = 0; r < m->rows(); ++r) {
          std::vector<std::string> row;
          for (Eigen::Index c = 0; c < m->cols(); ++c) row.push_back(json_number((*m)(r, c)));
          out << (r ? ",\n    [" : "\n    [") << join(row, ", ") << ']';
        }
        out << (m->rows() ? "\n  ]" : "]");
      }
    } else if (const auto* v = std::get_if<Eigen::VectorXd>(&value)) {
      const auto items = numbers(v->transpose());
      if (format == Format::pretty) {
        out << name << ": " << join(items, "  ") << '\n';
      } else if (format == Format::csv) {
        out << "# " << name << '\n' << join(items, ",") << '\n';
      } else {
        std::vector<std::string> js;
        for (Eigen::Index i = 0; i < v->size(); ++i) js.push_back(json_number((*v)(i)));
        out << "  " << json_string(name) << ": [" << join(js, ", ") << ']';
      }
    } else if (const auto* t = std::get_if<Table>(&value)) {
      if (format == Format::pretty) {
        std::vector<std::size_t> width(t->columns.size());
        for (std::size_t c = 0; c < width.size(); ++c) {
          width[c] = t->columns[c].size();
          for (const auto& row : t->rows) width[c] = std::max(width[c], row[c].size());
        }
        out << name << ":\n";
        const auto print = [&](const std::vector<std::string>& row) {
          out << ' ';
          for (std::size_t c = 0; c < row.size(); ++c) out << ' ' << padded(row[c], width[c]);
          out << '\n';
        };
        print(t->columns);
        for (const auto& row : t->rows) print(row);
      } else if (format == Format::csv) {
        out << "# " << name << '\n';
        std::vector<std::string> header;
        for (const auto& c : t->columns) header.push_back(csv_field(c));
        out << join(header, ",") << '\n';
        for (const auto& row : t->rows) {
          std::vector<std::string> fields;
          for (const auto& f : row) fields.push_back(csv_field(f));
          out << join(fields, ",") << '\n';
        }
      } else {
        out << "  " << json_string(name) << ": [";
        for (std::size_t r = 0; r < t->rows.size(); ++r) {
          std::vector<std::string> fields;
          for (std::size_t c = 0; c < t->columns.size(); ++c) {
            fields.push_back(json_string(t->columns[c]) + ": " + json_string(t->rows[r][c]));
          }
          out << (r ? ",\n    {" : "\n    {") << join(fields, ", ") << '}';
        }
        out << (t->rows.empty() ? "]" : "\n  ]");
      }
    } else {
      std::string text;
      std::string json_text;
      if (const auto* d = std::get_if<double>(&value)) {
        text = format_number(*d);
        json_text = json_number(*d);
      } else if (const auto* i = std::get_if<int>(&value)) {
        text = json_text = std::to_string(*i);
      } else {
        text = std::get<std::string>(value);
        json_text = json_string(text);
      }
      if (format == Format::pretty) {
        out << name << ": " << text << '\n';
      } else if (format == Format::csv) {
        out << csv_field(name) << ',' << csv_field(text) << '\n';
      } else {
        out << "  " << json_string(name) << ": " << json_text;
      }
    }
    if (format == Format::json) out << (last ? "\n" : ",\n");
  }

  if (format == Format::json) out << "}\n";
  return out.str();
}

Format detect_format(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) return Format::json;
  // csv is recognised by its section comments or by a comma-separated
  // numeric row; pretty text may contain commas inside values.
  for (const auto& line : lines_of(text)) {
    const std::string t = trim(line);
    if (t.rfind("# ", 0) == 0) return Format::csv;
    if (t.find(',') != std::string::npos && numeric_row(t, Format::csv)) return Format::csv;
  }
  return Format::pretty;
}

Eigen::MatrixXd parse_matrix(std::string_view text, Format format, std::string_view key) {
  return format == Format::json ? parse_json_matrix(text, key) : parse_text_matrix(text, format, key);
}

Eigen::MatrixXd parse_matrix(std::string_view text, std::string_view key) {
  return parse_matrix(text, detect_format(text), key);
}

}  // namespace vjm::cli
