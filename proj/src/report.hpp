#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace vjm::cli {

enum class Format { pretty, csv, json };

std::optional<Format> parse_format(std::string_view name);

// Shortest form that always round-trips: 17 significant digits.
std::string format_number(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Ordered list of named sections rendered the same way in every format.
// Matrices are written row-major.
class Report {
 public:
  void add(std::string name, Eigen::MatrixXd value);
  void add(std::string name, Eigen::VectorXd value);
  void add(std::string name, double value);
  void add(std::string name, int value);
  void add(std::string name, std::string value);
  void add(std::string name, Table value);

  std::string render(Format format) const;

 private:
  using Value = std::variant<Eigen::MatrixXd, Eigen::VectorXd, double, int, std::string, Table>;
  std::vector<std::pair<std::string, Value>> sections_;
};

Format detect_format(std::string_view text);

// Reads back a matrix written by Report::render or hand-written in the same
// layout. For json the matrix is taken from the named key (or the whole
// document if it is an array); for pretty and csv from the block under the
// named header, falling back to the first block of numeric rows.
Eigen::MatrixXd parse_matrix(std::string_view text, Format format, std::string_view key = "stiffness");
Eigen::MatrixXd parse_matrix(std::string_view text, std::string_view key = "stiffness");

}  // namespace vjm::cli
