#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vjm/chain.hpp"

namespace vjm::cli {

// Model input that does not match the file schema. path() locates the
// offending field, e.g. "legs[0].elements[2].type".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ElementRecord {
  ChainElement<double> element;
  std::optional<double> q;  // configuration value, passive joints only
};

struct LegRecord {
  Transform<double> base;
  std::vector<ElementRecord> elements;
  Eigen::Vector3d lever_v = Eigen::Vector3d::Zero();
  std::optional<Eigen::Matrix3d> orientation_R;  // identity when absent
};

struct ModelFile {
  std::string frame = "platform";
  std::vector<LegRecord> legs;
};

bool operator==(const ElementRecord& a, const ElementRecord& b);
bool operator==(const LegRecord& a, const LegRecord& b);
bool operator==(const ModelFile& a, const ModelFile& b);

ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::string& path);
std::string serialize_model(const ModelFile& model);

ChainModel<double> chain_of(const LegRecord& leg);
ChainConfig<double> config_of(const LegRecord& leg);

}  // namespace vjm::cli
