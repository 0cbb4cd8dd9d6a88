#include "model_file.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

namespace vjm::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string field(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) throw SchemaError(field(path, key), "unknown field");
  }
}

const json& required(const json& j, std::string_view key, const std::string& path) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(field(path, key), "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
  return x;
}

Eigen::MatrixXd matrix(const json& j, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw SchemaError(path, "expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = item(path, static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw SchemaError(row_path, "expected " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = number(row[static_cast<std::size_t>(c)], item(row_path, static_cast<std::size_t>(c)));
    }
  }
  return m;
}

Eigen::Vector3d vector3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 numbers");
  Eigen::Vector3d v;
  for (std::size_t i = 0; i < 3; ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], item(path, i));
  return v;
}

Eigen::Matrix3d rotation(const json& j, const std::string& path) {
  const Eigen::Matrix3d r = matrix(j, path, 3, 3);
  if (!is_rotation(r)) throw SchemaError(path, "not a proper rotation matrix");
  return r;
}

Transform<double> transform(const json& j, const std::string& path) {
  require_object(j, path, {"rotation", "translation"});
  Transform<double> t = Transform<double>::identity();
  if (j.contains("rotation")) t.rotation = rotation(j["rotation"], field(path, "rotation"));
  if (j.contains("translation")) t.translation = vector3(j["translation"], field(path, "translation"));
  return t;
}

ElementRecord element(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const json& type_node = required(j, "type", path);
  const std::string type_path = field(path, "type");
  if (!type_node.is_string()) throw SchemaError(type_path, "expected a string");
  const std::string type = type_node.get<std::string>();

  if (type == "rigid_link") {
    require_object(j, path, {"type", "offset"});
    return {RigidLink<double>{transform(required(j, "offset", path), field(path, "offset"))}, std::nullopt};
  }
  if (type == "virtual_spring") {
    require_object(j, path, {"type", "axes", "stiffness"});
    const json& axes = required(j, "axes", path);
    const std::string axes_path = field(path, "axes");
    if (!axes.is_array() || axes.empty() || axes.size() > 6) throw SchemaError(axes_path, "expected 1 to 6 axis names");
    VirtualSpring<double> spring;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const auto m = axes[i].is_string() ? parse_motion(axes[i].get<std::string>()) : std::nullopt;
      if (!m) throw SchemaError(item(axes_path, i), "expected one of tx, ty, tz, rx, ry, rz");
      spring.axes.push_back(*m);
    }
    const auto d = static_cast<Eigen::Index>(spring.axes.size());
    spring.stiffness = matrix(required(j, "stiffness", path), field(path, "stiffness"), d, d);
    return {spring, std::nullopt};
  }
  if (type == "passive_revolute" || type == "passive_prismatic") {
    require_object(j, path, {"type", "axis", "q"});
    const Eigen::Vector3d axis = vector3(required(j, "axis", path), field(path, "axis"));
    std::optional<double> q;
    if (j.contains("q")) q = number(j["q"], field(path, "q"));
    if (type == "passive_revolute") return {PassiveRevolute<double>{axis}, q};
    return {PassivePrismatic<double>{axis}, q};
  }
  throw SchemaError(type_path, "unknown element type '" + type + "'");
}

LegRecord leg(const json& j, const std::string& path) {
  require_object(j, path, {"base", "elements", "lever_v", "orientation_R"});
  LegRecord out;
  out.base = transform(required(j, "base", path), field(path, "base"));
  const json& elements = required(j, "elements", path);
  const std::string elements_path = field(path, "elements");
  if (!elements.is_array()) throw SchemaError(elements_path, "expected a list");
  for (std::size_t i = 0; i < elements.size(); ++i) out.elements.push_back(element(elements[i], item(elements_path, i)));
  out.lever_v = vector3(required(j, "lever_v", path), field(path, "lever_v"));
  if (j.contains("orientation_R")) out.orientation_R = rotation(j["orientation_R"], field(path, "orientation_R"));

  try {
    chain_of(out).validate();
  } catch (const ModelError& e) {
    throw SchemaError(path, e.what());
  }
  return out;
}

ordered_json to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ordered_json to_json(const Eigen::Vector3d& v) { return ordered_json::array({v(0), v(1), v(2)}); }

ordered_json to_json(const Transform<double>& t) {
  ordered_json j;
  j["rotation"] = to_json(Eigen::MatrixXd(t.rotation));
  j["translation"] = to_json(t.translation);
  return j;
}

ordered_json to_json(const ElementRecord& e) {
  ordered_json j;
  std::visit(
      [&](const auto& el) {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, RigidLink<double>>) {
          j["type"] = "rigid_link";
          j["offset"] = to_json(el.offset);
        } else if constexpr (std::is_same_v<T, VirtualSpring<double>>) {
          j["type"] = "virtual_spring";
          j["axes"] = ordered_json::array();
          for (Motion m : el.axes) j["axes"].push_back(std::string(to_string(m)));
          j["stiffness"] = to_json(Eigen::MatrixXd(el.stiffness));
        } else {
          j["type"] = std::is_same_v<T, PassiveRevolute<double>> ? "passive_revolute" : "passive_prismatic";
          j["axis"] = to_json(el.axis);
          if (e.q) j["q"] = *e.q;
        }
      },
      e.element);
  return j;
}

bool same_element(const ChainElement<double>& a, const ChainElement<double>& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, RigidLink<double>>) {
          return x.offset.rotation == y.offset.rotation && x.offset.translation == y.offset.translation;
        } else if constexpr (std::is_same_v<T, VirtualSpring<double>>) {
          return x.axes == y.axes && x.stiffness.rows() == y.stiffness.rows() &&
                 x.stiffness.cols() == y.stiffness.cols() && x.stiffness == y.stiffness;
        } else {
          return x.axis == y.axis;
        }
      },
      a);
}

}  // namespace

bool operator==(const ElementRecord& a, const ElementRecord& b) {
  return same_element(a.element, b.element) && a.q == b.q;
}

bool operator==(const LegRecord& a, const LegRecord& b) {
  if (a.orientation_R.has_value() != b.orientation_R.has_value()) return false;
  if (a.orientation_R && *a.orientation_R != *b.orientation_R) return false;
  return a.base.rotation == b.base.rotation && a.base.translation == b.base.translation &&
         a.elements == b.elements && a.lever_v == b.lever_v;
}

bool operator==(const ModelFile& a, const ModelFile& b) { return a.frame == b.frame && a.legs == b.legs; }

ModelFile parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  require_object(root, "", {"frame", "legs"});
  const json& frame = required(root, "frame", "");
  if (!frame.is_string()) throw SchemaError("frame", "expected a string");
  const json& legs = required(root, "legs", "");
  if (!legs.is_array() || legs.empty()) throw SchemaError("legs", "expected a non-empty list");

  ModelFile model;
  model.frame = frame.get<std::string>();
  for (std::size_t i = 0; i < legs.size(); ++i) model.legs.push_back(leg(legs[i], item("legs", i)));
  return model;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot open model file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::string serialize_model(const ModelFile& model) {
  ordered_json root;
  root["frame"] = model.frame;
  root["legs"] = ordered_json::array();
  for (const auto& l : model.legs) {
    ordered_json j;
    j["base"] = to_json(l.base);
    j["elements"] = ordered_json::array();
    for (const auto& e : l.elements) j["elements"].push_back(to_json(e));
    j["lever_v"] = to_json(l.lever_v);
    if (l.orientation_R) j["orientation_R"] = to_json(Eigen::MatrixXd(*l.orientation_R));
    root["legs"].push_back(j);
  }
  return root.dump(2) + "\n";
}

ChainModel<double> chain_of(const LegRecord& leg) {
  ChainModel<double> chain;
  chain.base = leg.base;
  for (const auto& e : leg.elements) chain.elements.push_back(e.element);
  return chain;
}

ChainConfig<double> config_of(const LegRecord& leg) {
  const ChainModel<double> chain = chain_of(leg);
  ChainConfig<double> cfg = ChainConfig<double>::zero(chain);
  Eigen::Index j = 0;
  for (const auto& e : leg.elements) {
    if (std::holds_alternative<PassiveRevolute<double>>(e.element) ||
        std::holds_alternative<PassivePrismatic<double>>(e.element)) {
      cfg.q(j++) = e.q.value_or(0.0);
    }
  }
  return cfg;
}

}  // namespace vjm::cli
