#include "uccap/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "uccap/decision.hpp"
#include "uccap/errors.hpp"

namespace uccap {

double RunConfig::effective_alpha_decision() const {
  if (c_fa && c_fr) return bayes_alpha(*c_fa, *c_fr);
  return alpha_decision;
}

namespace {

using nlohmann::json;

void read_if(const json& doc, const char* key, double& out) {
  if (doc.contains(key)) out = doc.at(key).get<double>();
}
void read_if(const json& doc, const char* key, int& out) {
  if (doc.contains(key)) out = doc.at(key).get<int>();
}
void read_if(const json& doc, const char* key, bool& out) {
  if (doc.contains(key)) out = doc.at(key).get<bool>();
}
void read_if(const json& doc, const char* key, std::uint64_t& out) {
  if (doc.contains(key)) out = doc.at(key).get<std::uint64_t>();
}
void read_opt(const json& doc, const char* key, std::optional<double>& out) {
  if (doc.contains(key) && !doc.at(key).is_null()) out = doc.at(key).get<double>();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config parse failure: ") + e.what());
  }
  RunConfig cfg;
  try {
    read_if(doc, "c0", cfg.c0);
    read_if(doc, "epsilon_near", cfg.epsilon_near);
    read_if(doc, "epsilon_clip", cfg.epsilon_clip);
    read_if(doc, "n_boot", cfg.n_boot);
    read_if(doc, "alpha_decision", cfg.alpha_decision);
    read_opt(doc, "c_fa", cfg.c_fa);
    read_opt(doc, "c_fr", cfg.c_fr);
    if (doc.contains("estimator_policy")) {
      cfg.estimator_policy =
          estimator_policy_from_name(doc.at("estimator_policy").get<std::string>());
    }
    read_if(doc, "seed", cfg.seed);

    if (doc.contains("loss")) {
      const std::string name = doc.at("loss").get<std::string>();
      if (name == "bce") cfg.loss = LossKind::bce;
      else if (name == "soft_ce") cfg.loss = LossKind::soft_ce;
      else if (name == "brier") cfg.loss = LossKind::brier;
      else throw Error(ErrorCode::InvalidConfig, "unknown loss '" + name + "'");
    }
    if (doc.contains("anchor_mode")) {
      cfg.anchor_mode = anchor_mode_from_name(doc.at("anchor_mode").get<std::string>());
    }
    read_opt(doc, "alpha_r", cfg.alpha_r);
    read_opt(doc, "lambda2", cfg.lambda2);
    read_if(doc, "weight_near", cfg.weight_near);
    read_if(doc, "weight_pos_mult", cfg.weight_pos_mult);
    read_if(doc, "weight_cap", cfg.weight_cap);
    read_if(doc, "same_sample_targets", cfg.same_sample_targets);

    read_if(doc, "k_splits", cfg.k_splits);
    if (doc.contains("split_ratios")) {
      auto v = doc.at("split_ratios").get<std::vector<double>>();
      if (v.size() != 3) {
        throw Error(ErrorCode::InvalidConfig, "split_ratios needs 3 entries");
      }
      cfg.split_ratios = {v[0], v[1], v[2]};
    }

    read_if(doc, "n_outer", cfg.sim.n_outer);
    read_if(doc, "n_inner", cfg.sim.n_inner);
    read_if(doc, "near_mass", cfg.sim.near_mass);
    read_if(doc, "bilateral_frac", cfg.sim.bilateral_frac);
    if (doc.contains("families")) {
      cfg.sim.families.clear();
      for (const auto& f : doc.at("families")) {
        cfg.sim.families.push_back(dist_family_from_name(f.get<std::string>()));
      }
    }
    if (doc.contains("n_grid")) {
      cfg.sim.n_grid = doc.at("n_grid").get<std::vector<std::size_t>>();
    }
    if (doc.contains("margin_range")) {
      auto v = doc.at("margin_range").get<std::vector<double>>();
      if (v.size() != 2 || !(v[0] < v[1])) {
        throw Error(ErrorCode::InvalidConfig, "margin_range needs [lo, hi]");
      }
      cfg.sim.margin_lo = v[0];
      cfg.sim.margin_hi = v[1];
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config field failure: ") + e.what());
  }
  // shared knobs propagate into the simulation block
  cfg.sim.n_boot = cfg.n_boot;
  cfg.sim.c0 = cfg.c0;
  cfg.sim.epsilon_near = cfg.epsilon_near;
  cfg.sim.seed = cfg.seed;
  cfg.sim.policy = cfg.estimator_policy;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open config '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::optional<double> parse_optional_field(const std::string& text, std::size_t line_no,
                                           const char* what) {
  if (text.empty()) return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("line ") + std::to_string(line_no) +
                                           ": bad " + what + " value '" + text + "'");
  }
}

bool same_optional(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

}  // namespace

std::vector<DimensionSample> ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open data file '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "empty data file '" + path + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "dim_id,value,lsl,usl,nominal") {
    throw Error(ErrorCode::ParseError,
                "line 1: expected header 'dim_id,value,lsl,usl,nominal'");
  }

  std::map<std::string, DimensionSample> grouped;
  std::map<std::string, std::size_t> first_line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                             ": expected 5 fields, got " +
                                             std::to_string(fields.size()));
    }
    const std::string& dim = fields[0];
    if (dim.empty()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": empty dim_id");
    }
    const auto value = parse_optional_field(fields[1], line_no, "measurement");
    if (!value) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": missing measurement value");
    }
    SpecLimits spec;
    spec.lsl = parse_optional_field(fields[2], line_no, "lsl");
    spec.usl = parse_optional_field(fields[3], line_no, "usl");
    spec.nominal = parse_optional_field(fields[4], line_no, "nominal");

    auto [it, inserted] = grouped.try_emplace(dim);
    if (inserted) {
      it->second.dim_id = dim;
      it->second.spec = spec;
      first_line[dim] = line_no;
    } else if (!same_optional(it->second.spec.lsl, spec.lsl) ||
               !same_optional(it->second.spec.usl, spec.usl) ||
               !same_optional(it->second.spec.nominal, spec.nominal)) {
      throw Error(ErrorCode::InconsistentSpec,
                  "line " + std::to_string(line_no) + ": spec for '" + dim +
                      "' differs from line " + std::to_string(first_line[dim]));
    }
    it->second.values.push_back(*value);
  }

  std::vector<DimensionSample> samples;
  samples.reserve(grouped.size());
  for (auto& [dim, sample] : grouped) {
    if (sample.values.empty()) {
      throw Error(ErrorCode::EmptyDimension, "dimension '" + dim + "' has no rows");
    }
    sample.validate();
    samples.push_back(std::move(sample));
  }
  return samples;  // std::map iteration is already dim_id order
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace uccap
